#ifndef DISPT_OPERATORS_HPP
#define DISPT_OPERATORS_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dispt/field.hpp"
#include "dispt/tensor.hpp"

namespace dispt {

// Optional polynomial tail: c3*|Q|^2 Q + c5*|Q|^4 Q.
struct Tail {
    cplx c3{0.0, 0.0};
    cplx c5{0.0, 0.0};
    bool empty() const { return c3 == cplx{0.0, 0.0} && c5 == cplx{0.0, 0.0}; }
};

struct SystemSpec {
    int n = 1;
    std::vector<double> a;       // size 1: scalar dispersion; size n: diagonal
    std::vector<double> lambda;  // size n
    CoeffTensor omega{1};
    STensor s{1};                // always derive_S(omega)
    Tail tail;

    bool scalar_a() const { return a.size() == 1; }
    double a_of(int j) const { return scalar_a() ? a[0] : a[static_cast<std::size_t>(j) - 1]; }
    double lambda_of(int j) const { return lambda[static_cast<std::size_t>(j) - 1]; }

    static SystemSpec make(std::vector<double> a, std::vector<double> lambda,
                           const CoeffTensor& omega, Tail tail = {});
    SystemSpec without_tail() const;
};

// Built-in systems: "single" (n=1; params = {mu1..mu6, nu}) and
// "wzy" (any n; params = {gamma, alpha}).
SystemSpec builtin_system(const std::string& name, int n, const std::vector<double>& params);

struct GaugeWeights {
    double e1 = -1.0, e2 = 1.0, e3 = -1.0;
};

struct GaugeRefusal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

TorusField nonlinearity_F(const SystemSpec& spec, const TorusField& Q);

// The five structure operators P_k^l(Q) applied to v.
TorusField apply_P(const STensor& s, int kind, int level, const TorusField& Q,
                   const TorusField& v);

enum class PCombo { P3m, P5m };
TorusField apply_P_combo(const STensor& s, int m, PCombo which, const TorusField& Q,
                         const TorusField& v);

TorusField apply_Lambda(const STensor& s, int k, int m, const TorusField& Q, const TorusField& v);
TorusField apply_Lambda_combo(const STensor& s, GaugeWeights w, int m, const TorusField& Q,
                              const TorusField& v);

// Componentwise division by the dispersion entries a_j.
TorusField apply_Ma_inverse(const SystemSpec& spec, const TorusField& f);

// V = dx^m Q + Ma^{-1} Lambda(Q) dx^{m-2} Q with default gauge weights.
// Non-scalar dispersion requires (B7)-(B9); otherwise refuses.
TorusField gauge_V(const SystemSpec& spec, const TorusField& Q, int m);

struct DxFParts {
    TorusField principal;        // P_1^1 dx^2 Y
    TorusField divergence;       // dx( P_2^2 dx Y )
    TorusField first_order;      // sum_{k=3..5} P_k^k dx Y
    TorusField cubic_remainder;  // explicit zero-derivative-on-Y remainder
    TorusField sum() const { return principal + divergence + first_order + cubic_remainder; }
};
DxFParts dxF_decomposition(const SystemSpec& spec, const TorusField& Q);

struct DxmParts {
    int m = 1;
    TorusField principal;   // P_1^1 dx^2 U
    TorusField divergence;  // dx( P_2^2 dx U )
    TorusField first_order; // (P_{3,m} + P_4^4 + P_{5,m}) dx U
    TorusField residual;    // spectral dx^m F minus the structured parts
    TorusField sum() const { return principal + divergence + first_order + residual; }
};
DxmParts dxm_decomposition(const SystemSpec& spec, const TorusField& Q, int m);

}  // namespace dispt

#endif
