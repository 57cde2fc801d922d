#ifndef DISPT_TENSOR_HPP
#define DISPT_TENSOR_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace dispt {

using cplx = std::complex<double>;

// Coefficients omega^{k,j}_{p,q,r}, k in {1..4}, all other indices in {1..n}.
class CoeffTensor {
  public:
    explicit CoeffTensor(int n);

    int n() const { return n_; }
    cplx& omega(int k, int j, int p, int q, int r) { return w_[idx(k, j, p, q, r)]; }
    cplx omega(int k, int j, int p, int q, int r) const { return w_[idx(k, j, p, q, r)]; }
    double max_abs() const;
    bool operator==(const CoeffTensor& o) const { return n_ == o.n_ && w_ == o.w_; }

  private:
    std::size_t idx(int k, int j, int p, int q, int r) const;
    int n_;
    std::vector<cplx> w_;
};

// Derived coefficients S^{l,j}_{p,q,r}, l in {1..5}.
class STensor {
  public:
    explicit STensor(int n);

    int n() const { return n_; }
    cplx& s(int l, int j, int p, int q, int r) { return s_[idx(l, j, p, q, r)]; }
    cplx s(int l, int j, int p, int q, int r) const { return s_[idx(l, j, p, q, r)]; }
    double max_abs() const;

  private:
    std::size_t idx(int l, int j, int p, int q, int r) const;
    int n_;
    std::vector<cplx> s_;
};

struct Violation {
    std::string condition;
    std::array<int, 4> index;  // (p,q,r,j) or the tuple natural to the condition
    cplx lhs, rhs;
    double gap;
};

struct ConditionReport {
    double tol = 0.0;
    std::map<std::string, bool> flags;  // A1,A2,B1..B9,C1..C4,G1..G5
    std::vector<Violation> violations;  // capped at 32 per condition

    bool get(const std::string& name) const;
    bool a_set() const;           // A1 and A2
    bool b_set() const;           // B1..B6
    bool b_extra() const;         // B7..B9 (corollary conditions)
    bool c_set() const;           // C1..C4
    bool g_set() const;           // G1..G5
    bool admissible() const;      // A-set and B-set
};

// Evaluates every condition family on the tensor. tol < 0 selects the
// default 1e-12 relative to the largest entry magnitude.
ConditionReport check_conditions(const CoeffTensor& omega, double tol = -1.0);

STensor derive_S(const CoeffTensor& omega);

// Maps f:{1..n}^4 -> C are stored flat with index ((p-1)*n+(q-1))*n*n setup;
// see map_index.
inline std::size_t map_index(int n, int p, int q, int r, int j) {
    return ((static_cast<std::size_t>(p - 1) * n + (q - 1)) * n + (r - 1)) * n + (j - 1);
}

struct GammaResult {
    bool in_gamma1 = false;  // f(p,q,r,j) = f(r,q,p,j)
    bool in_gamma2 = false;  // f(p,q,r,j) = conj f(j,r,q,p)
    std::vector<Violation> violations;
};

GammaResult gamma_membership(const std::vector<cplx>& f, int n, double tol);

// Group-averages each raw map onto Gamma and assembles the tensor through the
// C-condition index conventions; the result passes every condition family.
CoeffTensor project_admissible(const std::array<std::vector<cplx>, 4>& raw, int n);

struct N2FamilyParams {
    std::array<double, 4> kappa{}, tau{}, sigma{};
    std::array<cplx, 4> alpha{}, beta{}, gamma{};
};

CoeffTensor family_n2(const N2FamilyParams& params);
N2FamilyParams fit_family_n2(const CoeffTensor& omega);

CoeffTensor random_admissible(int n, std::mt19937_64& rng);

// A tensor satisfying (A1)-(A2) but generically violating the B conditions.
CoeffTensor random_inadmissible(int n, std::mt19937_64& rng);

// Perturbs one omega family of an admissible tensor so that the named
// condition (B1..B6) fails while (A1)-(A2) and the untouched families'
// conditions still hold.
CoeffTensor mutate_condition(const CoeffTensor& base, const std::string& condition,
                             std::mt19937_64& rng);

struct EquivalenceAudit {
    bool agreed = true;
    int trials = 0;
    struct Case {
        int trial;
        bool b, c, g;
    };
    std::vector<Case> disagreements;
};

// Samples admissible and A-but-not-B tensors and asserts the B/C/G verdicts
// coincide as booleans.
EquivalenceAudit equivalence_audit(int n, int trials, std::uint64_t seed);

}  // namespace dispt

#endif
