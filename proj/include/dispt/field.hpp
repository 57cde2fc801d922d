#ifndef DISPT_FIELD_HPP
#define DISPT_FIELD_HPP

#include <complex>
#include <cstdint>
#include <vector>

namespace dispt {

using cplx = std::complex<double>;

// Uniform N-point grid on the 2*pi torus; N a power of two, N >= 8.
struct TorusGrid {
    int N;
    explicit TorusGrid(int N_);
    double node(int i) const { return 2.0 * 3.14159265358979323846 * i / N; }
    // Wavenumber of slot i in the FFT layout: i for i <= N/2, i - N otherwise.
    int wavenumber(int i) const { return i <= N / 2 ? i : i - N; }
};

// n-component complex field with dual value/coefficient representation.
// Coefficient slot i holds c_k with k = i (i <= N/2) or k = i - N, and
// f(x) = sum_k c_k e^{ikx}.
class TorusField {
  public:
    TorusField() : n_(0), N_(0) {}
    static TorusField zero(int n, int N);
    static TorusField from_values(int n, int N, std::vector<std::vector<cplx>> values);
    static TorusField from_coeffs(int n, int N, std::vector<std::vector<cplx>> coeffs);

    int n() const { return n_; }
    int N() const { return N_; }
    bool empty() const { return n_ == 0; }

    const std::vector<cplx>& values(int comp) const;
    const std::vector<cplx>& coeffs(int comp) const;
    cplx coeff(int comp, int k) const;  // by wavenumber, k in (-N/2, N/2]

    TorusField& operator+=(const TorusField& o);
    TorusField& operator-=(const TorusField& o);
    TorusField& operator*=(cplx z);

    TorusField component(int comp) const;          // single-component view copy
    static TorusField stack(const std::vector<TorusField>& comps);

    double max_abs_coeff() const;
    bool finite() const;

  private:
    int n_, N_;
    mutable std::vector<std::vector<cplx>> vals_, coefs_;
    mutable std::vector<bool> have_vals_, have_coefs_;
    void ensure_values(int comp) const;
    void ensure_coeffs(int comp) const;
};

TorusField operator+(TorusField a, const TorusField& b);
TorusField operator-(TorusField a, const TorusField& b);
TorusField operator*(cplx z, TorusField a);
TorusField operator*(double z, TorusField a);

// Spectral derivative (ik)^order; the Nyquist mode N/2 is dropped for
// order >= 1 so repeated differentiation composes exactly on the resolved band.
TorusField derivative(const TorusField& f, int order);

cplx inner(const TorusField& f, const TorusField& g);
double l2_norm(const TorusField& f);
double sobolev_norm(const TorusField& f, int m);

// Pointwise product with 3/2-rule zero padding; optional conjugation of either
// factor. Componentwise (both fields must share n, or one of them has n == 1,
// in which case it multiplies every component of the other).
TorusField product_dealiased(const TorusField& f, const TorusField& g, bool conj_f = false,
                             bool conj_g = false);

// Mollifier profile: 1 on [-1/2,1/2], smooth bump decay on [1/2,2], 0 beyond.
double cutoff_profile(double x);

TorusField mollify(const TorusField& f, double eps);

// Random-phase data with coefficient magnitude (1+|k|)^{-(m+1/2+delta)};
// phases depend only on (seed, component, k) so refinement in N extends the
// same field.
TorusField synthesize_sobolev_data(int n, int N, int m, double delta, std::uint64_t seed);

}  // namespace dispt

#endif
