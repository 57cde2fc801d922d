#include "dispt/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace dispt {

namespace {

std::mutex fftw_mutex;

// In-place DFT; sign = FFTW_FORWARD or FFTW_BACKWARD. Planning is serialized
// (FFTW planner is not thread-safe); execution is not.
void fft_inplace(std::vector<cplx>& data, int sign) {
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex);
        plan = fftw_plan_dft_1d(static_cast<int>(data.size()), ptr, ptr, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex);
        fftw_destroy_plan(plan);
    }
}

void values_to_coeffs(std::vector<cplx>& data) {
    fft_inplace(data, FFTW_FORWARD);
    const double inv = 1.0 / static_cast<double>(data.size());
    for (auto& z : data) z *= inv;
}

void coeffs_to_values(std::vector<cplx>& data) { fft_inplace(data, FFTW_BACKWARD); }

bool power_of_two(int N) { return N > 0 && (N & (N - 1)) == 0; }

}  // namespace

TorusGrid::TorusGrid(int N_) : N(N_) {
    if (N < 8 || !power_of_two(N)) throw std::invalid_argument("TorusGrid: N must be a power of two >= 8");
}

TorusField TorusField::zero(int n, int N) {
    TorusField f;
    f.n_ = n;
    f.N_ = N;
    TorusGrid check(N);
    (void)check;
    f.vals_.assign(n, std::vector<cplx>(N, cplx{0, 0}));
    f.coefs_.assign(n, std::vector<cplx>(N, cplx{0, 0}));
    f.have_vals_.assign(n, true);
    f.have_coefs_.assign(n, true);
    return f;
}

TorusField TorusField::from_values(int n, int N, std::vector<std::vector<cplx>> values) {
    if (static_cast<int>(values.size()) != n) throw std::invalid_argument("from_values: component count");
    for (auto& v : values)
        if (static_cast<int>(v.size()) != N) throw std::invalid_argument("from_values: grid size");
    TorusField f = zero(n, N);
    f.vals_ = std::move(values);
    f.have_vals_.assign(n, true);
    f.have_coefs_.assign(n, false);
    return f;
}

TorusField TorusField::from_coeffs(int n, int N, std::vector<std::vector<cplx>> coeffs) {
    if (static_cast<int>(coeffs.size()) != n) throw std::invalid_argument("from_coeffs: component count");
    for (auto& c : coeffs)
        if (static_cast<int>(c.size()) != N) throw std::invalid_argument("from_coeffs: grid size");
    TorusField f = zero(n, N);
    f.coefs_ = std::move(coeffs);
    f.have_coefs_.assign(n, true);
    f.have_vals_.assign(n, false);
    return f;
}

void TorusField::ensure_values(int comp) const {
    if (have_vals_[comp]) return;
    vals_[comp] = coefs_[comp];
    coeffs_to_values(vals_[comp]);
    have_vals_[comp] = true;
}

void TorusField::ensure_coeffs(int comp) const {
    if (have_coefs_[comp]) return;
    coefs_[comp] = vals_[comp];
    values_to_coeffs(coefs_[comp]);
    have_coefs_[comp] = true;
}

const std::vector<cplx>& TorusField::values(int comp) const {
    ensure_values(comp);
    return vals_[comp];
}

const std::vector<cplx>& TorusField::coeffs(int comp) const {
    ensure_coeffs(comp);
    return coefs_[comp];
}

cplx TorusField::coeff(int comp, int k) const {
    int i = k >= 0 ? k : k + N_;
    return coeffs(comp)[i];
}

TorusField& TorusField::operator+=(const TorusField& o) {
    if (n_ != o.n_ || N_ != o.N_) throw std::invalid_argument("field +=: shape mismatch");
    for (int c = 0; c < n_; ++c) {
        ensure_coeffs(c);
        const auto& oc = o.coeffs(c);
        for (int i = 0; i < N_; ++i) coefs_[c][i] += oc[i];
        have_vals_[c] = false;
    }
    return *this;
}

TorusField& TorusField::operator-=(const TorusField& o) {
    if (n_ != o.n_ || N_ != o.N_) throw std::invalid_argument("field -=: shape mismatch");
    for (int c = 0; c < n_; ++c) {
        ensure_coeffs(c);
        const auto& oc = o.coeffs(c);
        for (int i = 0; i < N_; ++i) coefs_[c][i] -= oc[i];
        have_vals_[c] = false;
    }
    return *this;
}

TorusField& TorusField::operator*=(cplx z) {
    for (int c = 0; c < n_; ++c) {
        ensure_coeffs(c);
        for (int i = 0; i < N_; ++i) coefs_[c][i] *= z;
        have_vals_[c] = false;
    }
    return *this;
}

TorusField TorusField::component(int comp) const {
    std::vector<std::vector<cplx>> one{coeffs(comp)};
    return from_coeffs(1, N_, std::move(one));
}

TorusField TorusField::stack(const std::vector<TorusField>& comps) {
    if (comps.empty()) throw std::invalid_argument("stack: empty");
    std::vector<std::vector<cplx>> all;
    int N = comps[0].N();
    for (const auto& f : comps)
        for (int c = 0; c < f.n(); ++c) all.push_back(f.coeffs(c));
    const int total = static_cast<int>(all.size());
    return from_coeffs(total, N, std::move(all));
}

double TorusField::max_abs_coeff() const {
    double m = 0.0;
    for (int c = 0; c < n_; ++c)
        for (const auto& z : coeffs(c)) m = std::max(m, std::abs(z));
    return m;
}

bool TorusField::finite() const {
    for (int c = 0; c < n_; ++c)
        for (const auto& z : coeffs(c))
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

TorusField operator+(TorusField a, const TorusField& b) { return a += b; }
TorusField operator-(TorusField a, const TorusField& b) { return a -= b; }
TorusField operator*(cplx z, TorusField a) { return a *= z; }
TorusField operator*(double z, TorusField a) { return a *= cplx{z, 0.0}; }

TorusField derivative(const TorusField& f, int order) {
    if (order < 0 || order > 8) throw std::invalid_argument("derivative: order must be in 0..8");
    if (order == 0) return f;
    const int N = f.N();
    const cplx I{0.0, 1.0};
    std::vector<std::vector<cplx>> out(f.n(), std::vector<cplx>(N));
    for (int c = 0; c < f.n(); ++c) {
        const auto& in = f.coeffs(c);
        for (int i = 0; i < N; ++i) {
            int k = i <= N / 2 ? i : i - N;
            if (k == N / 2) {
                out[c][i] = cplx{0, 0};
                continue;
            }
            out[c][i] = in[i] * std::pow(I * static_cast<double>(k), order);
        }
    }
    return TorusField::from_coeffs(f.n(), N, std::move(out));
}

cplx inner(const TorusField& f, const TorusField& g) {
    if (f.n() != g.n() || f.N() != g.N()) throw std::invalid_argument("inner: shape mismatch");
    const double two_pi = 2.0 * 3.14159265358979323846;
    cplx acc{0, 0};
    for (int c = 0; c < f.n(); ++c) {
        const auto& a = f.coeffs(c);
        const auto& b = g.coeffs(c);
        for (int i = 0; i < f.N(); ++i) acc += a[i] * std::conj(b[i]);
    }
    return two_pi * acc;
}

double l2_norm(const TorusField& f) { return std::sqrt(std::abs(inner(f, f).real())); }

double sobolev_norm(const TorusField& f, int m) {
    if (m < 0 || m > 8) throw std::invalid_argument("sobolev_norm: m must be in 0..8");
    const double two_pi = 2.0 * 3.14159265358979323846;
    const int N = f.N();
    double acc = 0.0;
    for (int c = 0; c < f.n(); ++c) {
        const auto& a = f.coeffs(c);
        for (int i = 0; i < N; ++i) {
            int k = i <= N / 2 ? i : i - N;
            double w = 1.0;
            if (k != N / 2) {
                // sum_{l=0}^m k^{2l}; Nyquist contributes only the l=0 term
                // (its derivative is dropped).
                double k2 = static_cast<double>(k) * k, t = 1.0;
                for (int l = 1; l <= m; ++l) {
                    t *= k2;
                    w += t;
                }
            }
            acc += w * std::norm(a[i]);
        }
    }
    return std::sqrt(two_pi * acc);
}

TorusField product_dealiased(const TorusField& f, const TorusField& g, bool conj_f, bool conj_g) {
    if (f.N() != g.N()) throw std::invalid_argument("product_dealiased: grid mismatch");
    if (f.n() != g.n() && f.n() != 1 && g.n() != 1)
        throw std::invalid_argument("product_dealiased: component mismatch");
    const int N = f.N();
    const int M = 3 * N / 2;
    const int nout = std::max(f.n(), g.n());

    auto padded_values = [&](const std::vector<cplx>& c, bool cj) {
        std::vector<cplx> big(M, cplx{0, 0});
        for (int i = 0; i < N; ++i) {
            int k = i <= N / 2 ? i : i - N;
            big[k >= 0 ? k : k + M] = c[i];
        }
        coeffs_to_values(big);
        if (cj)
            for (auto& z : big) z = std::conj(z);
        return big;
    };

    std::vector<std::vector<cplx>> out(nout, std::vector<cplx>(N));
    for (int c = 0; c < nout; ++c) {
        std::vector<cplx> a = padded_values(f.coeffs(f.n() == 1 ? 0 : c), conj_f);
        std::vector<cplx> b = padded_values(g.coeffs(g.n() == 1 ? 0 : c), conj_g);
        for (int i = 0; i < M; ++i) a[i] *= b[i];
        values_to_coeffs(a);
        for (int i = 0; i < N; ++i) {
            int k = i <= N / 2 ? i : i - N;
            out[c][i] = a[k >= 0 ? k : k + M];
        }
    }
    return TorusField::from_coeffs(nout, N, std::move(out));
}

double cutoff_profile(double x) {
    double ax = std::fabs(x);
    if (ax <= 0.5) return 1.0;
    if (ax >= 2.0) return 0.0;
    double t = (ax - 0.5) / 1.5;  // in (0,1)
    return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

TorusField mollify(const TorusField& f, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("mollify: eps must be in (0,1)");
    const int N = f.N();
    std::vector<std::vector<cplx>> out(f.n(), std::vector<cplx>(N));
    for (int c = 0; c < f.n(); ++c) {
        const auto& in = f.coeffs(c);
        for (int i = 0; i < N; ++i) {
            int k = i <= N / 2 ? i : i - N;
            out[c][i] = in[i] * cutoff_profile(eps * k);
        }
    }
    return TorusField::from_coeffs(f.n(), N, std::move(out));
}

namespace {

// splitmix64: deterministic hash of (seed, component, wavenumber).
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

TorusField synthesize_sobolev_data(int n, int N, int m, double delta, std::uint64_t seed) {
    if (!(delta > 0.0 && delta <= 0.5))
        throw std::invalid_argument("synthesize_sobolev_data: delta in (0, 1/2]");
    const double two_pi = 2.0 * 3.14159265358979323846;
    const double expo = m + 0.5 + delta;
    std::vector<std::vector<cplx>> out(n, std::vector<cplx>(N, cplx{0, 0}));
    for (int c = 0; c < n; ++c) {
        for (int i = 0; i < N; ++i) {
            int k = i <= N / 2 ? i : i - N;
            if (k == N / 2) continue;  // keep the Nyquist slot empty
            std::uint64_t h = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(c + 1) * 0x51ed270b7fb90c3dULL ^
                                                           static_cast<std::uint64_t>(k + (1 << 20))));
            double phase = two_pi * (static_cast<double>(h >> 11) * 0x1.0p-53);
            double mag = std::pow(1.0 + std::abs(k), -expo);
            out[c][i] = mag * cplx{std::cos(phase), std::sin(phase)};
        }
    }
    return TorusField::from_coeffs(n, N, std::move(out));
}

}  // namespace dispt
