#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dispt/diagnostics.hpp"
#include "dispt/operators.hpp"

using namespace dispt;

namespace {

const cplx I{0.0, 1.0};

TorusField mode(int N, int k, cplx amp = {1.0, 0.0}) {
    std::vector<std::vector<cplx>> c(1, std::vector<cplx>(N, cplx{0, 0}));
    c[0][k >= 0 ? k : k + N] = amp;
    return TorusField::from_coeffs(1, N, std::move(c));
}

SystemSpec all_i_spec() {
    CoeffTensor w(1);
    for (int k = 1; k <= 4; ++k) w.omega(k, 1, 1, 1, 1) = I;
    return SystemSpec::make({1.0}, {0.0}, w);
}

STensor ones_stensor(int n) {
    STensor s(n);
    for (int l = 1; l <= 5; ++l)
        for (int j = 1; j <= n; ++j)
            for (int p = 1; p <= n; ++p)
                for (int q = 1; q <= n; ++q)
                    for (int r = 1; r <= n; ++r) s.s(l, j, p, q, r) = cplx{1.0, 0.0};
    return s;
}

// Direct-sum of n single-component admissible systems: every omega family is
// supported on p=q=r=j with purely imaginary entries, so (B7)-(B9) hold.
CoeffTensor diagonal_tensor(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.2, 1.5);
    CoeffTensor w(n);
    for (int k = 1; k <= 4; ++k)
        for (int j = 1; j <= n; ++j) w.omega(k, j, j, j, j) = I * u(rng);
    return w;
}

double field_gap(const TorusField& a, const TorusField& b) { return (a - b).max_abs_coeff(); }

}  // namespace

TEST_CASE("nonlinearity_F golden case and trivial cases") {
    int N = 32;
    SystemSpec spec = all_i_spec();
    TorusField Q = mode(N, 1);
    TorusField F = nonlinearity_F(spec, Q);
    CHECK(field_gap(F, -2.0 * I * mode(N, 1)) <= 1e-13);

    CHECK(nonlinearity_F(spec, TorusField::zero(1, N)).max_abs_coeff() <= 1e-15);

    SystemSpec trivial = SystemSpec::make({1.0}, {0.0}, CoeffTensor(1));
    CHECK(nonlinearity_F(trivial, Q).max_abs_coeff() <= 1e-15);
}

TEST_CASE("nonlinearity tail") {
    int N = 32;
    SystemSpec spec = builtin_system("single", 1, {2.0, 3.0, 0, 0, 0, 0, 1.0});
    TorusField Q = mode(N, 1);
    // |Q|^2 = |Q|^4 = 1, so F = (i mu1 + i mu2) e^{ix}
    TorusField F = nonlinearity_F(spec, Q);
    CHECK(field_gap(F, (I * 5.0) * mode(N, 1)) <= 1e-13);
    CHECK(spec.without_tail().tail.empty());
}

TEST_CASE("apply_P on constant background and unit S") {
    int N = 32;
    STensor s = ones_stensor(1);
    TorusField one = mode(N, 0);
    TorusField v = mode(N, 1);
    // P1 v = -i (v + conj v)
    TorusField p1 = apply_P(s, 1, 1, one, v);
    CHECK(field_gap(p1, -I * (mode(N, 1) + mode(N, -1))) <= 1e-13);
    // P2 v = 2i v
    CHECK(field_gap(apply_P(s, 2, 3, one, v), 2.0 * I * v) <= 1e-13);
    for (int kind : {3, 4, 5})
        CHECK(apply_P(s, kind, 2, one, v).max_abs_coeff() <= 1e-14);
    for (int kind : {1, 2, 3, 4, 5})
        CHECK(apply_P(s, kind, kind, mode(N, 1), TorusField::zero(1, N)).max_abs_coeff() <= 1e-14);
}

TEST_CASE("apply_P_combo linear combinations") {
    int N = 32;
    STensor s = ones_stensor(1);
    TorusField Q = mode(N, 1);
    TorusField v = mode(N, 0);
    CHECK(field_gap(apply_P_combo(s, 1, PCombo::P3m, Q, v), apply_P(s, 3, 3, Q, v)) <= 1e-14);
    CHECK(field_gap(apply_P_combo(s, 1, PCombo::P5m, Q, v), apply_P(s, 5, 5, Q, v)) <= 1e-14);

    TorusField combo3 = apply_P(s, 3, 3, Q, v) - 2.0 * apply_P(s, 3, 1, Q, v) +
                        4.0 * apply_P(s, 3, 2, Q, v);
    CHECK(field_gap(apply_P_combo(s, 3, PCombo::P3m, Q, v), combo3) <= 1e-13);
    TorusField combo5 = apply_P(s, 5, 5, Q, v) + 2.0 * apply_P(s, 5, 1, Q, v);
    CHECK(field_gap(apply_P_combo(s, 3, PCombo::P5m, Q, v), combo5) <= 1e-13);

    TorusField one = mode(N, 0);
    CHECK(apply_P_combo(s, 4, PCombo::P3m, one, v).max_abs_coeff() <= 1e-14);
    CHECK(apply_P_combo(s, 4, PCombo::P5m, one, v).max_abs_coeff() <= 1e-14);
}

TEST_CASE("gauge maps golden case") {
    int N = 32;
    SystemSpec spec = all_i_spec();
    TorusField Q = mode(N, 1);
    TorusField v = -1.0 * mode(N, 1);
    for (int k : {1, 2, 3})
        CHECK(apply_Lambda(spec.s, k, 4, TorusField::zero(1, N), v).max_abs_coeff() <= 1e-14);

    CHECK(apply_Lambda(spec.s, 1, 4, Q, v).max_abs_coeff() <= 1e-13);
    CHECK(field_gap(apply_Lambda(spec.s, 2, 4, Q, v), -0.25 * mode(N, 1)) <= 1e-13);
    CHECK(field_gap(apply_Lambda(spec.s, 3, 4, Q, v), 1.375 * mode(N, 1)) <= 1e-13);
    CHECK(field_gap(apply_Lambda_combo(spec.s, GaugeWeights{}, 4, Q, v), -1.625 * mode(N, 1)) <=
          1e-13);
}

TEST_CASE("gauge field V") {
    int N = 32;
    SystemSpec spec = all_i_spec();
    CHECK(gauge_V(spec, mode(N, 0, cplx{2.0, 1.0}), 4).max_abs_coeff() <= 1e-14);
    CHECK(field_gap(gauge_V(spec, mode(N, 1), 4), -0.625 * mode(N, 1)) <= 1e-13);

    // support arithmetic: modes |k| <= K produce V supported in |k| <= 3K
    TorusField Q = random_band_field(1, 128, 5, 3);
    TorusField V = gauge_V(spec, Q, 4);
    for (int k = -63; k <= 64; ++k)
        if (std::abs(k) > 15) CHECK(std::abs(V.coeff(0, k)) <= 1e-13);
}

TEST_CASE("gauge_V corollary branch: refusal and acceptance for non-scalar dispersion") {
    std::mt19937_64 rng(2);
    int N = 32;
    TorusField Q = random_band_field(2, N, 4, 5);

    SystemSpec wzy = builtin_system("wzy", 2, {1.0, 0.0});
    SystemSpec nonscalar = SystemSpec::make({1.0, 2.0}, {0.0, 0.0}, wzy.omega);
    CHECK_FALSE(check_conditions(nonscalar.omega).b_extra());
    CHECK_THROWS_AS(gauge_V(nonscalar, Q, 4), GaugeRefusal);

    SystemSpec diag = SystemSpec::make({1.0, 2.0}, {0.0, 0.0}, diagonal_tensor(2, rng));
    ConditionReport rep = check_conditions(diag.omega);
    CHECK(rep.admissible());
    CHECK(rep.b_extra());
    CHECK(gauge_V(diag, Q, 4).finite());

    // scalar mode ignores (B7)-(B9)
    SystemSpec scalar = SystemSpec::make({1.0}, {0.0, 0.0}, wzy.omega);
    CHECK(gauge_V(scalar, Q, 4).finite());
}

TEST_CASE("dx F decomposition") {
    int N = 64;
    SystemSpec spec = all_i_spec();

    DxFParts zero = dxF_decomposition(spec, TorusField::zero(1, N));
    CHECK(zero.sum().max_abs_coeff() <= 1e-15);
    DxFParts cst = dxF_decomposition(spec, mode(N, 0));
    CHECK(cst.sum().max_abs_coeff() <= 1e-14);

    TorusField Q = mode(N, 1);
    DxFParts parts = dxF_decomposition(spec, Q);
    CHECK(field_gap(parts.sum(), 2.0 * mode(N, 1)) <= 1e-12);
    TorusField spectral = derivative(nonlinearity_F(spec, Q), 1);
    CHECK(field_gap(parts.sum(), spectral) <= 1e-12);

    // exact identity on random band-limited fields, n=2
    SystemSpec wzy = builtin_system("wzy", 2, {1.0, 0.5}).without_tail();
    TorusField R = random_band_field(2, N, 8, 9);
    DxFParts parts2 = dxF_decomposition(wzy, R);
    TorusField spectral2 = derivative(nonlinearity_F(wzy, R), 1);
    double scale = l2_norm(spectral2);
    CHECK(l2_norm(parts2.sum() - spectral2) <= 1e-12 * scale);

    SystemSpec tailspec = builtin_system("wzy", 2, {1.0, 0.5});
    CHECK_THROWS(dxF_decomposition(tailspec, R));
}

TEST_CASE("dx^m decomposition agrees with dxF at m=1 and closes for m up to 4") {
    int N = 64;
    SystemSpec wzy = builtin_system("wzy", 1, {1.0, 0.0}).without_tail();
    TorusField Q = random_band_field(1, N, 5, 21);

    DxFParts f1 = dxF_decomposition(wzy, Q);
    DxmParts m1 = dxm_decomposition(wzy, Q, 1);
    CHECK(field_gap(m1.principal, f1.principal) <= 1e-12);
    CHECK(field_gap(m1.divergence, f1.divergence) <= 1e-12);
    CHECK(field_gap(m1.first_order, f1.first_order) <= 1e-12);
    CHECK(field_gap(m1.residual, f1.cubic_remainder) <= 1e-12);

    for (int m = 1; m <= 4; ++m) {
        DxmParts parts = dxm_decomposition(wzy, Q, m);
        TorusField spectral = derivative(nonlinearity_F(wzy, Q), m);
        double scale = std::max(l2_norm(spectral), 1e-30);
        CHECK(l2_norm(parts.sum() - spectral) <= 1e-11 * scale);
    }
    CHECK(dxm_decomposition(wzy, TorusField::zero(1, N), 3).sum().max_abs_coeff() <= 1e-14);
}

TEST_CASE("skew and symmetry structure of P2, P4, P5 on admissible systems") {
    std::mt19937_64 rng(33);
    int N = 64;
    for (int n : {1, 2}) {
        SystemSpec spec = SystemSpec::make({1.0}, std::vector<double>(n, 0.0),
                                           random_admissible(n, rng));
        TorusField Q = random_band_field(n, N, 8, 101 + n);
        TorusField v = random_band_field(n, N, 8, 202 + n);
        TorusField w = random_band_field(n, N, 8, 303 + n);
        for (int l = 1; l <= 5; ++l) {
            double lhs = inner(apply_P(spec.s, 2, l, Q, v), w).real();
            double rhs = inner(apply_P(spec.s, 2, l, Q, w), v).real();
            CHECK(std::fabs(lhs + rhs) <= 1e-11 * (std::fabs(lhs) + std::fabs(rhs) + 1.0));
            double l4 = inner(apply_P(spec.s, 4, l, Q, v), w).real();
            double r4 = inner(apply_P(spec.s, 4, l, Q, w), v).real();
            CHECK(std::fabs(l4 - r4) <= 1e-11 * (std::fabs(l4) + std::fabs(r4) + 1.0));
        }
    }
}
