#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dispt/io.hpp"
#include "dispt/operators.hpp"
#include "dispt/tensor.hpp"

using namespace dispt;

namespace {

CoeffTensor n1_tensor(cplx w1, cplx w2, cplx w3, cplx w4) {
    CoeffTensor w(1);
    w.omega(1, 1, 1, 1, 1) = w1;
    w.omega(2, 1, 1, 1, 1) = w2;
    w.omega(3, 1, 1, 1, 1) = w3;
    w.omega(4, 1, 1, 1, 1) = w4;
    return w;
}

const cplx I{0.0, 1.0};

std::array<std::vector<cplx>, 4> raw_from_tensor(const CoeffTensor& w) {
    // Extract the C-convention maps scaled by -i; for admissible tensors these
    // lie in Gamma, so projecting them again must reproduce the tensor.
    const int n = w.n();
    std::array<std::vector<cplx>, 4> raw;
    for (auto& m : raw) m.assign(static_cast<std::size_t>(n) * n * n * n, cplx{0, 0});
    for (int p = 1; p <= n; ++p)
        for (int q = 1; q <= n; ++q)
            for (int r = 1; r <= n; ++r)
                for (int j = 1; j <= n; ++j) {
                    raw[0][map_index(n, p, q, r, j)] = -I * w.omega(1, j, p, q, r);
                    raw[1][map_index(n, p, q, r, j)] = -I * w.omega(2, j, q, p, r);
                    raw[2][map_index(n, p, q, r, j)] = -I * w.omega(3, j, p, q, r);
                    raw[3][map_index(n, p, q, r, j)] = -I * w.omega(4, j, p, r, q);
                }
    return raw;
}

double tensor_gap(const CoeffTensor& a, const CoeffTensor& b) {
    double gap = 0.0;
    for (int k = 1; k <= 4; ++k)
        for (int j = 1; j <= a.n(); ++j)
            for (int p = 1; p <= a.n(); ++p)
                for (int q = 1; q <= a.n(); ++q)
                    for (int r = 1; r <= a.n(); ++r)
                        gap = std::max(gap,
                                       std::abs(a.omega(k, j, p, q, r) - b.omega(k, j, p, q, r)));
    return gap;
}

}  // namespace

TEST_CASE("zero tensor satisfies every condition") {
    for (int n : {1, 2, 3}) {
        ConditionReport rep = check_conditions(CoeffTensor(n));
        CHECK(rep.a_set());
        CHECK(rep.b_set());
        CHECK(rep.b_extra());
        CHECK(rep.c_set());
        CHECK(rep.g_set());
        CHECK(rep.violations.empty());
    }
}

TEST_CASE("n=1 all-i tensor is admissible; a real entry breaks the B set") {
    ConditionReport good = check_conditions(n1_tensor(I, I, I, I));
    CHECK(good.a_set());
    CHECK(good.b_set());
    CHECK(good.c_set());
    CHECK(good.g_set());

    ConditionReport bad = check_conditions(n1_tensor(cplx{1, 0}, I, I, I));
    CHECK(bad.a_set());
    CHECK_FALSE(bad.b_set());
    CHECK_FALSE(bad.c_set());
    CHECK_FALSE(bad.g_set());
}

TEST_CASE("n=1 specialization: admissible iff every entry purely imaginary") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int t = 0; t < 20; ++t) {
        CoeffTensor w = n1_tensor(I * u(rng), I * u(rng), I * u(rng), I * u(rng));
        CHECK(check_conditions(w).admissible());
        CoeffTensor bad = w;
        bad.omega(1 + t % 4, 1, 1, 1, 1) += cplx{0.3 + u(rng) * u(rng), 0.0};
        CHECK_FALSE(check_conditions(bad).b_set());
    }
}

TEST_CASE("derive_S golden values for the n=1 all-i tensor") {
    STensor s = derive_S(n1_tensor(I, I, I, I));
    CHECK(std::abs(s.s(1, 1, 1, 1, 1) - cplx{-1.0, 0.0}) <= 1e-14);
    CHECK(std::abs(s.s(2, 1, 1, 1, 1) - cplx{0.0, 0.0}) <= 1e-14);
    CHECK(std::abs(s.s(3, 1, 1, 1, 1) - cplx{2.5, 0.0}) <= 1e-14);
    CHECK(std::abs(s.s(4, 1, 1, 1, 1) - cplx{0.5, 0.0}) <= 1e-14);
    CHECK(std::abs(s.s(5, 1, 1, 1, 1) - cplx{-1.5, 0.0}) <= 1e-14);
}

TEST_CASE("derive_S of the zero tensor is zero") {
    STensor s = derive_S(CoeffTensor(2));
    CHECK(s.max_abs() == 0.0);
}

TEST_CASE("builtin wzy entries at n=1, gamma=2") {
    SystemSpec spec = builtin_system("wzy", 1, {2.0, 0.0});
    CHECK(std::abs(spec.omega.omega(1, 1, 1, 1, 1) - 8.0 * I) <= 1e-14);
    CHECK(std::abs(spec.omega.omega(2, 1, 1, 1, 1) - 2.0 * I) <= 1e-14);
    CHECK(std::abs(spec.omega.omega(3, 1, 1, 1, 1) - 4.0 * I) <= 1e-14);
    CHECK(std::abs(spec.omega.omega(4, 1, 1, 1, 1) - 6.0 * I) <= 1e-14);
    CHECK(spec.a.size() == 1);
    CHECK(spec.a[0] == 1.0);
}

TEST_CASE("builtin wzy n=2 gamma=1 alpha=0: all conditions pass, a=1/2, lambda=0") {
    SystemSpec spec = builtin_system("wzy", 2, {1.0, 0.0});
    CHECK(std::abs(spec.omega.omega(1, 1, 1, 2, 2) - 2.0 * I) <= 1e-14);
    CHECK(spec.a[0] == 0.5);
    CHECK(spec.lambda == std::vector<double>{0.0, 0.0});
    ConditionReport rep = check_conditions(spec.omega);
    CHECK(rep.a_set());
    CHECK(rep.b_set());
    CHECK(rep.c_set());
    CHECK(rep.g_set());
}

TEST_CASE("builtin single with zero mu has empty nonlinearity") {
    SystemSpec spec = builtin_system("single", 1, {0, 0, 0, 0, 0, 0, 1.0});
    CHECK(spec.omega.max_abs() == 0.0);
    CHECK(spec.tail.empty());
    CHECK(spec.a[0] == 1.0);
}

TEST_CASE("gamma_membership basics") {
    int n = 2;
    std::vector<cplx> f(16, cplx{1.0, 0.0});
    GammaResult res = gamma_membership(f, n, 1e-12);
    CHECK(res.in_gamma1);
    CHECK(res.in_gamma2);

    // Constructed map: symmetric in (p,r) everywhere, but f(1,1,1,2) = i while
    // conj(f(2,1,1,1)) = -i, so the second symmetry fails at that tuple.
    std::vector<cplx> g(16, cplx{0.0, 0.0});
    g[map_index(n, 1, 1, 1, 2)] = I;
    g[map_index(n, 2, 1, 1, 1)] = I;
    g[map_index(n, 1, 1, 2, 1)] = I;  // (p,r) mirror of the previous entry
    GammaResult res2 = gamma_membership(g, n, 1e-12);
    CHECK(res2.in_gamma1);
    CHECK_FALSE(res2.in_gamma2);
    bool found = false;
    for (const auto& v : res2.violations)
        if (v.condition == "Gamma2" && v.index == std::array<int, 4>{1, 1, 1, 2}) found = true;
    CHECK(found);
}

TEST_CASE("project_admissible: zero input, pass rate, idempotence, real linearity") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n : {1, 2, 3}) {
        std::array<std::vector<cplx>, 4> zero;
        for (auto& m : zero) m.assign(static_cast<std::size_t>(n) * n * n * n, cplx{0, 0});
        CHECK(project_admissible(zero, n).max_abs() == 0.0);

        for (int t = 0; t < 60; ++t) {
            std::array<std::vector<cplx>, 4> raw;
            for (auto& m : raw) {
                m.resize(static_cast<std::size_t>(n) * n * n * n);
                for (auto& z : m) z = cplx{u(rng), u(rng)};
            }
            CoeffTensor w = project_admissible(raw, n);
            ConditionReport rep = check_conditions(w, 1e-12 * std::max(1.0, w.max_abs()));
            CHECK(rep.a_set());
            CHECK(rep.b_set());
            CHECK(rep.c_set());
            CHECK(rep.g_set());
            // the -i-scaled C-maps of the output lie in Gamma
            auto maps = raw_from_tensor(w);
            for (const auto& f : maps) {
                GammaResult gr = gamma_membership(f, n, 1e-12);
                CHECK(gr.in_gamma1);
                CHECK(gr.in_gamma2);
            }
            // idempotence: re-projecting the extracted maps reproduces the tensor
            CoeffTensor w2 = project_admissible(maps, n);
            CHECK(tensor_gap(w, w2) <= 1e-13);
        }
    }

    // real linearity: project(a x + b y) = a project(x) + b project(y)
    int n = 2;
    std::array<std::vector<cplx>, 4> rx, ry, rz;
    for (int k = 0; k < 4; ++k) {
        rx[k].resize(16);
        ry[k].resize(16);
        rz[k].resize(16);
        for (int i = 0; i < 16; ++i) {
            rx[k][i] = cplx{u(rng), u(rng)};
            ry[k][i] = cplx{u(rng), u(rng)};
            rz[k][i] = 0.7 * rx[k][i] - 1.3 * ry[k][i];
        }
    }
    CoeffTensor px = project_admissible(rx, n), py = project_admissible(ry, n),
                pz = project_admissible(rz, n);
    CoeffTensor combo(n);
    for (int k = 1; k <= 4; ++k)
        for (int j = 1; j <= n; ++j)
            for (int p = 1; p <= n; ++p)
                for (int q = 1; q <= n; ++q)
                    for (int r = 1; r <= n; ++r)
                        combo.omega(k, j, p, q, r) =
                            0.7 * px.omega(k, j, p, q, r) - 1.3 * py.omega(k, j, p, q, r);
    CHECK(tensor_gap(pz, combo) <= 1e-13);
}

TEST_CASE("derived S symmetries on admissible tensors") {
    std::mt19937_64 rng(7);
    for (int n : {1, 2, 3}) {
        CoeffTensor w = random_admissible(n, rng);
        STensor s = derive_S(w);
        for (int l = 1; l <= 5; ++l)
            for (int j = 1; j <= n; ++j)
                for (int p = 1; p <= n; ++p)
                    for (int q = 1; q <= n; ++q)
                        for (int r = 1; r <= n; ++r) {
                            cplx v = s.s(l, j, p, q, r);
                            CHECK(std::abs(v - s.s(l, j, r, q, p)) <= 1e-12);
                            CHECK(std::abs(v - std::conj(s.s(l, p, j, r, q))) <= 1e-12);
                            CHECK(std::abs(v - std::conj(s.s(l, r, q, p, j))) <= 1e-12);
                            CHECK(std::abs(v - s.s(l, q, p, j, r)) <= 1e-12);
                        }
    }
}

TEST_CASE("family_n2: trivial cases, conditions, parameter round trip") {
    N2FamilyParams zero;
    CHECK(family_n2(zero).max_abs() == 0.0);

    N2FamilyParams kappa_only;
    kappa_only.kappa[0] = 1.0;
    CoeffTensor w = family_n2(kappa_only);
    CHECK(std::abs(w.omega(1, 1, 1, 1, 1) - I) <= 1e-14);
    double rest = 0.0;
    for (int j = 1; j <= 2; ++j)
        for (int p = 1; p <= 2; ++p)
            for (int q = 1; q <= 2; ++q)
                for (int r = 1; r <= 2; ++r)
                    if (!(j == 1 && p == 1 && q == 1 && r == 1))
                        rest = std::max(rest, std::abs(w.omega(1, j, p, q, r)));
    CHECK(rest == 0.0);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 25; ++t) {
        N2FamilyParams par;
        for (int k = 0; k < 4; ++k) {
            par.kappa[k] = u(rng);
            par.tau[k] = u(rng);
            par.sigma[k] = u(rng);
            par.alpha[k] = cplx{u(rng), u(rng)};
            par.beta[k] = cplx{u(rng), u(rng)};
            par.gamma[k] = cplx{u(rng), u(rng)};
        }
        CoeffTensor wt = family_n2(par);
        ConditionReport rep = check_conditions(wt);
        CHECK(rep.a_set());
        CHECK(rep.b_set());
        CHECK(rep.c_set());
        CHECK(rep.g_set());
        N2FamilyParams fit = fit_family_n2(wt);
        for (int k = 0; k < 4; ++k) {
            CHECK(std::fabs(par.kappa[k] - fit.kappa[k]) <= 1e-12);
            CHECK(std::fabs(par.tau[k] - fit.tau[k]) <= 1e-12);
            CHECK(std::fabs(par.sigma[k] - fit.sigma[k]) <= 1e-12);
            CHECK(std::abs(par.alpha[k] - fit.alpha[k]) <= 1e-12);
            CHECK(std::abs(par.beta[k] - fit.beta[k]) <= 1e-12);
            CHECK(std::abs(par.gamma[k] - fit.gamma[k]) <= 1e-12);
        }
    }

    // conversely: an arbitrary admissible n=2 tensor is reproduced from its
    // fitted parameters
    for (int t = 0; t < 25; ++t) {
        CoeffTensor wa = random_admissible(2, rng);
        CoeffTensor back = family_n2(fit_family_n2(wa));
        CHECK(tensor_gap(wa, back) <= 1e-12);
    }
}

TEST_CASE("equivalence audit agrees across B/C/G verdicts") {
    CHECK(equivalence_audit(1, 100, 3).agreed);
    CHECK(equivalence_audit(2, 200, 4).agreed);
    CHECK(equivalence_audit(3, 100, 5).agreed);
}

TEST_CASE("single-condition mutants break their condition but keep the A set") {
    std::mt19937_64 rng(19);
    CoeffTensor base = random_admissible(2, rng);
    for (std::string cond : {"B1", "B2", "B3", "B4", "B5", "B6"}) {
        CoeffTensor mut = mutate_condition(base, cond, rng);
        ConditionReport rep = check_conditions(mut);
        CHECK(rep.a_set());
        CHECK_FALSE(rep.get(cond));
        CHECK_FALSE(rep.b_set());
        CHECK_FALSE(rep.c_set());
        CHECK_FALSE(rep.g_set());
    }
    // hand-built violation of only (B3) with (A1) held, n=1: a real omega^2
    CoeffTensor b3 = CoeffTensor(1);
    b3.omega(2, 1, 1, 1, 1) = cplx{1.0, 0.0};
    ConditionReport rep = check_conditions(b3);
    CHECK(rep.a_set());
    CHECK(rep.get("B1"));
    CHECK(rep.get("B2"));
    CHECK_FALSE(rep.get("B3"));
    CHECK_FALSE(rep.b_set());
    CHECK_FALSE(rep.c_set());
    CHECK_FALSE(rep.g_set());
}

TEST_CASE("violation reporting caps at 32 tuples per condition") {
    std::mt19937_64 rng(23);
    CoeffTensor w = random_inadmissible(3, rng);
    ConditionReport rep = check_conditions(w);
    std::map<std::string, int> counts;
    for (const auto& v : rep.violations) counts[v.condition]++;
    for (const auto& [name, count] : counts) {
        (void)name;
        CHECK(count <= 32);
    }
    CHECK_FALSE(rep.b_set());
}

TEST_CASE("tensor JSON round trip preserves values") {
    std::mt19937_64 rng(31);
    CoeffTensor w = random_admissible(3, rng);
    json doc = tensor_to_json(w);
    CoeffTensor back = tensor_from_json(json::parse(dump_json(doc)));
    CHECK(back.n() == 3);
    CHECK(tensor_gap(w, back) <= 1e-16);
}
