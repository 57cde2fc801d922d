#include "dispt/operators.hpp"

#include <cmath>
#include <functional>

namespace dispt {

namespace {

const cplx I{0.0, 1.0};

using TensorFn = std::function<cplx(int, int, int, int)>;  // (j,p,q,r)

// Evaluates result_j = scale * sum_r prod( sum_{p,q} T(j,p,q,r) B[p][q], Z_r ),
// optionally conjugating the Z factor. B entries are single-component fields.
TorusField contract(int n, int N, const TensorFn& T,
                    const std::vector<std::vector<TorusField>>& B,
                    const TorusField& Z, bool conj_z, cplx scale) {
    std::vector<TorusField> comps;
    comps.reserve(n);
    for (int j = 1; j <= n; ++j) {
        TorusField acc = TorusField::zero(1, N);
        for (int r = 1; r <= n; ++r) {
            TorusField A = TorusField::zero(1, N);
            bool any = false;
            for (int p = 1; p <= n; ++p)
                for (int q = 1; q <= n; ++q) {
                    cplx t = T(j, p, q, r);
                    if (t == cplx{0.0, 0.0}) continue;
                    A += t * B[p - 1][q - 1];
                    any = true;
                }
            if (!any) continue;
            acc += product_dealiased(A, Z.component(r - 1), false, conj_z);
        }
        comps.push_back(scale * acc);
    }
    return TorusField::stack(comps);
}

std::vector<std::vector<TorusField>> bilinear_table(
    const TorusField& X, bool cx, const TorusField& Y, bool cy) {
    const int n = X.n();
    std::vector<std::vector<TorusField>> B(n, std::vector<TorusField>(n));
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            B[p][q] = product_dealiased(X.component(p), Y.component(q), cx, cy);
    return B;
}

void check_shapes(const STensor& s, const TorusField& Q, const TorusField& v) {
    if (Q.n() != s.n() || v.n() != s.n() || Q.N() != v.N())
        throw std::invalid_argument("operator: field/tensor shape mismatch");
}

TorusField ma_inverse(const SystemSpec& spec, const TorusField& f) {
    std::vector<TorusField> comps;
    for (int j = 1; j <= spec.n; ++j)
        comps.push_back(cplx{1.0 / spec.a_of(j), 0.0} * f.component(j - 1));
    return TorusField::stack(comps);
}

}  // namespace

SystemSpec SystemSpec::make(std::vector<double> a, std::vector<double> lambda,
                            const CoeffTensor& omega, Tail tail) {
    SystemSpec spec;
    spec.n = omega.n();
    if (a.size() != 1 && static_cast<int>(a.size()) != spec.n)
        throw std::invalid_argument("SystemSpec: a must be scalar or length n");
    for (double aj : a)
        if (aj == 0.0) throw std::invalid_argument("SystemSpec: dispersion entries must be nonzero");
    if (static_cast<int>(lambda.size()) != spec.n)
        throw std::invalid_argument("SystemSpec: lambda must have length n");
    spec.a = std::move(a);
    spec.lambda = std::move(lambda);
    spec.omega = omega;
    spec.s = derive_S(omega);
    spec.tail = tail;
    return spec;
}

SystemSpec SystemSpec::without_tail() const {
    SystemSpec copy = *this;
    copy.tail = Tail{};
    return copy;
}

SystemSpec builtin_system(const std::string& name, int n, const std::vector<double>& params) {
    if (name == "single") {
        if (n != 1) throw std::invalid_argument("builtin single: n must be 1");
        if (params.size() != 7)
            throw std::invalid_argument("builtin single: params are mu1..mu6, nu");
        double mu1 = params[0], mu2 = params[1], mu3 = params[2], mu4 = params[3],
               mu5 = params[4], mu6 = params[5], nu = params[6];
        CoeffTensor w(1);
        w.omega(1, 1, 1, 1, 1) = I * mu6;
        w.omega(2, 1, 1, 1, 1) = I * mu5;
        w.omega(3, 1, 1, 1, 1) = I * mu4;
        w.omega(4, 1, 1, 1, 1) = I * mu3;
        Tail tail{I * mu1, I * mu2};
        return SystemSpec::make({nu}, {1.0}, w, tail);
    }
    if (name == "wzy") {
        if (params.size() != 2) throw std::invalid_argument("builtin wzy: params are gamma, alpha");
        double gamma = params[0], alpha = params[1];
        if (gamma == 0.0) throw std::invalid_argument("builtin wzy: gamma must be nonzero");
        CoeffTensor w(n);
        auto d = [](int x, int y) { return x == y ? 1.0 : 0.0; };
        for (int j = 1; j <= n; ++j)
            for (int p = 1; p <= n; ++p)
                for (int q = 1; q <= n; ++q)
                    for (int r = 1; r <= n; ++r) {
                        w.omega(1, j, p, q, r) = I * 2.0 * gamma * (d(p, q) * d(r, j) + d(p, j) * d(r, q));
                        w.omega(2, j, p, q, r) = I * 0.5 * gamma * (d(p, q) * d(r, j) + d(p, r) * d(q, j));
                        w.omega(3, j, p, q, r) = I * gamma * (d(p, q) * d(r, j) + d(p, j) * d(r, q));
                        w.omega(4, j, p, q, r) = I * 1.5 * gamma * (d(q, r) * d(p, j) + d(p, r) * d(q, j));
                    }
        Tail tail{I * alpha, I * 3.0 * gamma};
        return SystemSpec::make({gamma / 2.0}, std::vector<double>(n, alpha / 2.0), w, tail);
    }
    throw std::invalid_argument("builtin_system: unknown name " + name);
}

TorusField nonlinearity_F(const SystemSpec& spec, const TorusField& Q) {
    if (Q.n() != spec.n) throw std::invalid_argument("nonlinearity_F: component mismatch");
    const int n = spec.n, N = Q.N();
    const CoeffTensor& w = spec.omega;
    TorusField dQ = derivative(Q, 1);
    TorusField d2Q = derivative(Q, 2);

    auto T = [&](int k) {
        return TensorFn([&w, k](int j, int p, int q, int r) { return w.omega(k, j, p, q, r); });
    };

    TorusField F = contract(n, N, T(1), bilinear_table(d2Q, false, Q, true), Q, false, 1.0);
    F += contract(n, N, T(2), bilinear_table(d2Q, true, Q, false), Q, false, 1.0);
    F += contract(n, N, T(3), bilinear_table(dQ, false, dQ, true), Q, false, 1.0);
    F += contract(n, N, T(4), bilinear_table(dQ, false, dQ, false), Q, true, 1.0);

    if (!spec.tail.empty()) {
        TorusField dens = TorusField::zero(1, N);
        for (int j = 0; j < n; ++j)
            dens += product_dealiased(Q.component(j), Q.component(j), false, true);
        std::vector<TorusField> cubic, quintic;
        TorusField dens2 = product_dealiased(dens, dens);
        for (int j = 0; j < n; ++j) {
            cubic.push_back(product_dealiased(dens, Q.component(j)));
            quintic.push_back(product_dealiased(dens2, Q.component(j)));
        }
        F += spec.tail.c3 * TorusField::stack(cubic) + spec.tail.c5 * TorusField::stack(quintic);
    }
    return F;
}

TorusField apply_P(const STensor& s, int kind, int level, const TorusField& Q,
                   const TorusField& v) {
    check_shapes(s, Q, v);
    if (kind < 1 || kind > 5 || level < 1 || level > 5)
        throw std::invalid_argument("apply_P: kind and level must be in 1..5");
    const int n = Q.n(), N = Q.N();
    TensorFn S = [&s, level](int j, int p, int q, int r) { return s.s(level, j, p, q, r); };

    switch (kind) {
        case 1: {
            auto B = bilinear_table(v, false, Q, true);
            auto C = bilinear_table(Q, false, v, true);
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) B[p][q] += C[p][q];
            return contract(n, N, S, B, Q, false, -I);
        }
        case 2:
            return contract(n, N, S, bilinear_table(Q, false, Q, true), v, false, 2.0 * I);
        case 3: {
            auto B = bilinear_table(Q, false, Q, true);
            for (auto& row : B)
                for (auto& b : row) b = derivative(b, 1);
            return contract(n, N, S, B, v, false, I);
        }
        case 4: {
            TorusField dQ = derivative(Q, 1);
            auto B = bilinear_table(dQ, false, Q, true);
            auto C = bilinear_table(Q, false, dQ, true);
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) B[p][q] -= C[p][q];
            return contract(n, N, S, B, v, false, I);
        }
        default: {
            TorusField dQ = derivative(Q, 1);
            return contract(n, N, S, bilinear_table(dQ, false, v, true), Q, false, -2.0 * I);
        }
    }
}

TorusField apply_P_combo(const STensor& s, int m, PCombo which, const TorusField& Q,
                         const TorusField& v) {
    if (m < 1) throw std::invalid_argument("apply_P_combo: m >= 1");
    double c = static_cast<double>(m - 1);
    if (which == PCombo::P3m) {
        TorusField out = apply_P(s, 3, 3, Q, v);
        if (m > 1) {
            out -= c * apply_P(s, 3, 1, Q, v);
            out += (2.0 * c) * apply_P(s, 3, 2, Q, v);
        }
        return out;
    }
    TorusField out = apply_P(s, 5, 5, Q, v);
    if (m > 1) out += c * apply_P(s, 5, 1, Q, v);
    return out;
}

TorusField apply_Lambda(const STensor& s, int k, int m, const TorusField& Q, const TorusField& v) {
    check_shapes(s, Q, v);
    const int n = Q.n(), N = Q.N();
    if (k == 1) {
        TensorFn S1 = [&s](int j, int p, int q, int r) { return s.s(1, j, p, q, r); };
        auto B = bilinear_table(v, false, Q, true);
        auto C = bilinear_table(Q, false, v, true);
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) B[p][q] -= C[p][q];
        return contract(n, N, S1, B, Q, false, -0.5);
    }
    if (k == 2) {
        TensorFn S1 = [&s](int j, int p, int q, int r) { return s.s(1, j, p, q, r); };
        return contract(n, N, S1, bilinear_table(Q, false, Q, true), v, false, -0.25);
    }
    if (k == 3) {
        // m = 1 is allowed (the m-dependent correction vanishes); the modified
        // first-order energy uses exactly that case.
        if (m < 1) throw std::invalid_argument("apply_Lambda: Lambda_3 needs m >= 1");
        double c = static_cast<double>(m - 1);
        TensorFn S3m = [&s, c](int j, int p, int q, int r) {
            return s.s(3, j, p, q, r) - c * (s.s(1, j, p, q, r) - 2.0 * s.s(2, j, p, q, r));
        };
        return contract(n, N, S3m, bilinear_table(Q, false, Q, true), v, false, -0.25);
    }
    throw std::invalid_argument("apply_Lambda: k must be in 1..3");
}

TorusField apply_Lambda_combo(const STensor& s, GaugeWeights w, int m, const TorusField& Q,
                              const TorusField& v) {
    TorusField out = w.e1 * apply_Lambda(s, 1, m, Q, v);
    out += w.e2 * apply_Lambda(s, 2, m, Q, v);
    out += w.e3 * apply_Lambda(s, 3, m, Q, v);
    return out;
}

TorusField apply_Ma_inverse(const SystemSpec& spec, const TorusField& f) {
    return ma_inverse(spec, f);
}

TorusField gauge_V(const SystemSpec& spec, const TorusField& Q, int m) {
    if (m < 2) throw std::invalid_argument("gauge_V: m >= 2");
    if (!spec.scalar_a()) {
        ConditionReport rep = check_conditions(spec.omega);
        if (!rep.b_extra())
            throw GaugeRefusal(
                "gauge_V: non-scalar dispersion requires the diagonal-support conditions "
                "(B7)-(B9); the supplied tensor violates them");
    }
    TorusField lam = apply_Lambda_combo(spec.s, GaugeWeights{}, m, Q, derivative(Q, m - 2));
    return derivative(Q, m) + ma_inverse(spec, lam);
}

DxFParts dxF_decomposition(const SystemSpec& spec, const TorusField& Q) {
    if (!spec.tail.empty())
        throw std::invalid_argument("dxF_decomposition: polynomial tail unsupported");
    const int n = spec.n, N = Q.N();
    TorusField Y = derivative(Q, 1);
    DxFParts parts;
    parts.principal = apply_P(spec.s, 1, 1, Q, derivative(Y, 2));
    parts.divergence = derivative(apply_P(spec.s, 2, 2, Q, derivative(Y, 1)), 1);
    TorusField dY = derivative(Y, 1);
    parts.first_order = apply_P(spec.s, 3, 3, Q, dY);
    parts.first_order += apply_P(spec.s, 4, 4, Q, dY);
    parts.first_order += apply_P(spec.s, 5, 5, Q, dY);
    // Terms of the Leibniz expansion that place no extra derivative on Y.
    const CoeffTensor& w = spec.omega;
    TensorFn T3 = [&w](int j, int p, int q, int r) { return w.omega(3, j, p, q, r); };
    TensorFn T4 = [&w](int j, int p, int q, int r) { return w.omega(4, j, p, q, r); };
    parts.cubic_remainder = contract(n, N, T3, bilinear_table(Y, false, Y, true), Y, false, 1.0);
    parts.cubic_remainder +=
        contract(n, N, T4, bilinear_table(Y, false, Y, false), Y, true, 1.0);
    return parts;
}

DxmParts dxm_decomposition(const SystemSpec& spec, const TorusField& Q, int m) {
    if (m < 1 || m > 6) throw std::invalid_argument("dxm_decomposition: m must be in 1..6");
    if (!spec.tail.empty())
        throw std::invalid_argument("dxm_decomposition: polynomial tail unsupported");
    DxmParts parts;
    parts.m = m;
    TorusField U = derivative(Q, m);
    TorusField dU = derivative(U, 1);
    parts.principal = apply_P(spec.s, 1, 1, Q, derivative(U, 2));
    parts.divergence = derivative(apply_P(spec.s, 2, 2, Q, dU), 1);
    parts.first_order = apply_P_combo(spec.s, m, PCombo::P3m, Q, dU);
    parts.first_order += apply_P(spec.s, 4, 4, Q, dU);
    parts.first_order += apply_P_combo(spec.s, m, PCombo::P5m, Q, dU);
    parts.residual = derivative(nonlinearity_F(spec, Q), m);
    parts.residual -= parts.principal;
    parts.residual -= parts.divergence;
    parts.residual -= parts.first_order;
    return parts;
}

}  // namespace dispt
