#include "dispt/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace dispt {

namespace {

// Per-mode exponential propagator e^{symbol * dt} applied in coefficient space.
TorusField propagate_linear(const TorusField& f, const SystemSpec& spec, double eps, double dt) {
    const int N = f.N();
    std::vector<std::vector<cplx>> out(f.n(), std::vector<cplx>(N));
    for (int c = 0; c < f.n(); ++c) {
        const auto& in = f.coeffs(c);
        for (int i = 0; i < N; ++i) {
            int k = i <= N / 2 ? i : i - N;
            out[c][i] = in[i] * std::exp(linear_symbol(spec, eps, k, c + 1) * dt);
        }
    }
    return TorusField::from_coeffs(f.n(), N, std::move(out));
}

}  // namespace

cplx linear_symbol(const SystemSpec& spec, double eps, int k, int j) {
    double k2 = static_cast<double>(k) * k;
    double k4 = k2 * k2;
    return cplx{-std::pow(eps, 5) * k4, spec.a_of(j) * k4 - spec.lambda_of(j) * k2};
}

TorusField step(const TorusField& state, const SystemSpec& spec, double eps, double dt) {
    // Lawson RK4: exact linear propagation E(dt), classical RK4 stages on the
    // integrating-factor transformed variable.
    TorusField k1 = nonlinearity_F(spec, state);
    TorusField Eh_state = propagate_linear(state, spec, eps, dt / 2.0);
    TorusField E_state = propagate_linear(state, spec, eps, dt);

    TorusField k2 = nonlinearity_F(
        spec, Eh_state + (dt / 2.0) * propagate_linear(k1, spec, eps, dt / 2.0));
    TorusField k3 = nonlinearity_F(spec, Eh_state + (dt / 2.0) * k2);
    TorusField k4 = nonlinearity_F(
        spec, E_state + dt * propagate_linear(k3, spec, eps, dt / 2.0));

    TorusField out = E_state;
    out += (dt / 6.0) * propagate_linear(k1, spec, eps, dt);
    out += (dt / 3.0) * propagate_linear(k2 + k3, spec, eps, dt / 2.0);
    out += (dt / 6.0) * k4;
    return out;
}

double default_dt_cap(const TorusField& Q0, int N) {
    double kmax = N / 2.0;
    double h2 = sobolev_norm(Q0, 2);
    return 0.5 / (kmax * kmax * (1.0 + h2 * h2));
}

Trajectory solve_ivp(const SystemSpec& spec, const TorusField& Q0, const SolverConfig& config) {
    if (config.eps < 0.0 || config.eps >= 1.0)
        throw std::invalid_argument("solve_ivp: eps must be in [0,1)");
    if (config.T == 0.0) throw std::invalid_argument("solve_ivp: T must be nonzero");
    if (config.T < 0.0 && config.eps > 0.0)
        throw std::invalid_argument("solve_ivp: backward integration requires eps = 0");
    if (!Q0.finite()) throw std::invalid_argument("solve_ivp: non-finite initial data");

    TorusField state = config.eps > 0.0 ? mollify(Q0, config.eps) : Q0;
    const double direction = config.T > 0.0 ? 1.0 : -1.0;
    const double horizon = std::fabs(config.T);
    double dt = std::min(std::fabs(config.dt), default_dt_cap(state, state.N()));

    const double h2_initial = sobolev_norm(state, 2);
    const double blowup_bound = 1e6 * std::max(h2_initial, 1e-300);

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(state);

    double t = 0.0;
    long step_index = 0;
    while (t < horizon - 1e-14 * horizon) {
        double h = std::min(dt, horizon - t);
        state = step(state, spec, config.eps, direction * h);
        t += h;
        ++step_index;
        bool bad = !state.finite() || sobolev_norm(state, 2) > blowup_bound;
        if (bad) {
            traj.blew_up = true;
            traj.blowup_time = direction * t;
            traj.times.push_back(direction * t);
            traj.states.push_back(state);
            return traj;
        }
        bool last = t >= horizon - 1e-14 * horizon;
        if (step_index % config.snapshot_stride == 0 || last) {
            traj.times.push_back(direction * t);
            traj.states.push_back(state);
        }
    }
    return traj;
}

}  // namespace dispt
