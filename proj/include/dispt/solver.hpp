#ifndef DISPT_SOLVER_HPP
#define DISPT_SOLVER_HPP

#include <optional>
#include <string>
#include <vector>

#include "dispt/field.hpp"
#include "dispt/operators.hpp"

namespace dispt {

struct SolverConfig {
    int N = 64;
    double dt = 1e-3;   // base step; capped by the nonlinear-CFL default rule
    double T = 0.1;     // horizon; negative runs backward (eps must be 0)
    double eps = 0.0;   // parabolic regularization strength, in [0,1)
    int snapshot_stride = 1;
    std::string integrator = "lawson_rk4";
    std::optional<double> error_control;  // reserved; no adaptive stepping
};

struct Trajectory {
    std::vector<double> times;
    std::vector<TorusField> states;
    bool blew_up = false;
    double blowup_time = 0.0;
};

// Linear growth rate of mode k, component j: -eps^5 k^4 + i a_j k^4 - i lambda_j k^2.
cplx linear_symbol(const SystemSpec& spec, double eps, int k, int j);

// One Lawson (integrating-factor) RK4 step; the linear flow is applied
// exactly per mode, the nonlinearity at classical fourth order.
TorusField step(const TorusField& state, const SystemSpec& spec, double eps, double dt);

// Nonlinear-CFL step cap: 0.5 / (Kmax^2 (1 + |Q0|_{H^2}^2)).
double default_dt_cap(const TorusField& Q0, int N);

// Integrates to config.T, mollifying Q0 with config.eps first when eps > 0.
// Blow-up (H^2 exceeding 1e6 x initial, or non-finite state) yields a partial
// trajectory with the flag set.
Trajectory solve_ivp(const SystemSpec& spec, const TorusField& Q0, const SolverConfig& config);

}  // namespace dispt

#endif
