#ifndef DISPT_DIAGNOSTICS_HPP
#define DISPT_DIAGNOSTICS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dispt/field.hpp"
#include "dispt/operators.hpp"
#include "dispt/solver.hpp"

namespace dispt {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LineFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

// E_m(Q)^2 = |V|_{L2}^2 + |Q|_{H^{m-1}}^2 with V the gauge field.
double energy_Em(const SystemSpec& spec, const TorusField& Q, int m);

// (1/2)|dx W|^2 + A |W|^2 - Re<W, Ma^{-1} Lambda(Qref) W>, gauge weights
// (-1,1,-1) at m=1 (the Lambda_3 block carries no m-dependent correction).
double modified_energy_E1(const SystemSpec& spec, const TorusField& W, const TorusField& Qref,
                          double A);

// Auto rule for the zeroth-order weight: 2 * sup |Re<W, Ma^{-1} Lambda W>| / |W|^2 + 1.
double auto_A(const SystemSpec& spec, const std::vector<TorusField>& Ws, const TorusField& Qref);

struct IdentityResidual {
    std::string name;
    double residual;  // relative to the scale of the compared terms
};

// Relative residuals of every skew-symmetry, symmetry, and commutator
// identity the structure operators satisfy on admissible systems.
std::vector<IdentityResidual> identity_audit(const SystemSpec& spec, const TorusField& Q,
                                             const TorusField& v, const TorusField& w);

struct RateReport {
    std::string name;
    std::vector<double> ladder;  // strictly decreasing epsilon or nu values
    std::vector<double> gaps;
    double slope = 0.0;
    double r2 = 0.0;
    double expected = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    std::string verdict;  // "pass", "fail", or "inconclusive" (fit R^2 < 0.98)
};

void finalize_rate(RateReport& rep);

// Mollifier convergence: slope of |Q0 - mollify(Q0,eps)|_{H^{m-ell}} vs eps.
std::vector<RateReport> bs_rate_experiment(const TorusField& Q0, int m,
                                           const std::vector<int>& ells,
                                           const std::vector<double>& eps_ladder, double delta);

struct CauchyResult {
    RateReport h1;
    RateReport hm;
    bool blew_up = false;
};

// Gap between regularized runs Q^mu and Q^nu, sup over snapshots, with
// mu = min(ladder)/8.
CauchyResult cauchy_rate_experiment(const SystemSpec& spec, const TorusField& Q0, int m,
                                    const std::vector<double>& nu_ladder, double T,
                                    SolverConfig config);

struct EnergyReport {
    double eps = 0.0;
    std::vector<double> times;
    std::vector<double> Em_values;
    std::vector<double> Hm_values;
    std::vector<double> equivalence_ratios;  // Em^2 / (Hm^2 (1 + H1^2))
    double fitted_A = 0.0;                   // max over t>0 of log(Em(t)^2/Em(0)^2)/t
    bool blew_up = false;
};

std::vector<EnergyReport> growth_experiment(const SystemSpec& spec, const TorusField& Q0, int m,
                                            const std::vector<double>& eps_list, double T,
                                            SolverConfig config);

struct LossProbeReport {
    RateReport residual;   // growth of |residual|_{L2} in K, expected <= m
    RateReport full_term;  // growth of |dx^m F|_{L2} in K, expected ~ m+2
};

// High-mode probe of the dx^m F decomposition: Q = smooth + A e^{iKx}.
LossProbeReport loss_probe(const SystemSpec& spec, int m, const std::vector<int>& K_list, int N,
                           std::uint64_t seed = 1);

// Reads DISPTORUS_THREADS (default: hardware concurrency) and runs the jobs
// with at most that many workers.
void parallel_run(std::vector<std::function<void()>> jobs);

// Band-limited random field (modes |k| <= K) for operator audits; products of
// three such fields stay alias-free when 3K <= N/2.
TorusField random_band_field(int n, int N, int K, std::uint64_t seed);

}  // namespace dispt

#endif
