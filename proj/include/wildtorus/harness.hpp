// End-to-end iteration driver: alternate the stress-concentration gluing
// step and the convex-integration perturbation step, with per-iteration
// bookkeeping (stress norms, perturbation norms, certified residual,
// interval census, box-counting dimension proxy) and deterministic CSV
// reports.
#pragma once

#include "wildtorus/gluing.hpp"
#include "wildtorus/params.hpp"
#include "wildtorus/perturbation.hpp"
#include "wildtorus/state.hpp"

#include <string>
#include <vector>

namespace wt {

struct IterationRow {
    int n = 0;              // iteration index (1-based)
    double delta = 0.0;     // target 2^{-n} min{||R_{n-1}||_{L1Lr}, eps}
    double r_l1lr = 0.0;    // ||R_n||_{L^1_t L^r}
    double w_l2l2 = 0.0;    // ||w_n||_{L^2_t L^2}
    double w_lplinf = 0.0;  // ||w_n||_{L^p_t L^inf}
    double w_l1w1q = 0.0;   // ||w_n||_{L^1_t W^{1,q}}
    double residual = 0.0;  // certified relative momentum residual of iterate n
    int intervals = 0;      // |E_n|: stress windows after gluing
    double tau = 0.0;       // tau_n
    double box_proxy = 0.0; // log(count) / log(1 / (5 tau))
};

struct IterationReport {
    double eps = 0.0;     // singular-set budget used for subdivision
    double r0_l1lr = 0.0; // ||R_0|| of the input iterate
    std::vector<IterationRow> rows;

    // Deterministic CSV (schema header "# wild-torus v1"); shortest
    // round-trip formatting, so identical runs are bitwise identical.
    std::string csv() const;
};

struct IterateConfig {
    int n_steps = 1;
    double tau0 = 1.0 / 16.0; // requested tau for the first gluing
    double eps = 0.5;         // interval-count budget (n_sub = round(tau^-eps))
    // Optional explicit per-step tau requests (overrides tau0 and the
    // automatic rule). The automatic rule picks the largest tau_n with
    // 1/n_sub + 5 tau_n / 2 <= tau_{n-1}: the node spacing plus the new
    // half-window must fit inside the old protection collar, which makes
    // I_n subset of I_{n-1} structural rather than accidental.
    std::vector<double> tau_schedule;
    // Desk-mode parameters per stage; when fewer than n_steps entries, the
    // last entry repeats. Validated against the state's grid each stage.
    std::vector<DeskInput> stages = {DeskInput{}};
    double p = 1.5, q = 10.0; // Lebesgue exponents for the reported norms
    GlueOptions glue;
    PerturbOptions perturb;
};

struct IterateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Runs n_steps rounds of glue -> perturb starting from `initial` (an NSR
// iterate; use manufactured_state or wrap_velocity to build one). Asserts
// tau_n < tau_{n-1}/2, I_n subset of I_{n-1}, and the Definition-2.2 budget
// count_n <= tau_n^{-eps}; throws IterateError (carrying the partial report
// if `report` is non-null) on violation or stage failure.
NSRState iterate(const NSRState& initial, const IterateConfig& cfg,
                 IterationReport* report = nullptr);

struct SingularRow {
    int n = 0;
    int count = 0;
    double tau = 0.0;
    double proxy = 0.0;   // log(count) / log(1/(5 tau)); 0 for empty I
    double budget = 0.0;  // tau^{-eps}
    bool within_budget = true;
};

struct SingularReport {
    std::vector<SingularRow> rows;
    double proxy_final = 0.0;
    std::string csv() const;
};

// Box-counting dimension proxy per iteration, from the report bookkeeping
// alone. Requires at least one row.
SingularReport singular_report(const IterationReport& rep);

struct EnergyWindow {
    double t0 = 0.0, t1 = 0.0;
    double defect = 0.0; // |e(t1) + int ||grad u||^2 - e(t0)| / max_t e(t)
};

struct EnergyProfile {
    std::vector<double> times;
    std::vector<double> kinetic;    // e(t) = 1/2 ||u(t)||_2^2
    std::vector<EnergyWindow> windows; // regularity windows: components of
                                       // {dist(t, I^c) <= tau} where R = 0
    std::vector<double> jumps;      // energy swing across each interval of I
    std::string csv() const;
};

// Kinetic-energy history on the state's time grid. In viscous mode the
// energy-balance defect is evaluated on every regularity window (trapezoid
// quadrature of the dissipation); in Euler mode the dissipation term is
// dropped. Jumps across the stress-carrying intervals are reported without
// assertion.
EnergyProfile energy_profile(const NSRState& s);

} // namespace wt
