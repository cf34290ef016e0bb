// Parameter schedule for the convex-integration step: the smallness exponent
// gamma, the Lebesgue exponent r, and the oscillation/concentration
// parameters (nu, sigma, kappa, mu) as powers of the frequency lambda.
//
// Paper mode derives everything as exact rationals in log-lambda space and
// certifies the three schedule inequalities by exact exponent comparison
// (kappa is astronomically large there and is kept symbolic). Desk mode takes
// user-supplied small values, reports each inequality as a signed log10
// margin, and checks grid feasibility.
#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wt {

using Rat = boost::rational<long long>;

struct InfeasibleParams : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ParamMode { paper, desk };

// One schedule inequality, written as LHS <= target; feasible iff margin <= 0.
struct ScheduleMargin {
    std::string name;
    double log10_margin = 0.0; // log10(LHS / target)
    Rat exponent_margin;       // paper mode: exact lambda-exponent of LHS/target
    bool exact = false;        // true when exponent_margin is authoritative
};

struct DeskInput {
    long long nu = 2;
    long long sigma = 8;
    double kappa = 4096.0;
    double mu = 16.0;
    double r = 1.01;
};

struct ParamSet {
    int d = 2;
    Rat p{3, 2};
    Rat q{10, 1};
    double eps = 0.5;
    double delta = 1.0;
    ParamMode mode = ParamMode::desk;

    double lambda = 0.0;

    // exact exponents (authoritative in paper mode; numeric mirrors below)
    Rat gamma;     // smallness exponent
    Rat r;         // Lebesgue exponent, d / (d - gamma) in paper mode
    Rat kappa_exp; // 2/gamma + d + 1 - 6 gamma

    // numeric values (authoritative in desk mode; may overflow to inf in
    // paper mode, where the symbolic schedule is the source of truth)
    double nu = 0.0;
    double sigma = 0.0;
    double kappa = 0.0;
    double mu = 0.0;
    double r_num = 1.0;

    double M = 1.0; // measured universal-constant slot

    std::vector<ScheduleMargin> margins;

    bool feasible() const;
    std::string schedule() const; // human-readable symbolic/numeric schedule
};

// Paper mode: gamma = min{1/p - 1/2, 1/q} / (10 d), r = d / (d - gamma),
// nu = ceil(lambda^gamma), sigma = ceil(lambda^{1/gamma}),
// kappa = lambda^{2/gamma + d + 1 - 6 gamma}, mu = lambda. The three schedule
// inequalities are certified in exact log-lambda arithmetic.
// Requires d in {2,3}, 1 < p < 2, q > 0.
ParamSet choose_params(int d, const Rat& p, const Rat& q, double eps, double lambda);

// Desk mode: user-supplied (nu, sigma, kappa, mu, r) with lambda = mu. The
// three inequalities are evaluated numerically against the target 1/nu
// (the schedule's lambda^{-gamma}) and reported as signed log10 margins.
// When n > 0 the grid must resolve the building blocks (sigma * mu <= n/8),
// otherwise InfeasibleParams is thrown. With require_feasible, a positive
// margin also throws, naming the violated inequality.
ParamSet choose_params(int d, double p, double q, double eps, const DeskInput& in, int n = 0,
                       bool require_feasible = false);

std::string to_string(const Rat& r);

} // namespace wt
