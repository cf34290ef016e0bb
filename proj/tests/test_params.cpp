#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wildtorus/params.hpp"

#include <cmath>

using namespace wt;

TEST_CASE("paper mode: exact gamma, r, kappa exponent at the reference point") {
    ParamSet ps = choose_params(2, Rat(3, 2), Rat(10), 0.5, 16.0);
    CHECK(ps.gamma == Rat(1, 200));
    CHECK(ps.r == Rat(400, 399));
    // 2/gamma + d + 1 - 6 gamma = 400 + 3 - 3/100
    CHECK(ps.kappa_exp == Rat(40297, 100));
    CHECK(ps.feasible());
    REQUIRE(ps.margins.size() == 3);
    // first inequality reduces to (d-1) - (d-1)/r - gamma <= 0: margin -1/400
    CHECK(ps.margins[0].exponent_margin == Rat(-1, 400));
    CHECK(ps.margins[0].exact);
    for (const auto& m : ps.margins) CHECK(m.exponent_margin < Rat(0));
    // numeric mirrors: nu small, sigma/kappa overflow to inf
    CHECK(ps.nu == 2.0);      // ceil(16^(1/200)) = 2
    CHECK(ps.sigma > 1e200);  // 16^200
    CHECK(std::isinf(ps.kappa));
    CHECK(ps.mu == 16.0);
    // schedule text names every parameter symbolically
    std::string s = ps.schedule();
    CHECK(s.find("gamma = 1/200") != std::string::npos);
    CHECK(s.find("r = 400/399") != std::string::npos);
    CHECK(s.find("kappa = lambda^(40297/100)") != std::string::npos);
    CHECK(s.find("VIOLATED") == std::string::npos);
}

TEST_CASE("paper mode: d=3 point and preconditions") {
    ParamSet ps = choose_params(3, Rat(5, 4), Rat(4), 0.5, 8.0);
    // min{1/p - 1/2, 1/q} = min{3/10, 1/4} = 1/4; gamma = 1/120; r = 3/(3-1/120)
    CHECK(ps.gamma == Rat(1, 120));
    CHECK(ps.r == Rat(360, 359));
    CHECK(ps.feasible());
    CHECK_THROWS_AS(choose_params(4, Rat(3, 2), Rat(10), 0.5, 16.0), std::invalid_argument);
    CHECK_THROWS_AS(choose_params(2, Rat(2), Rat(10), 0.5, 16.0), std::invalid_argument);
    CHECK_THROWS_AS(choose_params(2, Rat(1), Rat(10), 0.5, 16.0), std::invalid_argument);
}

TEST_CASE("desk mode: signed log margins at the reference point") {
    DeskInput in; // nu=2 sigma=8 kappa=4096 mu=16 r=1.01
    ParamSet ps = choose_params(2, 1.5, 10.0, 0.5, in, 1024);
    REQUIRE(ps.margins.size() == 3);
    // inequality 1: nu * kappa^{1/2} / (sigma mu) * mu^{1/2 - 1/r} * nu
    double lhs1 = 2.0 * 64.0 / 128.0 * std::pow(16.0, 0.5 - 1.0 / 1.01) * 2.0;
    CHECK(ps.margins[0].log10_margin == doctest::Approx(std::log10(lhs1)).epsilon(1e-12));
    CHECK(ps.margins[0].log10_margin < 0.0);
    // inequality 2 is violated at this desk point: kappa^{-1/6} mu^{1/2} nu = 2
    CHECK(ps.margins[1].log10_margin == doctest::Approx(std::log10(2.0)).epsilon(1e-12));
    CHECK(!ps.feasible());
    CHECK(ps.schedule().find("VIOLATED") != std::string::npos);
    // require_feasible turns the positive margin into an error
    CHECK_THROWS_AS(choose_params(2, 1.5, 10.0, 0.5, in, 1024, true), InfeasibleParams);
}

TEST_CASE("desk mode: grid feasibility (Nyquist) check") {
    DeskInput in;
    CHECK_THROWS_AS(choose_params(2, 1.5, 10.0, 0.5, in, 64), InfeasibleParams); // 8*16 > 8
    CHECK_NOTHROW(choose_params(2, 1.5, 10.0, 0.5, in, 1024));
    CHECK_NOTHROW(choose_params(2, 1.5, 10.0, 0.5, in, 0)); // no grid supplied
    DeskInput bad = in;
    bad.r = 1.0;
    CHECK_THROWS_AS(choose_params(2, 1.5, 10.0, 0.5, bad), std::invalid_argument);
}
