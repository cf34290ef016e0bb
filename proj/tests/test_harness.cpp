#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "wildtorus/harness.hpp"
#include "wildtorus/norms.hpp"
#include "wildtorus/spectral.hpp"

#include <cmath>

using namespace wt;
using namespace wt::testing;

namespace {

std::vector<double> uniform_times(int nodes) {
    std::vector<double> t(static_cast<std::size_t>(nodes));
    for (int i = 0; i < nodes; ++i) t[static_cast<std::size_t>(i)] = double(i) / (nodes - 1);
    return t;
}

IterateConfig small_config() {
    IterateConfig cfg;
    cfg.n_steps = 1;
    cfg.tau0 = 1.0 / 16.0;
    cfg.eps = 0.5;
    DeskInput in;
    in.nu = 2;
    in.sigma = 1;
    in.kappa = 16.0;
    in.mu = 4.0;
    in.r = 1.5;
    cfg.stages = {in};
    cfg.glue.coarse_nodes = 65;
    cfg.glue.fine_dt_factor = 8.0;
    cfg.perturb.coarse_nodes = 17;
    cfg.perturb.burst_samples = 8;
    cfg.perturb.edge_dt_factor = 8.0;
    return cfg;
}

} // namespace

TEST_CASE("iterate: zero steps returns the input iterate") {
    GridSpec g(2, 32);
    NSRState st = manufactured_state(g, uniform_times(33));
    IterateConfig cfg = small_config();
    cfg.n_steps = 0;
    IterationReport rep;
    NSRState out = iterate(st, cfg, &rep);
    CHECK(rep.rows.empty());
    CHECK(rep.r0_l1lr > 0.0);
    REQUIRE(out.u.size() == st.u.size());
    Field d = out.u.frames[5];
    d -= st.u.frames[5];
    CHECK(d.max_abs() == 0.0);
    CHECK(rep.csv() == "# wild-torus v1\n"
                       "n,delta,r_l1lr,w_l2l2,w_lplinf,w_l1w1q,residual,intervals,tau,box_proxy\n");
}

TEST_CASE("iterate: one step fills the ledger and certifies the output") {
    GridSpec g(2, 32);
    NSRState st = manufactured_state(g, uniform_times(65));
    IterateConfig cfg = small_config();
    IterationReport rep;
    NSRState out = iterate(st, cfg, &rep);

    REQUIRE(rep.rows.size() == 1);
    const IterationRow& r = rep.rows[0];
    CHECK(r.n == 1);
    CHECK(r.delta == 0.5 * std::min(rep.r0_l1lr, cfg.eps));
    CHECK(r.r_l1lr > 0.0);
    CHECK(r.w_l2l2 > 0.0);
    CHECK(r.w_lplinf > 0.0);
    CHECK(r.w_l1w1q > 0.0);
    CHECK(r.tau == doctest::Approx(1.0 / 16.0));
    // the three 5tau/2-windows at nodes {1/4, 1/2, 3/4} overlap -> one interval
    CHECK(r.intervals == 1);
    CHECK(r.box_proxy == 0.0);
    MESSAGE("residual = " << r.residual << ", ||R1|| = " << r.r_l1lr);
    CHECK(r.residual <= 1e-2);

    StateCheck c = check_state(out);
    CHECK(c.div_u <= 1e-8);
    CHECK(c.zero_set == 0.0);

    // determinism: an identical rerun reproduces the CSV bit for bit
    IterationReport rep2;
    iterate(st, cfg, &rep2);
    CHECK(rep.csv() == rep2.csv());
    CHECK(singular_report(rep).csv() == singular_report(rep2).csv());
}

TEST_CASE("iterate: two steps obey nesting, halving, and the interval budget") {
    GridSpec g(2, 32);
    NSRState st = manufactured_state(g, uniform_times(65));
    IterateConfig cfg = small_config();
    cfg.n_steps = 2;
    cfg.tau_schedule = {1.0 / 16.0, 1.0 / 1024.0};
    IterationReport rep;
    NSRState out = iterate(st, cfg, &rep); // nesting/halving asserted inside

    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[1].tau == doctest::Approx(1.0 / 1024.0));
    CHECK(rep.rows[1].tau < rep.rows[0].tau / 2.0);
    CHECK(rep.rows[1].intervals > 1);

    SingularReport sing = singular_report(rep);
    for (const SingularRow& s : sing.rows) {
        CHECK(s.within_budget);
        CHECK(static_cast<double>(s.count) <= std::pow(s.tau, -cfg.eps) + 1e-9);
    }
    MESSAGE("box proxy: " << sing.rows[0].proxy << " -> " << sing.proxy_final);
    CHECK(sing.proxy_final <= cfg.eps + 0.1);

    StateCheck c = check_state(out);
    CHECK(c.div_u <= 1e-8);
    CHECK(c.zero_set == 0.0);
}

TEST_CASE("singular_report arithmetic") {
    IterationReport rep;
    rep.eps = 0.5;
    IterationRow r;
    r.n = 1;
    r.intervals = 1;
    r.tau = 1.0 / 32.0;
    r.box_proxy = 0.0;
    rep.rows.push_back(r);
    SingularReport s = singular_report(rep);
    CHECK(s.rows[0].within_budget); // 1 <= 32^0.5
    CHECK(s.rows[0].proxy == 0.0);
    CHECK(s.rows[0].budget == doctest::Approx(std::sqrt(32.0)));

    // count at the budget boundary: proxy stays near eps for small tau
    rep.rows[0].tau = 1.0 / 4096.0;
    rep.rows[0].intervals = 64; // floor(4096^0.5)
    rep.rows[0].box_proxy = std::log(64.0) / std::log(4096.0 / 5.0);
    s = singular_report(rep);
    CHECK(s.rows[0].within_budget);
    CHECK(s.proxy_final <= rep.eps + 0.13);

    IterationReport empty;
    CHECK_THROWS_AS(singular_report(empty), std::invalid_argument);
}

TEST_CASE("energy profile: exact heat flow balances to 1e-8") {
    GridSpec g(2, 32);
    std::vector<double> times = uniform_times(4097);
    NSRState st;
    st.grid = g;
    st.u.times = st.R.times = st.p.times = st.u_dt.times = times;
    const double rate = 4.0 * M_PI * M_PI; // single-mode decay of u
    for (double t : times) {
        Field u = Field::vector(g);
        auto ux = u.comp(0);
        double amp = std::exp(-rate * t);
        for (int j = 0; j < g.n; ++j) {
            double y = double(j) / g.n;
            double v = amp * std::sin(2.0 * M_PI * y);
            for (int i = 0; i < g.n; ++i) ux[static_cast<std::size_t>(i) * g.n + j] = v;
        }
        Field udt = u;
        udt *= -rate;
        st.u.frames.push_back(std::move(u));
        st.u_dt.frames.push_back(std::move(udt));
        st.R.frames.push_back(Field::tensor(g));
        st.p.frames.push_back(Field::scalar(g));
    }
    st.tau = 0.0; // no concentration metadata; R is identically zero

    EnergyProfile ep = energy_profile(st);
    REQUIRE(ep.times.size() == times.size());
    CHECK(ep.kinetic[0] == doctest::Approx(0.25).epsilon(1e-10));
    REQUIRE(ep.windows.size() == 1);
    MESSAGE("heat-flow balance defect: " << ep.windows[0].defect);
    CHECK(ep.windows[0].defect <= 1e-8);
    CHECK(ep.jumps.empty());
}

TEST_CASE("energy profile of a glued state: balance in windows, jumps reported") {
    GridSpec g(2, 32);
    NSRState st = manufactured_state(g, uniform_times(129));
    GlueOptions gopt;
    gopt.coarse_nodes = 257;
    NSRState glued = glue(st, 1.0 / 16.0, 0.5, gopt);
    REQUIRE(glued.tau > 0.0);

    EnergyProfile ep = energy_profile(glued);
    REQUIRE(!ep.windows.empty());
    for (const EnergyWindow& w : ep.windows) {
        MESSAGE("window [" << w.t0 << ", " << w.t1 << "] defect " << w.defect);
        CHECK(w.defect <= 1e-4);
    }
    CHECK(!ep.jumps.empty());
    for (double j : ep.jumps) CHECK(j >= 0.0);
    CHECK(ep.csv().substr(0, 15) == "# wild-torus v1");
}
