#include "wildtorus/state.hpp"

#include "wildtorus/antidiv.hpp"
#include "wildtorus/io.hpp"
#include "wildtorus/norms.hpp"
#include "wildtorus/spectral.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace wt {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double tensor_asymmetry(const Field& S) {
    const int d = S.grid().d;
    double m = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            auto a = S.comp(i, j);
            auto b = S.comp(j, i);
            for (std::size_t p = 0; p < S.points(); ++p)
                m = std::max(m, std::abs(a[p] - b[p]));
        }
    return m;
}

double max_mean(const Field& f) {
    double m = 0.0;
    for (double v : f.means()) m = std::max(m, std::abs(v));
    return m;
}

} // namespace

StateCheck check_state(const NSRState& s) {
    StateCheck c;
    double uinf = 0.0, rinf = 0.0;
    for (const Field& f : s.u.frames) uinf = std::max(uinf, f.max_abs());
    for (const Field& f : s.R.frames) rinf = std::max(rinf, f.max_abs());
    double uscale = (uinf > 0.0) ? uinf : 1.0;
    double rscale = (rinf > 0.0) ? rinf : 1.0;
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        c.div_u = std::max(c.div_u, divergence(s.u.frames[i]).max_abs() / uscale);
        c.mean_u = std::max(c.mean_u, max_mean(s.u.frames[i]) / uscale);
        const Field& R = s.R.frames[i];
        c.mean_R = std::max(c.mean_R, max_mean(R) / rscale);
        c.trace_R = std::max(c.trace_R, trace_max(R) / rscale);
        c.sym_R = std::max(c.sym_R, tensor_asymmetry(R) / rscale);
        if (s.tau > 0.0 && dist_to_complement(s.I, s.u.times[i]) <= s.tau)
            c.zero_set = std::max(c.zero_set, R.max_abs());
    }
    return c;
}

NSRState manufactured_state(const GridSpec& g, const std::vector<double>& times, bool viscous) {
    auto zeta = [](double t) { return 1.0 + 0.5 * std::sin(kTwoPi * t); };
    auto zeta_dt = [](double t) { return 0.5 * kTwoPi * std::cos(kTwoPi * t); };

    Field V = Field::vector(g);
    {
        const int n = g.n;
        auto vx = V.comp(0);
        auto vy = V.comp(1);
        std::size_t per_slab = (g.d == 3) ? static_cast<std::size_t>(n) : 1;
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (std::size_t s = 0; s < per_slab; ++s, ++idx) {
                    double x = static_cast<double>(i) / n, y = static_cast<double>(j) / n;
                    vx[idx] = std::sin(kTwoPi * x) * std::cos(kTwoPi * y);
                    vy[idx] = -std::cos(kTwoPi * x) * std::sin(kTwoPi * y);
                }
    }

    NSRState st;
    st.grid = g;
    st.viscous = viscous;
    st.u.times = st.R.times = st.p.times = st.u_dt.times = times;

    Field lapV = laplacian(V);
    for (double t : times) {
        double z = zeta(t), zdt = zeta_dt(t);
        Field u = V;
        u *= z;
        Field u_dt = V;
        u_dt *= zdt;
        // momentum F = d_t u - Delta u + div(u (x) u)
        Field F = V;
        F *= zdt;
        if (viscous) F.axpy(-z, lapV);
        Field uu = outer_product(u, u);
        F += divergence(uu);
        Field PF = leray_project(F);
        // p makes up the gradient part: F - PF = -grad p (+ mean, which is 0)
        Field p = inv_laplacian(divergence(F));
        p *= -1.0;
        st.u.frames.push_back(std::move(u));
        st.u_dt.frames.push_back(std::move(u_dt));
        st.R.frames.push_back(antidiv_tensor(PF));
        st.p.frames.push_back(std::move(p));
    }
    return st;
}

NSRState wrap_velocity(TimeSeriesField u, bool viscous) {
    u.validate();
    NSRState st;
    st.grid = u.grid();
    st.viscous = viscous;
    st.R.times = st.p.times = st.u_dt.times = u.times;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double t = u.times[i];
        Field du = u.deriv_at(t);
        Field F = du;
        st.u_dt.frames.push_back(std::move(du));
        if (viscous) F -= laplacian(u.frames[i]);
        F += divergence(outer_product(u.frames[i], u.frames[i]));
        Field PF = leray_project(F);
        Field p = inv_laplacian(divergence(F));
        p *= -1.0;
        st.R.frames.push_back(antidiv_tensor(PF));
        st.p.frames.push_back(std::move(p));
    }
    st.u = std::move(u);
    return st;
}

double nsr_residual(const NSRState& s, bool use_stored_derivative) {
    s.u.validate();
    const bool stored = use_stored_derivative && !s.u_dt.empty();
    std::vector<double> term2(4, 0.0); // dt+visc, convection, pressure, stress
    std::vector<double> ts, rs;
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        double t = s.u.times[i];
        Field r = stored ? s.u_dt.frames[i] : s.u.deriv_at(t);
        if (s.viscous) r -= laplacian(s.u.frames[i]);
        double t0 = lp_norm(r, 2.0);
        Field conv = divergence(outer_product(s.u.frames[i], s.u.frames[i]));
        Field gp = gradient(s.p.frames[i]);
        Field dR = divergence(s.R.frames[i]);
        r += conv;
        r += gp;
        r -= dR;
        ts.push_back(t);
        rs.push_back(lp_norm(r, 2.0));
        term2[0] = std::max(term2[0], t0);
        term2[1] = std::max(term2[1], lp_norm(conv, 2.0));
        term2[2] = std::max(term2[2], lp_norm(gp, 2.0));
        term2[3] = std::max(term2[3], lp_norm(dR, 2.0));
    }
    double scale = *std::max_element(term2.begin(), term2.end());
    if (scale == 0.0) return 0.0;
    return time_lp(ts, rs, 2.0) / scale;
}

void write_state(const std::string& dir, const NSRState& s) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    nlohmann::json meta;
    meta["viscous"] = s.viscous;
    meta["d"] = s.grid.d;
    meta["n"] = s.grid.n;
    meta["times"] = s.u.times;
    meta["tau"] = s.tau;
    meta["active"] = s.active;
    nlohmann::json intervals = nlohmann::json::array();
    for (const auto& iv : s.I) intervals.push_back({iv.a, iv.b});
    meta["I"] = intervals;
    meta["has_u_dt"] = !s.u_dt.empty();
    std::ofstream os(dir + "/state.json");
    if (!os) throw std::runtime_error("write_state: cannot open " + dir + "/state.json");
    os << meta.dump(2) << "\n";

    char name[64];
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        std::snprintf(name, sizeof(name), "/u_%05zu.tfield", i);
        write_tfield(dir + name, s.u.frames[i], s.u.times[i]);
        std::snprintf(name, sizeof(name), "/R_%05zu.tfield", i);
        write_tfield(dir + name, s.R.frames[i], s.R.times[i]);
        std::snprintf(name, sizeof(name), "/p_%05zu.tfield", i);
        write_tfield(dir + name, s.p.frames[i], s.p.times[i]);
        if (!s.u_dt.empty()) {
            std::snprintf(name, sizeof(name), "/udt_%05zu.tfield", i);
            write_tfield(dir + name, s.u_dt.frames[i], s.u_dt.times[i]);
        }
    }
}

NSRState read_state(const std::string& dir) {
    std::ifstream is(dir + "/state.json");
    if (!is) throw std::runtime_error("read_state: cannot open " + dir + "/state.json");
    nlohmann::json meta = nlohmann::json::parse(is);
    NSRState s;
    s.grid = GridSpec(meta.at("d").get<int>(), meta.at("n").get<int>());
    s.viscous = meta.at("viscous").get<bool>();
    s.tau = meta.at("tau").get<double>();
    s.active = meta.at("active").get<std::vector<int>>();
    s.I.clear();
    for (const auto& iv : meta.at("I")) s.I.push_back({iv[0].get<double>(), iv[1].get<double>()});
    auto times = meta.at("times").get<std::vector<double>>();
    bool has_u_dt = meta.value("has_u_dt", false);
    s.u.times = s.R.times = s.p.times = times;
    if (has_u_dt) s.u_dt.times = times;
    char name[64];
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::snprintf(name, sizeof(name), "/u_%05zu.tfield", i);
        s.u.frames.push_back(read_tfield(dir + name).field);
        std::snprintf(name, sizeof(name), "/R_%05zu.tfield", i);
        s.R.frames.push_back(read_tfield(dir + name).field);
        std::snprintf(name, sizeof(name), "/p_%05zu.tfield", i);
        s.p.frames.push_back(read_tfield(dir + name).field);
        if (has_u_dt) {
            std::snprintf(name, sizeof(name), "/udt_%05zu.tfield", i);
            s.u_dt.frames.push_back(read_tfield(dir + name).field);
        }
    }
    return s;
}

} // namespace wt
