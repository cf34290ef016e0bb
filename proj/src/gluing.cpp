#include "wildtorus/gluing.hpp"

#include "wildtorus/antidiv.hpp"
#include "wildtorus/norms.hpp"
#include "wildtorus/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace wt {
namespace {

// G = div(v(x)v + v(x)u + u(x)v) + div R at time t, computed as
// div((v+u)(x)(v+u)) - div(u(x)u) so a zero v contributes exactly nothing.
Field forcing_vector(const NSRState& s, const Field& v, double t) {
    Field u = s.u.at(t);
    Field su = u;
    su += v;
    Field F = outer_product(su, su);
    F -= outer_product(u, u);
    Field G = divergence(F);
    G += divergence(s.R.at(t));
    return G;
}

// Explicit part of the corrector RHS: -P G. Optionally recovers the pressure
// q = -inv_laplacian(div G) eliminated by the projection.
Field nonlinear_rhs(const NSRState& s, const Field& v, double t, Field* q_out = nullptr) {
    Field G = forcing_vector(s, v, t);
    if (q_out) {
        *q_out = inv_laplacian(divergence(G));
        *q_out *= -1.0;
    }
    Field N = leray_project(G);
    N *= -1.0;
    return N;
}

// The corrector forcing and the cutoff algebra read the interpolant
// s.R.at(t), whose cubic stencil reaches up to two frames past [t0, t1].
// Activity must be decided by everything the interpolant can see, or a
// node could be skipped while its cutoff ramps still pick up interpolated
// stress bleeding in from a neighboring support region.
bool stress_is_zero_on(const NSRState& s, double t0, double t1) {
    std::ptrdiff_t n = static_cast<std::ptrdiff_t>(s.R.size());
    std::ptrdiff_t lo = n, hi = -1;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double t = s.R.times[static_cast<std::size_t>(i)];
        if (t < t0 - 1e-12 || t > t1 + 1e-12) continue;
        lo = std::min(lo, i);
        hi = std::max(hi, i);
    }
    if (hi < 0) return false; // no frames inside the interval -> treat as nonzero
    lo = std::max<std::ptrdiff_t>(0, lo - 2);
    hi = std::min(n - 1, hi + 2);
    for (std::ptrdiff_t i = lo; i <= hi; ++i)
        if (s.R.frames[static_cast<std::size_t>(i)].max_abs() != 0.0) return false;
    return true;
}

} // namespace

Subdivision subdivide(double tau, double eps) {
    if (tau <= 0.0 || tau >= 1.0 || eps <= 0.0 || eps > 1.0)
        throw std::invalid_argument("subdivide: need 0 < tau < 1 and 0 < eps <= 1");
    int n_sub = static_cast<int>(std::lround(std::pow(tau, -eps)));
    if (n_sub < 2) throw std::invalid_argument("subdivide: tau^{-eps} rounds below 2");
    Subdivision sub;
    sub.eps = eps;
    sub.n_sub = n_sub;
    sub.tau = std::pow(static_cast<double>(n_sub), -1.0 / eps);
    sub.adjustment = std::abs(sub.tau - tau) / tau;
    sub.nodes.resize(static_cast<std::size_t>(n_sub) + 1);
    for (int i = 0; i <= n_sub; ++i)
        sub.nodes[static_cast<std::size_t>(i)] = static_cast<double>(i) / n_sub;
    return sub;
}

CorrectorSolve solve_corrector(const NSRState& s, double t0, double t1,
                               const CorrectorOptions& opt) {
    if (!(t1 > t0)) throw std::invalid_argument("solve_corrector: empty interval");
    const int m = opt.steps;
    const double h = (t1 - t0) / m;
    const bool visc = s.viscous;

    CorrectorSolve cs;
    Field v = Field::vector(s.grid);

    auto heat = [&](const Field& f, double dt) { return visc ? heat_semigroup(f, dt) : f; };

    for (int j = 0; j <= m; ++j) {
        double t = t0 + j * h;
        Field q;
        Field k1 = nonlinear_rhs(s, v, t, &q);
        Field v_dt = k1;
        if (visc) v_dt += laplacian(v);

        if (j % opt.store_every == 0 || j == m) {
            cs.v.times.push_back(t);
            cs.v.frames.push_back(v);
            cs.q.times.push_back(t);
            cs.q.frames.push_back(std::move(q));
            cs.v_dt.times.push_back(t);
            cs.v_dt.frames.push_back(std::move(v_dt));
        }
        double hd = sobolev_norm(v, s.grid.d);
        cs.max_hd = std::max(cs.max_hd, hd);
        if (hd > opt.guard)
            throw BlowUpGuard("solve_corrector: ||v||_{H^d} exceeded the guard");
        if (j == m) break;

        // integrating-factor RK4 (diffusion exact, rest explicit)
        Field a = v;
        a.axpy(h / 2.0, k1);
        Field k2 = nonlinear_rhs(s, heat(a, h / 2.0), t + h / 2.0);
        Field b = heat(v, h / 2.0);
        b.axpy(h / 2.0, k2);
        Field k3 = nonlinear_rhs(s, b, t + h / 2.0);
        Field c = heat(v, h);
        c.axpy(h, heat(k3, h / 2.0));
        Field k4 = nonlinear_rhs(s, c, t + h);

        Field vn = heat(v, h);
        vn.axpy(h / 6.0, heat(k1, h));
        Field mid = k2;
        mid += k3;
        vn.axpy(h / 3.0, heat(mid, h / 2.0));
        vn.axpy(h / 6.0, k4);
        v = std::move(vn);
    }

    // sanity: centered FD of the dense output vs the stored derivative
    double vmax = 0.0;
    for (const Field& f : cs.v.frames) vmax = std::max(vmax, f.max_abs());
    cs.nonzero = vmax > 0.0;
    if (cs.nonzero) {
        double dmax = 0.0;
        for (std::size_t j = 1; j + 1 < cs.v.size(); ++j) {
            Field fd = cs.v.frames[j + 1];
            fd -= cs.v.frames[j - 1];
            fd *= 1.0 / (cs.v.times[j + 1] - cs.v.times[j - 1]);
            fd -= cs.v_dt.frames[j];
            dmax = std::max(dmax, fd.max_abs());
            if (cs.v.size() > 16) j += 3; // sample
        }
        double dscale = 0.0;
        for (const Field& f : cs.v_dt.frames) dscale = std::max(dscale, f.max_abs());
        cs.residual = (dscale > 0.0) ? dmax / dscale : 0.0;
    }
    return cs;
}

NSRState glue(const NSRState& s, double tau, double eps, const GlueOptions& opt,
              GlueReport* report) {
    s.u.validate();
    GlueReport rep;
    rep.tau_requested = tau;

    Subdivision sub;
    CutoffFamily fam;
    std::vector<CorrectorSolve> solves;
    CorrectorOptions copt;
    copt.steps = opt.corrector_steps;
    copt.store_every = opt.corrector_store_every;
    copt.guard = opt.delta;

    double tau_cur = tau;
    for (int halv = 0;; ++halv) {
        sub = subdivide(tau_cur, eps);
        fam = glue_cutoffs(sub.tau, eps);
        solves.clear();
        solves.resize(static_cast<std::size_t>(sub.n_sub));
        try {
            for (int i = 0; i < sub.n_sub; ++i) {
                double a = sub.nodes[static_cast<std::size_t>(i)];
                double b = sub.nodes[static_cast<std::size_t>(i) + 1];
                if (stress_is_zero_on(s, a, b)) {
                    // exact solution there: v_i identically zero
                    CorrectorSolve z;
                    z.v.times = {a, (a + b) / 2.0, b};
                    z.q.times = z.v_dt.times = z.v.times;
                    for (int k = 0; k < 3; ++k) {
                        z.v.frames.push_back(Field::vector(s.grid));
                        z.v_dt.frames.push_back(Field::vector(s.grid));
                        z.q.frames.push_back(Field::scalar(s.grid));
                    }
                    solves[static_cast<std::size_t>(i)] = std::move(z);
                } else {
                    solves[static_cast<std::size_t>(i)] = solve_corrector(s, a, b, copt);
                }
            }
            break;
        } catch (const BlowUpGuard&) {
            if (halv >= opt.max_halvings)
                throw BlowUpGuard("glue: corrector exceeded delta after max tau halvings");
            tau_cur /= 2.0;
            rep.halvings = halv + 1;
        }
    }
    const double tau_g = sub.tau;
    const int N = sub.n_sub;
    rep.tau_used = tau_g;
    rep.n_sub = N;
    for (const auto& cs : solves) rep.max_hd = std::max(rep.max_hd, cs.max_hd);

    // active nodes and well-preparedness intervals
    std::vector<int> E;
    for (int i = 1; i < N; ++i)
        if (solves[static_cast<std::size_t>(i) - 1].nonzero ||
            solves[static_cast<std::size_t>(i)].nonzero)
            E.push_back(i);
    rep.active = E;
    std::vector<Interval> I;
    for (int i : E) {
        double c = sub.nodes[static_cast<std::size_t>(i)];
        Interval iv{std::max(0.0, c - 2.5 * tau_g), std::min(1.0, c + 2.5 * tau_g)};
        if (!I.empty() && iv.a <= I.back().b)
            I.back().b = iv.b; // merge overlapping windows
        else
            I.push_back(iv);
    }

    // graded output grid: fine near every interior node
    std::vector<std::pair<double, double>> windows;
    for (int i = 1; i < N; ++i) {
        double c = sub.nodes[static_cast<std::size_t>(i)];
        windows.push_back({c - 3.0 * tau_g, c + 3.0 * tau_g});
    }
    std::vector<double> times =
        graded_times(opt.coarse_nodes, windows, tau_g / opt.fine_dt_factor);

    NSRState out;
    out.grid = s.grid;
    out.viscous = s.viscous;
    out.I = I.empty() ? std::vector<Interval>{} : I;
    out.tau = tau_g;
    out.active = E;
    out.u.times = out.R.times = out.p.times = out.u_dt.times = times;

    const int d = s.grid.d;
    std::vector<double> ts_r, rbar_r;
    for (double t : times) {
        Field u = s.u.at(t);
        Field u_dt = s.u_dt.empty() ? s.u.deriv_at(t) : s.u_dt.at(t);
        Field p = s.p.at(t);

        double chi_sum = 0.0;
        Field w_chidt;     // sum chi_i' v_i
        bool w_any = false;
        Field Rbar = Field::tensor(s.grid);
        for (int i = 0; i < N; ++i) {
            double ci = fam.chi(i, t);
            double cdt = fam.chi_dt(i, t);
            chi_sum += ci;
            if (ci == 0.0 && cdt == 0.0) continue;
            const CorrectorSolve& cs = solves[static_cast<std::size_t>(i)];
            if (!cs.nonzero) continue;
            Field vi = cs.v.at(t);
            if (ci != 0.0) {
                u.axpy(ci, vi);
                u_dt.axpy(ci, cs.v_dt.at(t));
                p.axpy(ci, cs.q.at(t));
            }
            if (cdt != 0.0) {
                u_dt.axpy(cdt, vi);
                if (!w_any) {
                    w_chidt = Field::vector(s.grid);
                    w_any = true;
                }
                w_chidt.axpy(cdt, vi);
            }
            double c2c = ci * ci - ci;
            if (c2c != 0.0) {
                Field vv = outer_product_traceless(vi, vi);
                Rbar.axpy(c2c, vv);
                // pressure counterpart: -(chi^2 - chi) |v|^2 / d
                Field v2 = dealiased_map({&vi}, Rank::scalar, [d](const double* in, double* o) {
                    double m = 0.0;
                    for (int a = 0; a < d; ++a) m += in[a] * in[a];
                    o[0] = m;
                });
                p.axpy(-c2c / d, v2);
            }
        }
        if (chi_sum != 1.0) Rbar.axpy(1.0 - chi_sum, s.R.at(t));
        if (w_any) Rbar += antidiv_tensor(w_chidt);

        ts_r.push_back(t);
        rbar_r.push_back(lp_norm(Rbar, opt.r));
        out.u.frames.push_back(std::move(u));
        out.u_dt.frames.push_back(std::move(u_dt));
        out.R.frames.push_back(std::move(Rbar));
        out.p.frames.push_back(std::move(p));
    }

    // stress-comparability ratio in L^1_t L^r
    std::vector<double> ts_in, r_in;
    for (std::size_t i = 0; i < s.R.size(); ++i) {
        ts_in.push_back(s.R.times[i]);
        r_in.push_back(lp_norm(s.R.frames[i], opt.r));
    }
    double denom = time_lp(ts_in, r_in, 1.0);
    rep.ratio_l1lr = (denom > 0.0) ? time_lp(ts_r, rbar_r, 1.0) / denom : 0.0;
    if (report) *report = rep;
    return out;
}

} // namespace wt
