#include "wildtorus/perturbation.hpp"

#include "wildtorus/antidiv.hpp"
#include "wildtorus/norms.hpp"
#include "wildtorus/spectral.hpp"
#include "wildtorus/temporal.hpp"

#include <algorithm>
#include <cmath>

namespace wt {
namespace {

constexpr double kFdFactor = 64.0; // amplitude FD step = 1/(kFdFactor * kappa * nu)

// u (x) v + v (x) u, dealiased.
Field sym_outer(const Field& u, const Field& v) {
    const int d = u.grid().d;
    return dealiased_map({&u, &v}, Rank::tensor, [d](const double* in, double* out) {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                out[i * d + j] = in[i] * in[d + j] + in[j] * in[d + i];
    });
}

Field square_scalar(const Field& a) {
    return dealiased_map({&a}, Rank::scalar, [](const double* in, double* out) {
        out[0] = in[0] * in[0];
    });
}

} // namespace

Perturbation::Perturbation(const NSRState& base, const ParamSet& params)
    : base_(&base), params_(params), dirs_(build_direction_set(base.grid.d)), gsys_(dirs_),
      mikado_(build_mikado(base.grid, dirs_,
                           params.mu > 0.0 ? params.mu : 4.0,
                           static_cast<int>(std::llround(params.sigma)))) {
    kappa_ = params.kappa;
    mu_ = params.mu;
    nu_ = static_cast<int>(std::llround(params.nu));
    sigma_ = static_cast<int>(std::llround(params.sigma));
    if (nu_ < 1 || sigma_ < 1 || !(kappa_ >= 1.0))
        throw std::invalid_argument("Perturbation: need integer nu, sigma >= 1 and kappa >= 1");
    base.u.validate();
    base.R.validate();
}

double Perturbation::theta(double t) const {
    if (base_->tau <= 0.0) return 1.0;
    return theta_cutoff(base_->I, base_->tau, t);
}

std::vector<Field> Perturbation::amplitudes(double t) const {
    const double th = theta(t);
    if (th == 0.0) return {};
    const double gv = g_kappa(kappa_, nu_ * t);
    if (gv == 0.0) return {};

    Field Rb = base_->R.at(t);
    Field rho = rho_field(Rb, gsys_.r_gamma());
    const int d = base_->grid.d;
    const int m = dirs_.count();
    const std::size_t np = Rb.points();

    std::vector<Field> a(static_cast<std::size_t>(m), Field::scalar(base_->grid));
    auto rhov = rho.comp(0);
    double gam[6];
    SymMat S = {};
    for (std::size_t p = 0; p < np; ++p) {
        const double inv_rho = 1.0 / rhov[p];
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                S[static_cast<std::size_t>(i) * d + j] =
                    (i == j ? 1.0 : 0.0) - Rb.comp(i, j)[p] * inv_rho;
        gsys_.gamma_into(S, gam);
        const double f = th * gv * std::sqrt(rhov[p]);
        for (int k = 0; k < m; ++k) a[static_cast<std::size_t>(k)].comp(0)[p] = f * gam[k];
    }
    return a;
}

PerturbFrame Perturbation::frame(double t, bool with_stress) const {
    const GridSpec& g = base_->grid;
    const int d = g.d;
    const int m = dirs_.count();
    const double inv_sigma = 1.0 / sigma_;
    const double inv_nu = 1.0 / nu_;

    PerturbFrame f;
    f.t = t;
    f.theta = theta(t);
    f.g = g_kappa(kappa_, nu_ * t);
    f.h = h_kappa(kappa_, nu_ * t);
    f.a = amplitudes(t);
    const bool azero = f.a.empty();
    const double g2 = f.g * f.g;

    Field Rb = base_->R.at(t);
    const bool rbzero = Rb.max_abs() == 0.0;
    Field Rbdt = base_->R.deriv_at(t);
    const bool rdtzero = Rbdt.max_abs() == 0.0;

    // --- principal part and spatial corrector --------------------------------
    f.w_p = Field::vector(g);
    f.w_c = Field::vector(g);
    std::vector<Field> aW; // a_k W_k, reused for R_far
    Field w_pc = Field::vector(g);
    if (!azero) {
        Field aOm = Field::tensor(g);
        for (int k = 0; k < m; ++k) {
            aW.push_back(multiply(mikado_.W[static_cast<std::size_t>(k)],
                                  f.a[static_cast<std::size_t>(k)]));
            f.w_p += aW.back();
            aOm += multiply(mikado_.Omega[static_cast<std::size_t>(k)],
                            f.a[static_cast<std::size_t>(k)]);
        }
        w_pc = divergence(aOm);
        w_pc *= inv_sigma;
        f.w_c = w_pc;
        f.w_c -= f.w_p;
        double mw = 0.0;
        for (double mu : f.w_p.means()) mw = std::max(mw, std::abs(mu));
        f.mean_w = mw / std::max(f.w_p.max_abs(), 1e-300);
    }

    // --- temporal corrector --------------------------------------------------
    f.w_t = Field::vector(g);
    Field PdivR = Field::vector(g);
    if (!rbzero) {
        PdivR = leray_project(divergence(Rb));
        f.w_t = PdivR;
        f.w_t *= f.h * inv_nu;
    }

    // --- time derivative of w (drives both R_lin and the stored u_dt) -------
    // d_t(w_p + w_c) in the sigma^{-1} div(sum d_t a_k Omega_k) form; the
    // amplitude derivative is exactly zero when theta or g vanishes at t
    // (both cutoffs are flat wherever they vanish).
    Field L_dt = Field::vector(g);
    if (!azero) {
        const double hfd = 1.0 / (kFdFactor * kappa_ * nu_);
        std::array<std::vector<Field>, 4> st; // t-2h, t-h, t+h, t+2h
        const double off[4] = {-2.0, -1.0, 1.0, 2.0};
        for (int j = 0; j < 4; ++j) st[static_cast<std::size_t>(j)] = amplitudes(t + off[j] * hfd);
        Field dOm = Field::tensor(g);
        const double wfd[4] = {1.0 / (12.0 * hfd), -8.0 / (12.0 * hfd), 8.0 / (12.0 * hfd),
                               -1.0 / (12.0 * hfd)};
        for (int k = 0; k < m; ++k) {
            Field da = Field::scalar(g);
            for (int j = 0; j < 4; ++j) {
                const auto& aj = st[static_cast<std::size_t>(j)];
                if (!aj.empty()) da.axpy(wfd[j], aj[static_cast<std::size_t>(k)]);
            }
            dOm += multiply(mikado_.Omega[static_cast<std::size_t>(k)], da);
        }
        L_dt = divergence(dOm);
        L_dt *= inv_sigma;
    }
    f.w_dt = L_dt;
    if (!rbzero) f.w_dt.axpy(g2 - 1.0, PdivR);
    if (!rdtzero) f.w_dt.axpy(f.h * inv_nu, leray_project(divergence(Rbdt)));

    if (!with_stress) return f;

    // --- stress parts --------------------------------------------------------
    Field w = w_pc;  // w_p + w_c, exactly divergence-free
    w += f.w_t;
    const bool wzero = azero && rbzero;

    f.R_lin = Field::tensor(g);
    if (!wzero || L_dt.max_abs() != 0.0) {
        Field Lvec = L_dt;
        if (base_->viscous) Lvec -= laplacian(w);
        Field ub = base_->u.at(t);
        Lvec += divergence(sym_outer(ub, w));
        f.R_lin = antidiv_tensor(Lvec);
    }

    f.R_cor = Field::tensor(g);
    {
        Field w_ct = w; // w_c + w_t
        w_ct -= f.w_p;
        if (w_ct.max_abs() != 0.0) {
            Field F = outer_product(w_ct, w);
            F += outer_product(f.w_p, w_ct);
            f.R_cor = antidiv_tensor(divergence(F));
        }
    }

    f.R_osc_x = Field::tensor(g);
    f.R_far_raw = Field::tensor(g);
    f.R_far = Field::tensor(g);
    if (!azero) {
        std::vector<double> defect(static_cast<std::size_t>(d), 0.0);
        for (int k = 0; k < m; ++k) {
            Field a2 = square_scalar(f.a[static_cast<std::size_t>(k)]);
            Field A = outer_product(mikado_.W[static_cast<std::size_t>(k)],
                                    mikado_.W[static_cast<std::size_t>(k)]);
            A.remove_mean();
            Field ga2 = gradient(a2);
            f.R_osc_x += bilinear_antidiv(ga2, A);
            auto mu = contract_gradient(ga2, A).means();
            for (int c = 0; c < d; ++c) defect[static_cast<std::size_t>(c)] += mu[static_cast<std::size_t>(c)];
        }
        for (int k = 0; k < m; ++k)
            for (int k2 = k + 1; k2 < m; ++k2)
                f.R_far_raw += sym_outer(aW[static_cast<std::size_t>(k)],
                                         aW[static_cast<std::size_t>(k2)]);
        f.R_far = deviatoric(f.R_far_raw);
        // Absorb the B-operator mean defect (a time-dependent constant force
        // invisible to mean-free test functions) into the stored derivative.
        double dm = 0.0;
        const std::size_t np = g.points();
        for (int c = 0; c < d; ++c) {
            const double v = defect[static_cast<std::size_t>(c)];
            dm += v * v;
            auto span = f.w_dt.comp(c);
            for (std::size_t p = 0; p < np; ++p) span[p] -= v;
        }
        f.mean_absorbed = std::sqrt(dm);
    }

    f.R_osc_t = Rbdt;
    f.R_osc_t *= f.h * inv_nu;

    // pressure of the oscillation cancellation (gradient bookkeeping)
    {
        Field T = Rb;
        T *= g2 - 1.0;
        T.axpy(f.h * inv_nu, Rbdt);
        f.P = inv_laplacian(divergence(divergence(T)));
        if (!azero) {
            Field rho = rho_field(Rb, gsys_.r_gamma());
            const double th2g2 = f.theta * f.theta * g2;
            f.P.axpy(-th2g2, rho);
        }
    }

    // geometric oscillation identity, pointwise:
    //   sum_k a_k^2 e_k (x) e_k = theta^2 g^2 rho Id - g^2 Rbar
    // (exact wherever theta = 1 or Rbar = 0, which covers well-prepared
    // states entirely).
    if (!azero) {
        Field rho = rho_field(Rb, gsys_.r_gamma());
        const double th2g2 = f.theta * f.theta * g2;
        const std::size_t np = g.points();
        double emax = 0.0, scale = 0.0;
        for (std::size_t p = 0; p < np; ++p) {
            scale = std::max(scale, th2g2 * rho.comp(0)[p]);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    double s = 0.0;
                    for (int k = 0; k < m; ++k) {
                        double ak = f.a[static_cast<std::size_t>(k)].comp(0)[p];
                        s += ak * ak * dirs_.e[static_cast<std::size_t>(k)][i] *
                             dirs_.e[static_cast<std::size_t>(k)][j];
                    }
                    double target = (i == j ? th2g2 * rho.comp(0)[p] : 0.0) - g2 * Rb.comp(i, j)[p];
                    emax = std::max(emax, std::abs(s - target));
                }
        }
        f.osc_identity_err = emax / std::max(scale, 1e-300);
    }
    return f;
}

std::vector<double> Perturbation::output_times(const PerturbOptions& opt) const {
    const double burst_half = 1.0 / (4.0 * kappa_ * nu_); // half-width of one burst
    std::vector<std::pair<double, double>> bursts;
    for (int j = 0; j < nu_; ++j) {
        double c = (j + 0.5 / kappa_) / nu_; // burst center: frac(nu t) = 1/(2 kappa)
        double a = c - 2.0 * burst_half, b = c + 2.0 * burst_half;
        bool active = false;
        for (int s = 0; s <= 8; ++s)
            if (theta(a + (b - a) * s / 8.0) > 0.0) active = true;
        if (active) bursts.push_back({a, b});
    }
    const double burst_dt = 4.0 * burst_half / std::max(opt.burst_samples, 8);
    std::vector<double> times = graded_times(opt.coarse_nodes, bursts, burst_dt);

    if (base_->tau > 0.0) {
        // Derivative stencils at protected nodes (dist <= tau) span three
        // local spacings; they must stay inside the {dist <= 3 tau / 2}
        // zero zone of Rbar, which needs spacing <= tau / 6 in the collar.
        if (opt.edge_dt_factor < 8.0)
            throw std::invalid_argument("output_times: edge_dt_factor must be >= 8");
        std::vector<std::pair<double, double>> edges;
        for (const Interval& iv : base_->I) {
            edges.push_back({iv.a, iv.a + 2.0 * base_->tau});
            edges.push_back({iv.b - 2.0 * base_->tau, iv.b});
        }
        std::vector<double> et = graded_times(2, edges, base_->tau / opt.edge_dt_factor);
        times.insert(times.end(), et.begin(), et.end());
        std::sort(times.begin(), times.end());
        std::vector<double> dedup;
        for (double t : times)
            if (dedup.empty() || t - dedup.back() > 1e-12) dedup.push_back(t);
        times = std::move(dedup);
    }
    return times;
}

NSRState perturb(const NSRState& base, const ParamSet& params, const PerturbOptions& opt,
                 PerturbReport* report) {
    Perturbation ctx(base, params);
    std::vector<double> times = ctx.output_times(opt);

    const double p_t = static_cast<double>(params.p.numerator()) /
                       static_cast<double>(params.p.denominator());
    const double q_x = static_cast<double>(params.q.numerator()) /
                       static_cast<double>(params.q.denominator());
    const double r_x = params.r_num > 1.0 ? params.r_num : 2.0;

    NSRState out;
    out.grid = base.grid;
    out.viscous = base.viscous;
    out.I = base.I;
    out.tau = base.tau;
    out.active = base.active;
    out.u.times = out.R.times = out.p.times = out.u_dt.times = times;

    PerturbReport rep;
    std::vector<double> n_wp2, n_wpinf, n_wpw1q, n_wc2, n_wt2, n_r1, n_rb;
    for (double t : times) {
        PerturbFrame f = ctx.frame(t, true);

        Field u1 = base.u.at(t);
        u1 += f.w_p;
        u1 += f.w_c;
        u1 += f.w_t;
        Field u1_dt = base.u_dt.empty() ? base.u.deriv_at(t) : base.u_dt.at(t);
        u1_dt += f.w_dt;
        Field R1 = f.R_lin;
        R1 += f.R_cor;
        R1 += f.R_osc_x;
        R1 += f.R_osc_t;
        R1 += f.R_far;
        // The product terms carry a small spatial mean at desk scale (the
        // sampled tube overlaps do not integrate to exactly e (x) e).  A
        // constant tensor has zero divergence, so dropping the mean is a
        // pure gauge choice that restores the zero-mean invariant without
        // touching the momentum residual; on protected frames R1 is
        // identically zero and this is a no-op.
        R1.remove_mean();
        Field p1 = compute_pressure(u1, R1);

        n_wp2.push_back(lp_norm(f.w_p, 2.0));
        n_wpinf.push_back(lp_norm(f.w_p, kInf));
        n_wpw1q.push_back(w1q_norm(f.w_p, q_x));
        n_wc2.push_back(lp_norm(f.w_c, 2.0));
        n_wt2.push_back(lp_norm(f.w_t, 2.0));
        n_r1.push_back(lp_norm(R1, r_x));
        n_rb.push_back(lp_norm(base.R.at(t), r_x));

        double wmax = std::max({f.w_p.max_abs(), f.w_c.max_abs(), f.w_t.max_abs()});
        if (wmax > 0.0) {
            Field dw = f.w_p;
            dw += f.w_c;
            dw += f.w_t;
            rep.div_w_rel = std::max(rep.div_w_rel, divergence(dw).max_abs() / wmax);
        }
        rep.osc_identity_err = std::max(rep.osc_identity_err, f.osc_identity_err);
        rep.mean_w = std::max(rep.mean_w, f.mean_w);
        rep.mean_absorbed = std::max(rep.mean_absorbed, f.mean_absorbed);

        out.u.frames.push_back(std::move(u1));
        out.u_dt.frames.push_back(std::move(u1_dt));
        out.R.frames.push_back(std::move(R1));
        out.p.frames.push_back(std::move(p1));
    }

    rep.frames = times.size();
    rep.wp_l2l2 = time_lp(times, n_wp2, 2.0);
    rep.wp_lplinf = time_lp(times, n_wpinf, p_t);
    rep.wp_l1w1q = time_lp(times, n_wpw1q, 1.0);
    rep.wc_l2l2 = time_lp(times, n_wc2, 2.0);
    rep.wt_l2l2 = time_lp(times, n_wt2, 2.0);
    rep.r1_l1lr = time_lp(times, n_r1, 1.0);
    rep.rbar_l1lr = time_lp(times, n_rb, 1.0);
    rep.residual = nsr_residual(out);
    if (report) *report = rep;
    return out;
}

double oscillation_identity_error(const Perturbation& ctx, const PerturbFrame& f) {
    const NSRState& base = ctx.base();
    const double inv_nu = 1.0 / std::llround(ctx.params().nu);
    Field Rb = base.R.at(f.t);
    Field Rbdt = base.R.deriv_at(f.t);

    Field lhs = Field::vector(base.grid);
    if (Rb.max_abs() != 0.0) lhs.axpy(f.g * f.g - 1.0, leray_project(divergence(Rb)));
    if (Rbdt.max_abs() != 0.0) lhs.axpy(f.h * inv_nu, leray_project(divergence(Rbdt)));

    Field T = outer_product(f.w_p, f.w_p);
    T += Rb;
    Field conv = divergence(T);
    lhs += conv;
    lhs += gradient(f.P);

    Field Ro = f.R_osc_x;
    Ro += f.R_osc_t;
    Ro += f.R_far_raw;
    Field dRo = divergence(Ro);
    lhs -= dRo;

    // The identity holds modulo gradients (the pressure absorbs them by
    // construction), so compare divergence-free parts.
    Field defect = leray_project(lhs);
    double scale = std::max({conv.max_abs(), dRo.max_abs(), 1e-300});
    return defect.max_abs() / scale;
}

} // namespace wt
