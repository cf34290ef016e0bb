// Convex-integration step: intermittent Mikado perturbation of a
// well-prepared iterate and the new stress/pressure assembly.
//
// Given (ubar, Rbar, pbar) and a parameter set (nu, sigma, kappa, mu), the
// velocity perturbation is w = w_p + w_c + w_t with
//   a_k  = theta(t) g_kappa(nu t) rho^{1/2} Gamma_k(Id - Rbar / rho),
//   w_p  = sum_k a_k W_k(sigma x),
//   w_c  = sigma^{-1} sum_k grad a_k : Omega_k(sigma x),
//   w_t  = nu^{-1} h_kappa(nu t) P(div Rbar)        (P = Leray projection),
// and the new stress splits into linear, corrector, oscillation (space and
// time), and far-interaction parts. The new pressure is recovered from the
// Poisson relation, so all pure-gradient bookkeeping terms drop out.
//
// Exactness conventions:
//  - w_p + w_c is evaluated as sigma^{-1} div(sum_k a_k Omega_k), which is
//    divergence-free to machine precision (div div of a skew tensor).
//  - The amplitude time derivative is a 4th-order finite difference; the
//    same vector feeds both R_Lin and the stored u_dt, so it cancels exactly
//    in the momentum residual.
//  - a_k and d_t a_k are exactly zero wherever theta or g vanishes (both
//    cutoffs are exactly flat there), so supp_t w lies inside I.
#pragma once

#include "wildtorus/geometry.hpp"
#include "wildtorus/mikado.hpp"
#include "wildtorus/params.hpp"
#include "wildtorus/state.hpp"

namespace wt {

struct PerturbOptions {
    int coarse_nodes = 33;        // baseline output grid on [0,1]
    int burst_samples = 32;       // fine nodes across one temporal burst
    double edge_dt_factor = 16.0; // dt = tau / factor near the edges of I (>= 8,
                                  // so derivative stencils at protected nodes
                                  // stay inside the stress-free margin)
    double fd_dt_factor = 64.0;   // amplitude FD step = 1/(factor * kappa * nu)
};

// Everything the construction produces at one instant.
struct PerturbFrame {
    double t = 0.0;
    double theta = 0.0, g = 0.0, h = 0.0;
    std::vector<Field> a; // scalar amplitudes; empty means identically zero
    Field w_p, w_c, w_t;  // vectors (w_p + w_c exactly divergence-free)
    Field w_dt;           // time derivative of w, mean defect absorbed
    Field R_lin, R_cor, R_osc_x, R_osc_t, R_far; // symmetric trace-free
    Field R_far_raw;      // before trace removal (for the identity checks)
    Field P;              // pressure of the oscillation cancellation
    double osc_identity_err = 0.0; // geometric identity, pointwise, relative
    double mean_w = 0.0;           // |mean w_p| / ||w_p||_inf
    double mean_absorbed = 0.0;    // |B-operator mean defect| folded into w_dt
};

class Perturbation {
  public:
    Perturbation(const NSRState& base, const ParamSet& params);

    const NSRState& base() const { return *base_; }
    const ParamSet& params() const { return params_; }
    const MikadoFamily& mikado() const { return mikado_; }
    const GammaSystem& gamma_system() const { return gsys_; }

    double theta(double t) const;

    // Amplitude scalars a_k(t, .); an empty vector encodes the exact zero
    // (theta or g vanishes at t).
    std::vector<Field> amplitudes(double t) const;

    // Full assembly at one time. with_stress = false skips the stress parts
    // (cheap path for norm sweeps).
    PerturbFrame frame(double t, bool with_stress = true) const;

    // Graded output grid: coarse nodes, fine windows around each temporal
    // burst that meets {theta > 0}, and fine windows at the edges of I.
    std::vector<double> output_times(const PerturbOptions& opt) const;

  private:
    const NSRState* base_;
    ParamSet params_;
    DirectionSet dirs_;
    GammaSystem gsys_;
    MikadoFamily mikado_;
    double kappa_ = 1.0, mu_ = 1.0;
    int nu_ = 1, sigma_ = 1;
};

struct PerturbReport {
    // mixed norms of the perturbation parts
    double wp_l2l2 = 0.0, wp_lplinf = 0.0, wp_l1w1q = 0.0;
    double wc_l2l2 = 0.0, wt_l2l2 = 0.0;
    double r1_l1lr = 0.0, rbar_l1lr = 0.0; // new vs old stress in L^1_t L^r
    double residual = 0.0;                 // certified momentum residual of the output
    double osc_identity_err = 0.0;         // max over frames (geometric identity)
    double div_w_rel = 0.0;                // max ||div w|| / ||w||_inf over frames
    double mean_w = 0.0, mean_absorbed = 0.0;
    std::size_t frames = 0;
};

// One full convex-integration step. The output state keeps the input's
// well-preparedness data (same I, tau) and carries the analytic u_dt.
NSRState perturb(const NSRState& base, const ParamSet& params, const PerturbOptions& opt = {},
                 PerturbReport* report = nullptr);

// Residual of the oscillation-cancellation identity
//   d_t w_t + div(w_p (x) w_p + Rbar) + grad P - div(R_osc_x + R_osc_t + R_far)
// at the frame's time, relative to the largest participating term. The
// defect is Leray-projected first: pure-gradient parts (including the
// gradient component of the Mikado sampling error) are absorbed by the
// recovered pressure and do not enter the momentum residual.
double oscillation_identity_error(const Perturbation& ctx, const PerturbFrame& f);

} // namespace wt
