#include "wildtorus/mikado.hpp"

#include "wildtorus/norms.hpp"
#include "wildtorus/spectral.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace wt {
namespace {

// u(s) = 16 (s - 1/2)(1 - s), max u = 1 at s = 3/4. The bump is
// phi0 = u^16 exp(1 - 1/u): still C_c^inf((1/2,1)), but the polynomial factor
// suppresses the exp bump's sharp boundary layers so the profile (and its
// transverse Laplacian) stay resolvable on desk grids.
double u_of(double s) { return 16.0 * (s - 0.5) * (1.0 - s); }

constexpr double kM = 16.0; // polynomial suppression order

} // namespace

double mikado_phi0(double s) {
    if (s <= 0.5 || s >= 1.0) return 0.0;
    double u = u_of(s);
    return std::pow(u, kM) * std::exp(1.0 - 1.0 / u);
}

double mikado_phi0_d1(double s) {
    if (s <= 0.5 || s >= 1.0) return 0.0;
    double u = u_of(s);
    double up = 24.0 - 32.0 * s;
    // d/ds [u^m e^{1-1/u}] = u^{m-2} (m u + 1) u' e^{1-1/u}
    return std::pow(u, kM - 2.0) * (kM * u + 1.0) * up * std::exp(1.0 - 1.0 / u);
}

double mikado_phi0_d2(double s) {
    if (s <= 0.5 || s >= 1.0) return 0.0;
    double u = u_of(s);
    double up = 24.0 - 32.0 * s;
    const double upp = -32.0;
    double um4 = std::pow(u, kM - 4.0);
    double um3 = um4 * u, um2 = um3 * u, um1 = um2 * u;
    return std::exp(1.0 - 1.0 / u) *
           (up * up * (kM * (kM - 1.0) * um2 + (2.0 * kM - 2.0) * um3 + um4) +
            (kM * um1 + um2) * upp);
}

namespace {

// distance and transverse unit vector from x to the periodic line family
struct LineDist {
    double s = 1e30;
    double trans[3] = {0, 0, 0}; // unit vector pointing from line to x
};

// For d=2 and primitive integer direction k (|k| = len), the periodic line
// family projects onto the lattice (1/len) Z along e_perp = (-e1, e0); the
// distance folds in O(1). Pass len = 0 to force the translate search.
LineDist nearest_line(const double x[3], const std::array<double, 3>& p,
                      const std::array<double, 3>& e, int d, double len = 0.0) {
    if (d == 2 && len > 0.0) {
        double ep0 = -e[1], ep1 = e[0];
        double c = (x[0] - p[0]) * ep0 + (x[1] - p[1]) * ep1;
        double diff = c - std::round(c * len) / len;
        LineDist ld;
        ld.s = std::abs(diff);
        double sgn = (diff >= 0.0) ? 1.0 : -1.0;
        ld.trans[0] = sgn * ep0;
        ld.trans[1] = sgn * ep1;
        return ld;
    }
    LineDist best;
    int range = 3;
    int mz = (d == 3) ? range : 0;
    for (int m0 = -range; m0 <= range; ++m0)
        for (int m1 = -range; m1 <= range; ++m1)
            for (int m2 = -mz; m2 <= mz; ++m2) {
                double w[3] = {x[0] + m0 - p[0], x[1] + m1 - p[1],
                               (d == 3) ? x[2] + m2 - p[2] : 0.0};
                double t = 0.0;
                for (int a = 0; a < d; ++a) t += w[a] * e[a];
                double s2 = 0.0;
                double perp[3];
                for (int a = 0; a < d; ++a) {
                    perp[a] = w[a] - t * e[a];
                    s2 += perp[a] * perp[a];
                }
                double s = std::sqrt(s2);
                if (s < best.s) {
                    best.s = s;
                    if (s > 0.0)
                        for (int a = 0; a < d; ++a) best.trans[a] = perp[a] / s;
                }
            }
    return best;
}

} // namespace

double periodic_line_distance(const double x[3], const std::array<double, 3>& p,
                              const std::array<double, 3>& e, int d) {
    return nearest_line(x, p, e, d).s;
}

MikadoFamily build_mikado(const GridSpec& g, const DirectionSet& dirs, double mu, int sigma) {
    if (mu < 4.0) throw std::invalid_argument("build_mikado: mu >= 4 required");
    if (sigma < 1) throw std::invalid_argument("build_mikado: sigma >= 1 required");
    if (sigma * mu > g.n / 8.0)
        throw std::invalid_argument("build_mikado: tube under-resolved (need sigma*mu <= n/8)");
    if (dirs.d != g.d) throw std::invalid_argument("build_mikado: dimension mismatch");

    MikadoFamily fam;
    fam.grid = g;
    fam.dirs = dirs;
    fam.mu = mu;
    fam.sigma = sigma;

    const int d = g.d;
    const int n = g.n;
    const std::size_t np = g.points();
    const double half_exp = (d - 1) / 2.0;

    for (int kidx = 0; kidx < dirs.count(); ++kidx) {
        const auto& e = dirs.e[kidx];
        const auto& p = dirs.shift[kidx];
        double klen = 0.0;
        if (d == 2) {
            double n2 = 0.0;
            for (int a = 0; a < 2; ++a) n2 += static_cast<double>(dirs.k[kidx][a]) * dirs.k[kidx][a];
            klen = std::sqrt(n2);
        }

        Field psi = Field::scalar(g);
        Field phi = Field::scalar(g);
        Field gphi = Field::vector(g); // (grad phi) evaluated at sigma x

        auto psis = psi.comp(0);
        auto phis = phi.comp(0);
        std::size_t idx = 0;
        auto eval_point = [&](double x0, double x1, double x2) {
            double y[3] = {std::fmod(sigma * x0, 1.0), std::fmod(sigma * x1, 1.0),
                           std::fmod(sigma * x2, 1.0)};
            LineDist ld = nearest_line(y, p, e, d, klen);
            double s = mu * ld.s;
            if (s <= 0.5 || s >= 1.0) return; // outside tube shell -> exact zeros
            double psi0 = (d == 2) ? mikado_phi0_d2(s)
                                   : mikado_phi0_d2(s) + mikado_phi0_d1(s) / s;
            psis[idx] = std::pow(mu, half_exp) * psi0;
            phis[idx] = std::pow(mu, half_exp - 2.0) * mikado_phi0(s);
            double gmag = std::pow(mu, half_exp - 1.0) * mikado_phi0_d1(s);
            for (int a = 0; a < d; ++a) gphi.comp(a)[idx] = gmag * ld.trans[a];
        };
        if (d == 2) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j, ++idx) eval_point(double(i) / n, double(j) / n, 0.0);
        } else {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int kk = 0; kk < n; ++kk, ++idx)
                        eval_point(double(i) / n, double(j) / n, double(kk) / n);
        }

        // On-grid normalization: grid mean of psi^2 is exactly 1, so the grid
        // quadrature of W (x) W reproduces e (x) e exactly.
        double m2 = 0.0;
        for (double v : psis) m2 += v * v;
        m2 /= static_cast<double>(np);
        if (m2 <= 0.0) throw std::runtime_error("build_mikado: empty tube (resolution too low)");
        double N = 1.0 / std::sqrt(m2);
        psi *= N;
        phi *= N;
        gphi *= N;

        Field W = Field::vector(g);
        for (int a = 0; a < d; ++a) {
            auto dst = W.comp(a);
            for (std::size_t q = 0; q < np; ++q) dst[q] = psis[q] * e[a];
        }
        Field Om = Field::tensor(g);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                auto dst = Om.comp(i, j);
                auto gj = gphi.comp(j);
                auto gi = gphi.comp(i);
                // oriented so that with (div S)_j = d_i S_ij we get div Omega = W
                for (std::size_t q = 0; q < np; ++q) dst[q] = gi[q] * e[j] - e[i] * gj[q];
            }

        fam.psi.push_back(std::move(psi));
        fam.phi.push_back(std::move(phi));
        fam.W.push_back(std::move(W));
        fam.Omega.push_back(std::move(Om));
        fam.norm_const.push_back(N);
    }
    return fam;
}

std::vector<MikadoReportRow> mikado_report(const GridSpec& g, const DirectionSet& dirs,
                                           const std::vector<double>& mus,
                                           const std::vector<double>& ps) {
    const int d = g.d;
    const double dm1 = d - 1.0;
    std::vector<MikadoReportRow> rows;

    auto dir_label = [&](int kidx) {
        std::string s = "(";
        for (int a = 0; a < d; ++a) {
            if (a) s += ",";
            s += std::to_string(dirs.k[kidx][a]);
        }
        return s + ")";
    };

    // collect norms per (label, p, m) across mu, then fit
    struct Key {
        std::string label;
        double p;
        int m;
        bool operator<(const Key& o) const {
            if (label != o.label) return label < o.label;
            if (p != o.p) return p < o.p;
            return m < o.m;
        }
    };
    std::map<Key, std::vector<std::pair<double, double>>> series; // mu -> norm
    std::map<Key, double> theory;

    for (double mu : mus) {
        MikadoFamily fam = build_mikado(g, dirs, mu);
        const int k0 = 0, k1 = 1;
        for (double p : ps) {
            double pexp = (p == kInf) ? 0.0 : 1.0 / p;
            for (int m = 0; m <= 1; ++m) {
                Field f = (m == 0) ? fam.W[k0] : gradient(fam.W[k0]);
                Key key{"W" + dir_label(k0), p, m};
                series[key].push_back({mu, lp_norm(f, p)});
                theory[key] = m + dm1 / 2.0 - dm1 * pexp;
            }
            {
                Key key{"Omega" + dir_label(k0), p, 0};
                series[key].push_back({mu, lp_norm(fam.Omega[k0], p)});
                theory[key] = -1.0 + dm1 / 2.0 - dm1 * pexp;
            }
            {
                Key key{"WxW" + dir_label(k0) + "x" + dir_label(k1), p, 0};
                Field cross = outer_product(fam.W[k0], fam.W[k1]);
                series[key].push_back({mu, lp_norm(cross, p)});
                theory[key] = dm1 - d * pexp;
            }
        }
    }

    for (const auto& [key, pts] : series) {
        double fitted = 0.0;
        if (pts.size() >= 2) {
            double mx = 0, my = 0;
            for (auto [mu, v] : pts) {
                mx += std::log(mu);
                my += std::log(std::max(v, 1e-300));
            }
            mx /= pts.size();
            my /= pts.size();
            double num = 0, den = 0;
            for (auto [mu, v] : pts) {
                double lx = std::log(mu) - mx;
                num += lx * (std::log(std::max(v, 1e-300)) - my);
                den += lx * lx;
            }
            fitted = num / den;
        }
        for (auto [mu, v] : pts)
            rows.push_back({key.label, mu, key.p, key.m, v, fitted, theory.at(key)});
    }
    return rows;
}

} // namespace wt
