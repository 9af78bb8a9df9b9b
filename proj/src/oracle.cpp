#include "livsic/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "livsic/errors.hpp"
#include "livsic/quadrature.hpp"

namespace livsic {

using Complex = std::complex<double>;

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr Complex kI{0.0, 1.0};
}  // namespace

Complex DiscreteModel::weyl(Complex z) const {
    Complex sum{0.0, 0.0};
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const double x = nodes[j];
        sum += weights[j] * (1.0 / (x - z) - x / (1.0 + x * x));
    }
    return sum;
}

double DiscreteModel::weighted_sum() const {
    double s = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        s += weights[j] / (1.0 + nodes[j] * nodes[j]);
    }
    return s;
}

namespace {

// One CDF panel of the weighted probability density rho(x)/(1+x^2): the
// lambda interval, its probability mass, and the chart for interpolating
// positions inside the panel.
struct Panel {
    double x0, x1;
    double mass;
    std::function<double(double)> position;  // u in [0,1] -> lambda
};

// 15-point Kronrod nodes/weights reused for single-shot panel masses.
double panel_mass_gk(const std::function<double(double)>& f, double a, double b) {
    static const double xg[8] = {0.991455371120812639206854697526329,
                                 0.949107912342758524526189684047851,
                                 0.864864423359769072789712788640926,
                                 0.741531185599394439863864773280788,
                                 0.586087235467691130294144838258730,
                                 0.405845151377397166906606412076961,
                                 0.207784955007898467600689403773245,
                                 0.0};
    static const double wg[8] = {0.022935322010529224963732008058970,
                                 0.063092092629978553290700663189204,
                                 0.104790010322250183839876322541518,
                                 0.140653259715525918745189590510238,
                                 0.169004726639267902826583426598550,
                                 0.190350578064785409913256402421014,
                                 0.204432940075298892414161999234649,
                                 0.209482141084727828012999174891714};
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    double s = wg[7] * f(c);
    for (int j = 0; j < 7; ++j) {
        s += wg[j] * (f(c - h * xg[j]) + f(c + h * xg[j]));
    }
    return s * h;
}

// Emits CDF panels for one piece. Charts mirror the quadrature segmentation:
// interior spans are affine in theta = atan(lambda), unbounded ends use the
// distance to +-pi/2 with a power chart, and negative-exponent anchors get a
// power chart as well. Panels are appended in increasing-lambda order.
void append_panels(std::vector<Panel>& out, const DensityPiece& piece, int panels_per_span) {
    const PowerLaw* pw = std::get_if<PowerLaw>(&piece.form);
    const Tabulated* tab = std::get_if<Tabulated>(&piece.form);
    double lo = piece.lo, hi = piece.hi;
    if (tab) {
        lo = std::max(lo, tab->grid.front());
        hi = std::min(hi, tab->grid.back());
    }
    if (!(lo < hi)) return;

    std::vector<double> bps{lo, hi};
    if (pw && pw->anchor > lo && pw->anchor < hi) bps.push_back(pw->anchor);
    if (tab) {
        for (double g : tab->grid) {
            if (g > lo && g < hi) bps.push_back(g);
        }
    }
    if (std::isinf(lo) && std::isinf(hi) && bps.size() == 2) bps.push_back(0.0);
    std::sort(bps.begin(), bps.end());

    const double nu = pw ? pw->exponent : 0.0;
    auto clamp_p = [](double p) { return std::clamp(p, 1.0, 40.0); };

    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
        const double a = bps[i], b = bps[i + 1];
        // chart: u in [0,1] -> lambda, increasing, with du-jacobian of theta
        std::function<double(double)> pos;
        std::function<double(double)> dtheta_du;
        if (std::isinf(a)) {
            // d = theta + pi/2 in (0, d1], lambda = -cot(d); u runs downward in d
            const double d1 = std::atan(b) + kHalfPi;
            const double p = clamp_p(nu > 0.0 ? 2.0 / (1.0 + nu) : 1.0);
            pos = [d1, p](double u) {
                const double d = d1 * std::pow(1.0 - u, p);
                return d <= 0.0 ? -std::numeric_limits<double>::infinity()
                                : -1.0 / std::tan(d);
            };
            dtheta_du = [d1, p](double u) {
                const double w = 1.0 - u;
                return d1 * p * std::pow(w, p - 1.0);
            };
        } else if (std::isinf(b)) {
            const double d0 = kHalfPi - std::atan(a);
            const double p = clamp_p(nu > 0.0 ? 2.0 / (1.0 + nu) : 1.0);
            pos = [d0, p](double u) {
                const double d = d0 * std::pow(1.0 - u, p);
                return d <= 0.0 ? std::numeric_limits<double>::infinity()
                                : 1.0 / std::tan(d);
            };
            dtheta_du = [d0, p](double u) {
                const double w = 1.0 - u;
                return d0 * p * std::pow(w, p - 1.0);
            };
        } else {
            const double th0 = std::atan(a), th1 = std::atan(b);
            double p = 1.0;
            bool from_left = false;
            if (pw && pw->exponent < 0.0) {
                if (pw->anchor == a) {
                    p = clamp_p(2.0 / (1.0 + pw->exponent));
                    from_left = true;
                } else if (pw->anchor == b) {
                    p = clamp_p(2.0 / (1.0 + pw->exponent));
                }
            }
            if (from_left) {
                pos = [th0, th1, p](double u) {
                    return std::tan(th0 + (th1 - th0) * std::pow(u, p));
                };
                dtheta_du = [th0, th1, p](double u) {
                    return (th1 - th0) * p * std::pow(u, p - 1.0);
                };
            } else {
                pos = [th0, th1, p](double u) {
                    return std::tan(th1 - (th1 - th0) * std::pow(1.0 - u, p));
                };
                dtheta_du = [th0, th1, p](double u) {
                    return (th1 - th0) * p * std::pow(1.0 - u, p - 1.0);
                };
            }
        }

        DensityPiece pc = piece;
        auto integrand = [pc, pos, dtheta_du](double u) {
            const double x = pos(u);
            if (std::isinf(x)) return 0.0;
            return pc.density(x) * dtheta_du(u);
        };
        for (int k = 0; k < panels_per_span; ++k) {
            const double u0 = static_cast<double>(k) / panels_per_span;
            const double u1 = static_cast<double>(k + 1) / panels_per_span;
            Panel p;
            p.x0 = pos(u0);
            p.x1 = pos(u1);
            p.mass = panel_mass_gk(integrand, u0, u1);
            p.position = [pos, u0, u1](double f) { return pos(u0 + (u1 - u0) * f); };
            if (p.mass > 0.0) out.push_back(std::move(p));
        }
    }
}

}  // namespace

DiscreteModel discretize(const ModelTriple& t, int n, double quantile_cut) {
    if (n < 2) throw Error("discretize needs n >= 2");
    if (!(quantile_cut > 0.0 && quantile_cut < 0.5)) {
        throw Error("quantile cut must lie in (0, 0.5)");
    }
    const RealMeasure& m = t.measure();

    std::map<double, double> nodes;  // position -> weight (merges collisions)
    for (const Atom& a : m.atoms()) {
        nodes[a.pos] += m.scale() * a.mass;
    }

    if (!m.pieces().empty()) {
        std::vector<Panel> panels;
        const int per_span = std::max(256, 8 * n / static_cast<int>(m.pieces().size() + 1));
        for (const DensityPiece& p : m.pieces()) {
            append_panels(panels, p, per_span);
        }
        std::sort(panels.begin(), panels.end(),
                  [](const Panel& a, const Panel& b) { return a.x0 < b.x0; });
        std::vector<double> prefix(panels.size() + 1, 0.0);
        for (std::size_t j = 0; j < panels.size(); ++j) {
            prefix[j + 1] = prefix[j] + panels[j].mass;
        }
        const double zc = prefix.back();
        if (zc > 0.0) {
            auto position_at = [&](double target) {
                auto it = std::upper_bound(prefix.begin(), prefix.end(), target);
                std::size_t j = static_cast<std::size_t>(it - prefix.begin());
                j = (j == 0) ? 0 : j - 1;
                j = std::min(j, panels.size() - 1);
                const double frac = (target - prefix[j]) / panels[j].mass;
                return panels[j].position(std::clamp(frac, 0.0, 1.0));
            };

            const int cells = std::max(1, n / 2);
            const double usable = zc * (1.0 - 2.0 * quantile_cut);
            std::vector<double> edges;
            edges.reserve(static_cast<std::size_t>(cells) + 1);
            edges.push_back(position_at(zc * quantile_cut));
            // Quantile edges, with wide far-tail cells split geometrically so
            // no cell spans more than a bounded dynamic range.
            auto push_refined = [&edges](auto&& self, double a, double b) -> void {
                if (!(b > a)) return;
                const bool same_sign = (a > 0.0 && b > 0.0) || (a < 0.0 && b < 0.0);
                if (b - a > std::max(1.0, 0.75 * std::min(std::abs(a), std::abs(b))) &&
                    same_sign) {
                    const double mid = std::copysign(std::sqrt(a * b), a);
                    if (mid > a && mid < b) {
                        self(self, a, mid);
                        self(self, mid, b);
                        return;
                    }
                }
                edges.push_back(b);
            };
            for (int k = 1; k <= cells; ++k) {
                push_refined(push_refined, edges.back(),
                             position_at(zc * quantile_cut + usable * k / cells));
            }
            const int total_cells = static_cast<int>(edges.size()) - 1;
            for (int k = 0; k < total_cells; ++k) {
                double mom[4] = {0.0, 0.0, 0.0, 0.0};
                for (const DensityPiece& p : m.pieces()) {
                    for (int j = 0; j < 4; ++j) {
                        mom[j] += piece_poly_moment(p, edges[k], edges[k + 1], j);
                    }
                }
                const double m0 = mom[0];
                if (!(m0 > 0.0)) continue;
                // moment-matched two-point Gauss rule per quantile cell; wide
                // tail cells would otherwise dominate the error of M_N
                const double c = mom[1] / m0;
                const double mu2 = mom[2] / m0 - c * c;
                const double mu3 = mom[3] / m0 - 3.0 * c * (mom[2] / m0) + 2.0 * c * c * c;
                const double span = edges[k + 1] - edges[k];
                if (mu2 > 1e-20 * span * span && std::isfinite(mu3)) {
                    const double a0 = c;
                    const double a1 = mu3 / mu2 + c;
                    const double disc = (a0 - a1) * (a0 - a1) + 4.0 * mu2;
                    const double r = std::sqrt(disc);
                    const double xm = 0.5 * (a0 + a1 - r), xp = 0.5 * (a0 + a1 + r);
                    if (xp > xm && xm > edges[k] - span && xp < edges[k + 1] + span) {
                        const double wp = m0 * (c - xm) / (xp - xm);
                        const double wm = m0 - wp;
                        if (wp > 0.0 && wm > 0.0) {
                            nodes[xm] += m.scale() * wm;
                            nodes[xp] += m.scale() * wp;
                            continue;
                        }
                    }
                }
                if (std::isfinite(c)) nodes[c] += m.scale() * m0;
            }
        }
    }

    if (nodes.size() < 2) throw Error("discretization produced fewer than 2 nodes");

    DiscreteModel d;
    d.kappa = t.kappa();
    d.nodes.reserve(nodes.size());
    d.weights.reserve(nodes.size());
    double wsum = 0.0;
    for (const auto& [x, w] : nodes) {
        d.nodes.push_back(x);
        d.weights.push_back(w);
        wsum += w / (1.0 + x * x);
    }
    for (double& w : d.weights) w /= wsum;
    return d;
}

Eigen::MatrixXcd DissipativeMatrix::dense() const {
    const Eigen::VectorXcd v = factor.cast<Complex>();
    Eigen::MatrixXcd T = coupling * (v * v.transpose());
    T.diagonal() += diag.cast<Complex>();
    return T;
}

Eigen::VectorXd DissipativeMatrix::chi() const {
    const double im = coupling.imag();
    if (im < 0.0) throw Error("dissipative matrix has negative imaginary part");
    return std::sqrt(im) * factor;
}

DissipativeMatrix build_dissipative(const DiscreteModel& d, Complex z0) {
    if (z0.imag() == 0.0) throw Error("anchor must be off the real axis");
    const int n = d.size();
    if (n < 2) throw Error("discrete model needs at least 2 nodes");

    const Complex tau = cayley_parameter(d.kappa);
    const Complex m0 = d.weyl(z0);

    // R(z0)^{-1} = D^{-1} + p (D^{-1} g)(g^T D^{-1}) / (1 - p g^T D^{-1} g)
    // with D = diag((x_j - z0)^{-1}), g_j = sqrt(w_j)/(x_j - z0) and
    // p = (M(z0) - tau)^{-1}. The rank-one coefficient p/(1 - p C) is
    // computed as (M(z0) - tau - C(z0))^{-1}, which stays finite even where
    // p itself blows up (kappa = 0 at the default anchor).
    Eigen::VectorXd u(n);
    Complex cauchy_sum{0.0, 0.0};
    for (int j = 0; j < n; ++j) {
        const double sw = std::sqrt(d.weights[j]);
        const Complex g = sw / (d.nodes[j] - z0);
        u(j) = ((d.nodes[j] - z0) * g).real();  // exactly sqrt(w_j)
        cauchy_sum += g * sw;                   // g^T D^{-1} g = sum w_j/(x_j - z0)
    }
    const Complex denom = m0 - tau - cauchy_sum;
    if (std::abs(denom) < 1e-12) throw SingularResolvent("rank-one update denominator vanishes");
    const Complex gamma = 1.0 / denom;
    if (gamma.imag() < -1e-10) throw SingularResolvent("built matrix is not dissipative");

    DissipativeMatrix T;
    T.diag = Eigen::Map<const Eigen::VectorXd>(d.nodes.data(), n);
    T.factor = u;
    T.coupling = Complex{gamma.real(), std::max(gamma.imag(), 0.0)};
    return T;
}

namespace {

DissipativeMatrix invert_negate(const DissipativeMatrix& t) {
    const int n = t.size();
    for (int j = 0; j < n; ++j) {
        if (t.diag(j) == 0.0) throw SingularResolvent("zero diagonal under inversion");
    }
    double s = 0.0;
    Eigen::VectorXd v(n);
    for (int j = 0; j < n; ++j) {
        v(j) = t.factor(j) / t.diag(j);
        s += t.factor(j) * v(j);
    }
    const Complex denom = 1.0 + t.coupling * s;
    if (std::abs(denom) < 1e-13) throw SingularResolvent("matrix has no bounded inverse");
    DissipativeMatrix out;
    out.diag = -t.diag.cwiseInverse();
    out.factor = v;
    out.coupling = t.coupling / denom;
    if (out.coupling.imag() < -1e-10) throw SingularResolvent("inverse left the dissipative family");
    out.coupling = Complex{out.coupling.real(), std::max(out.coupling.imag(), 0.0)};
    return out;
}

}  // namespace

DissipativeMatrix mobius_of(const DissipativeMatrix& t, const MobiusMap& f) {
    if (f.is_identity(1e-15)) return t;
    if (f.is_affine()) {
        const double slope = f.a() / f.d();
        const double offset = f.b() / f.d();
        DissipativeMatrix out;
        out.diag = slope * t.diag;
        out.diag.array() += offset;
        out.factor = t.factor;
        out.coupling = slope * t.coupling;
        return out;
    }
    const Decomposition dec = decompose(f);
    DissipativeMatrix cur = mobius_of(t, dec.g);
    cur = invert_negate(cur);
    return mobius_of(cur, dec.h);
}

Complex char_bounded_trace(const DissipativeMatrix& t, Complex z) {
    const double im = t.coupling.imag();
    if (im <= 0.0) return Complex{1.0, 0.0};
    Complex t0{0.0, 0.0};
    for (int j = 0; j < t.size(); ++j) {
        const Complex den = t.diag(j) - z;
        if (std::abs(den) < 1e-14) throw EigenvalueHit("z collides with a diagonal entry");
        t0 += t.factor(j) * t.factor(j) / den;
    }
    const Complex denom = 1.0 + std::conj(t.coupling) * t0;
    if (std::abs(denom) < 1e-14) throw EigenvalueHit("z is an eigenvalue of the adjoint");
    return 1.0 + 2.0 * kI * im * t0 / denom;
}

Eigen::MatrixXcd resolvent_dense(const DiscreteModel& d, Complex z) {
    const int n = d.size();
    const Complex tau = cayley_parameter(d.kappa);
    const Complex pden = d.weyl(z) - tau;
    if (std::abs(pden) < 1e-12) throw SingularResolvent("p(z) undefined");
    const Complex p = 1.0 / pden;

    Eigen::VectorXcd g(n);
    for (int j = 0; j < n; ++j) {
        g(j) = std::sqrt(d.weights[j]) / (d.nodes[j] - z);
    }
    Eigen::MatrixXcd R = -p * (g * g.transpose());
    for (int j = 0; j < n; ++j) {
        R(j, j) += 1.0 / (d.nodes[j] - z);
    }
    return R;
}

namespace {

double operator_norm(const Eigen::MatrixXcd& a) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
    return svd.singularValues()(0);
}

void require_well_conditioned(const Eigen::MatrixXcd& r) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(r);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= 0.0 || s(0) / s(s.size() - 1) > 1e12) {
        throw SingularResolvent("resolvent condition number above 1e12");
    }
}

}  // namespace

double check_resolvent_identity(const DiscreteModel& d, Complex z1, Complex z2) {
    if (z1 == z2) throw Error("resolvent identity check needs z1 != z2");
    const Eigen::MatrixXcd r1 = resolvent_dense(d, z1);
    const Eigen::MatrixXcd r2 = resolvent_dense(d, z2);
    require_well_conditioned(r1);
    require_well_conditioned(r2);
    const Eigen::MatrixXcd residual = r1 - r2 - (z1 - z2) * (r1 * r2);
    return operator_norm(residual);
}

double check_rank_one_inverse(const DiscreteModel& d) {
    const int n = d.size();
    for (double x : d.nodes) {
        if (std::abs(x) < 1e-12) throw NodeAtZero("discrete model has a node at 0");
    }
    const Eigen::MatrixXcd T = build_dissipative(d).dense();
    const Eigen::MatrixXcd Tinv = T.partialPivLu().inverse();

    const Complex tau = cayley_parameter(d.kappa);
    const Complex p = 1.0 / (d.weyl(Complex{0.0, 0.0}) - tau);
    Eigen::VectorXcd q(n);
    for (int j = 0; j < n; ++j) {
        q(j) = std::sqrt(d.weights[j]) / d.nodes[j];
    }
    Eigen::MatrixXcd rhs = -p * (q * q.transpose());
    for (int j = 0; j < n; ++j) {
        rhs(j, j) += 1.0 / d.nodes[j];
    }
    return operator_norm(Tinv - rhs) / operator_norm(Tinv);
}

DiscreteModel random_discrete_model(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> node_dist(-5.0, 5.0);
    std::uniform_real_distribution<double> weight_dist(0.1, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::map<double, double> entries;
    while (static_cast<int>(entries.size()) < n) {
        const double x = node_dist(rng);
        if (std::abs(x) < 0.05) continue;
        entries.emplace(x, weight_dist(rng));
    }
    DiscreteModel d;
    double wsum = 0.0;
    for (const auto& [x, w] : entries) {
        d.nodes.push_back(x);
        d.weights.push_back(w);
        wsum += w / (1.0 + x * x);
    }
    for (double& w : d.weights) w /= wsum;
    const double r = 0.9 * std::sqrt(unit(rng));
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    d.kappa = std::polar(r, phi);
    return d;
}

}  // namespace livsic
