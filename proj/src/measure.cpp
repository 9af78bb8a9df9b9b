#include "livsic/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "livsic/errors.hpp"
#include "livsic/quadrature.hpp"

namespace livsic {

namespace {

using Complex = std::complex<double>;
using KernelFn = std::function<Complex(double)>;

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLargeLambda = 1e8;

const PowerLaw* as_power(const DensityPiece& p) {
    return std::get_if<PowerLaw>(&p.form);
}
const Tabulated* as_tabulated(const DensityPiece& p) {
    return std::get_if<Tabulated>(&p.form);
}

// Effective integration range of a piece (tabulated densities vanish
// outside their grid).
std::pair<double, double> piece_range(const DensityPiece& p) {
    if (const Tabulated* t = as_tabulated(p)) {
        return {std::max(p.lo, t->grid.front()), std::min(p.hi, t->grid.back())};
    }
    return {p.lo, p.hi};
}

}  // namespace

double DensityPiece::density(double x) const {
    if (x <= lo || x >= hi) return 0.0;
    if (const PowerLaw* pw = as_power(*this)) {
        return pw->coefficient * std::pow(std::abs(x - pw->anchor), pw->exponent);
    }
    const Tabulated& t = std::get<Tabulated>(form);
    if (x <= t.grid.front() || x >= t.grid.back()) return 0.0;
    auto it = std::upper_bound(t.grid.begin(), t.grid.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - t.grid.begin());
    const double x0 = t.grid[j - 1], x1 = t.grid[j];
    const double w = (x - x0) / (x1 - x0);
    return (1.0 - w) * t.values[j - 1] + w * t.values[j];
}

bool DensityPiece::unbounded() const {
    if (as_tabulated(*this)) return false;
    return std::isinf(lo) || std::isinf(hi);
}

RealMeasure::RealMeasure(std::vector<Atom> atoms, std::vector<DensityPiece> pieces,
                         double scale)
    : atoms_(std::move(atoms)), pieces_(std::move(pieces)), scale_(scale) {
    if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
        throw Error("measure scale must be positive and finite");
    }
    std::set<double> seen;
    for (const Atom& a : atoms_) {
        if (!(a.mass > 0.0) || !std::isfinite(a.mass) || !std::isfinite(a.pos)) {
            throw Error("atom masses must be positive and positions finite");
        }
        if (!seen.insert(a.pos).second) {
            throw Error("atom positions must be pairwise distinct");
        }
    }
    for (const DensityPiece& p : pieces_) {
        if (!(p.lo < p.hi)) throw Error("piece support must be a nonempty interval");
        if (const PowerLaw* pw = as_power(p)) {
            if (!(pw->coefficient > 0.0)) throw Error("power coefficient must be positive");
            if (!std::isfinite(pw->anchor)) throw Error("power anchor must be finite");
        } else {
            const Tabulated& t = std::get<Tabulated>(p.form);
            if (t.grid.size() < 2 || t.grid.size() != t.values.size()) {
                throw Error("tabulated piece needs a grid of >= 2 nodes matching its values");
            }
            if (!std::is_sorted(t.grid.begin(), t.grid.end()) ||
                std::adjacent_find(t.grid.begin(), t.grid.end()) != t.grid.end()) {
                throw Error("tabulated grid must be strictly increasing");
            }
            if (t.grid.front() < p.lo || t.grid.back() > p.hi) {
                throw Error("tabulated grid must lie inside the support");
            }
            for (double v : t.values) {
                if (v < 0.0 || !std::isfinite(v)) throw Error("tabulated values must be nonnegative");
            }
        }
    }

    infinite_mass_ = false;
    for (const DensityPiece& p : pieces_) {
        if (const PowerLaw* pw = as_power(p)) {
            if (p.unbounded() && pw->exponent >= -1.0) infinite_mass_ = true;
            const bool anchor_touches = pw->anchor >= p.lo && pw->anchor <= p.hi;
            if (anchor_touches && pw->exponent <= -1.0) infinite_mass_ = true;
        }
    }
}

void RealMeasure::require_weighted_integrable() const {
    for (const DensityPiece& p : pieces_) {
        const PowerLaw* pw = as_power(p);
        if (!pw) continue;
        if (p.unbounded() && pw->exponent >= 1.0) {
            throw NonFiniteWeightedMass("density tail exponent >= 1 on an unbounded support");
        }
        const bool anchor_touches = pw->anchor >= p.lo && pw->anchor <= p.hi;
        if (anchor_touches && pw->exponent <= -1.0) {
            throw NonFiniteWeightedMass("anchor exponent <= -1 touching the support");
        }
    }
}

double RealMeasure::gap_to_support(double s) const {
    double gap = kInf;
    for (const Atom& a : atoms_) gap = std::min(gap, std::abs(a.pos - s));
    for (const DensityPiece& p : pieces_) {
        auto [lo, hi] = piece_range(p);
        if (s >= lo && s <= hi) return 0.0;
        gap = std::min(gap, s < lo ? lo - s : s - hi);
    }
    return gap;
}

namespace {

// Appends quadrature segments for one piece against the kernel
// Kt(x) = kernel(x) * (1+x^2), written in the tangent variable so the
// weighted tails are benign. Unbounded ends are parametrized by the distance
// to +-pi/2 and evaluated through cot, which stays accurate for huge |x|.
void append_piece_segments(std::vector<quad::Segment>& out, const DensityPiece& piece,
                           const KernelFn& Kt, const std::vector<double>& extra_splits,
                           double clip_lo, double clip_hi) {
    auto [plo, phi] = piece_range(piece);
    const double lo = std::max(plo, clip_lo);
    const double hi = std::min(phi, clip_hi);
    if (!(lo < hi)) return;

    const PowerLaw* pw = as_power(piece);
    const double nu = pw ? pw->exponent : 0.0;

    std::set<double> bps{lo, hi};
    auto add_inside = [&](double x) {
        if (x > lo && x < hi && std::isfinite(x)) bps.insert(x);
    };
    if (pw) add_inside(pw->anchor);
    if (const Tabulated* t = as_tabulated(piece)) {
        for (double g : t->grid) add_inside(g);
    }
    for (double s : extra_splits) add_inside(s);
    if (std::isinf(lo) && std::isinf(hi) && bps.size() == 2) bps.insert(0.0);

    auto exponent_at = [&](double x) {
        return (pw && x == pw->anchor) ? nu : 0.0;
    };
    const double tail_alpha = pw ? -nu : 0.0;

    std::vector<double> pts(bps.begin(), bps.end());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double x0 = pts[i], x1 = pts[i + 1];
        // capture by value; the piece is copied into the closure
        DensityPiece pc = piece;
        auto f_lambda = [pc, Kt](double lam) -> Complex {
            const double rho = pc.density(lam);
            if (rho == 0.0) return {0.0, 0.0};
            return rho * Kt(lam);
        };
        if (std::isinf(x0)) {
            // x in (-inf, x1]; d = theta + pi/2, x = -cot(d)
            const double d1 = std::atan(x1) + kHalfPi;
            auto h = [f_lambda](double d) { return f_lambda(-1.0 / std::tan(d)); };
            auto segs = quad::charted_segments(0.0, d1, h, tail_alpha, exponent_at(x1));
            out.insert(out.end(), segs.begin(), segs.end());
        } else if (std::isinf(x1)) {
            const double d0 = kHalfPi - std::atan(x0);
            auto h = [f_lambda](double d) { return f_lambda(1.0 / std::tan(d)); };
            auto segs = quad::charted_segments(0.0, d0, h, tail_alpha, exponent_at(x0));
            out.insert(out.end(), segs.begin(), segs.end());
        } else {
            const double th0 = std::atan(x0), th1 = std::atan(x1);
            auto g = [f_lambda](double th) { return f_lambda(std::tan(th)); };
            auto segs = quad::charted_segments(th0, th1, g, exponent_at(x0), exponent_at(x1));
            out.insert(out.end(), segs.begin(), segs.end());
        }
    }
}

Integral integrate_kernel(const RealMeasure& m, const KernelFn& Kt,
                          const std::vector<double>& splits, const QuadOptions& opt,
                          double clip_lo = -kInf, double clip_hi = kInf,
                          bool include_atoms = true) {
    std::vector<quad::Segment> segs;
    for (const DensityPiece& p : m.pieces()) {
        append_piece_segments(segs, p, Kt, splits, clip_lo, clip_hi);
    }
    quad::Options qo;
    qo.abs_tol = 0.5 * opt.abs_tol / m.scale();
    qo.max_cells = opt.max_cells;
    quad::Result r = quad::integrate(segs, qo);

    Complex value = m.scale() * r.value;
    const double err = m.scale() * r.abs_error;
    if (include_atoms) {
        for (const Atom& a : m.atoms()) {
            if (a.pos < clip_lo || a.pos > clip_hi) continue;
            value += m.scale() * a.mass * Kt(a.pos) / (1.0 + a.pos * a.pos);
        }
    }
    return {value, err};
}

KernelFn cauchy_kernel(Complex z) {
    return [z](double lam) -> Complex {
        if (std::abs(lam) > kLargeLambda) {
            return (1.0 / lam + z) / (1.0 - z / lam);
        }
        return (1.0 + lam * z) / (lam - z);
    };
}

KernelFn second_moment_kernel(double s) {
    return [s](double lam) -> Complex {
        if (std::abs(lam) > kLargeLambda) {
            const double q = 1.0 - s / lam;
            return Complex{(1.0 / (lam * lam) + 1.0) / (q * q), 0.0};
        }
        const double d = lam - s;
        return Complex{(1.0 + lam * lam) / (d * d), 0.0};
    };
}

}  // namespace

Integral weighted_total(const RealMeasure& m, const QuadOptions& opt) {
    m.require_weighted_integrable();
    return integrate_kernel(m, [](double) { return Complex{1.0, 0.0}; }, {}, opt);
}

RealMeasure normalize(const RealMeasure& m, const QuadOptions& opt) {
    const Integral wt = weighted_total(m, opt);
    const double total = wt.value.real();
    if (!std::isfinite(total) || !(total > 0.0)) {
        throw NonFiniteWeightedMass("weighted total is not finite and positive");
    }
    return m.with_scale(m.scale() / total);
}

Integral cauchy_integral(const RealMeasure& m, std::complex<double> z,
                         const QuadOptions& opt) {
    if (z.imag() == 0.0) throw Error("cauchy_integral requires Im z != 0");
    m.require_weighted_integrable();
    std::vector<double> splits;
    if (std::abs(z.imag()) < 1.0) splits.push_back(z.real());
    Integral r = integrate_kernel(m, cauchy_kernel(z), splits, opt);
    if (r.abs_error > opt.abs_tol) {
        throw QuadratureFailure("cauchy_integral error estimate above tolerance");
    }
    return r;
}

Integral boundary_integral(const RealMeasure& m, double omega, const QuadOptions& opt) {
    if (!(m.gap_to_support(omega) > 0.0)) {
        throw Error("boundary_integral requires omega separated from the support");
    }
    m.require_weighted_integrable();
    Integral r = integrate_kernel(m, cauchy_kernel(Complex{omega, 0.0}), {}, opt);
    if (r.abs_error > opt.abs_tol) {
        throw QuadratureFailure("boundary_integral error estimate above tolerance");
    }
    return r;
}

double second_moment_at(const RealMeasure& m, double s, const QuadOptions& opt) {
    for (const Atom& a : m.atoms()) {
        if (a.pos == s) return kInf;  // the atom alone makes the integral infinite
    }

    bool tabulated_touches = false;
    for (const DensityPiece& p : m.pieces()) {
        auto [lo, hi] = piece_range(p);
        if (s < lo || s > hi) continue;
        if (as_power(p)) {
            // Local exponent at s is 0 (interior, density > 0) or nu at the
            // anchor; either way the -2 power wins for every exponent < 1
            // in the family, so the integral diverges.
            return kInf;
        }
        // tabulated piece touching s: the window refinement decides
        tabulated_touches = true;
    }

    const KernelFn k2 = second_moment_kernel(s);

    double atom_sum = 0.0;
    for (const Atom& a : m.atoms()) {
        const double d = a.pos - s;
        atom_sum += m.scale() * a.mass / (d * d);
    }

    if (!tabulated_touches) {
        Integral base = integrate_kernel(m, k2, {}, opt, -kInf, kInf, false);
        return base.value.real() + atom_sum;
    }

    // Window refinement around s (tabulated density touching s).
    const double delta0 = 0.5;
    Integral left = integrate_kernel(m, k2, {}, opt, -kInf, s - delta0, false);
    Integral right = integrate_kernel(m, k2, {}, opt, s + delta0, kInf, false);
    double total = left.value.real() + right.value.real() + atom_sum;

    double prev_ring = -1.0;
    int growth_streak = 0;
    double delta = delta0;
    for (int level = 1; level <= 60; ++level) {
        const double next = 0.5 * delta;
        Integral ring_l = integrate_kernel(m, k2, {}, opt, s - delta, s - next, false);
        Integral ring_r = integrate_kernel(m, k2, {}, opt, s + next, s + delta, false);
        const double ring = ring_l.value.real() + ring_r.value.real();
        total += ring;
        delta = next;

        if (prev_ring > 0.0 && ring > 1.8 * prev_ring) {
            if (++growth_streak >= 3) return kInf;
        } else {
            growth_streak = 0;
        }
        if (ring < std::max(opt.abs_tol, 1e-11 * (1.0 + std::abs(total)))) {
            double rho = (prev_ring > 0.0) ? std::min(ring / prev_ring, 0.9) : 0.5;
            return total + ring * rho / (1.0 - rho);
        }
        prev_ring = ring;
    }
    throw Indeterminate("window refinement neither converged nor certified divergence");
}

PointClass classify_point(const RealMeasure& m, double s, const QuadOptions& opt) {
    for (const Atom& a : m.atoms()) {
        if (a.pos == s) return {false, true};
    }
    const double moment = second_moment_at(m, s, opt);
    return {std::isinf(moment), false};
}

namespace {

double invert_point(double x) {
    if (x == 0.0) return kInf;
    if (std::isinf(x)) return 0.0;
    return -1.0 / x;
}

DensityPiece invert_piece(const DensityPiece& piece) {
    // Caller guarantees the open support does not straddle 0. The map -1/x is
    // increasing on each half-line; a positive-side piece lands in (-inf, 0)
    // and a negative-side one in (0, inf).
    DensityPiece out;
    out.lo = piece.lo == 0.0 ? -kInf : invert_point(piece.lo);
    out.hi = piece.hi == 0.0 ? kInf : invert_point(piece.hi);
    if (!(out.lo < out.hi)) throw Error("inverted piece support collapsed");

    if (const PowerLaw* pw = as_power(piece)) {
        const bool right_of_zero = piece.lo >= 0.0;
        const Side image_side = right_of_zero ? Side::Left : Side::Right;
        if (pw->anchor == 0.0) {
            out.form = PowerLaw{pw->coefficient, -pw->exponent - 2.0, 0.0, image_side};
        } else if (pw->exponent == 0.0) {
            out.form = PowerLaw{pw->coefficient, -2.0, 0.0, image_side};
        } else {
            throw Error("inversion pushforward of a power piece needs anchor 0");
        }
        return out;
    }
    const Tabulated& t = std::get<Tabulated>(piece.form);
    Tabulated img;
    img.grid.reserve(t.grid.size());
    img.values.reserve(t.grid.size());
    for (std::size_t j = 0; j < t.grid.size(); ++j) {
        const double g = t.grid[j];
        if (g == 0.0) throw Error("inversion pushforward of a tabulated grid containing 0");
        img.grid.push_back(-1.0 / g);
        img.values.push_back(t.values[j] * g * g);
    }
    out.form = std::move(img);
    // -1/x is increasing away from 0, so the grid order is preserved.
    return out;
}

}  // namespace

RealMeasure pushforward(const RealMeasure& m, const MobiusMap& f) {
    if (f.is_affine()) {
        const double slope = f.a() / f.d();
        const double offset = f.b() / f.d();
        std::vector<Atom> atoms;
        atoms.reserve(m.atoms().size());
        for (const Atom& a : m.atoms()) {
            atoms.push_back({slope * a.pos + offset, a.mass});
        }
        std::vector<DensityPiece> pieces;
        pieces.reserve(m.pieces().size());
        for (const DensityPiece& p : m.pieces()) {
            DensityPiece q;
            q.lo = std::isinf(p.lo) ? p.lo : slope * p.lo + offset;
            q.hi = std::isinf(p.hi) ? p.hi : slope * p.hi + offset;
            if (const PowerLaw* pw = as_power(p)) {
                q.form = PowerLaw{pw->coefficient * std::pow(slope, -(pw->exponent + 1.0)),
                                  pw->exponent, slope * pw->anchor + offset, pw->side};
            } else {
                const Tabulated& t = std::get<Tabulated>(p.form);
                Tabulated img;
                img.grid.reserve(t.grid.size());
                img.values.reserve(t.values.size());
                for (double g : t.grid) img.grid.push_back(slope * g + offset);
                for (double v : t.values) img.values.push_back(v / slope);
                q.form = std::move(img);
            }
            pieces.push_back(std::move(q));
        }
        return {std::move(atoms), std::move(pieces), m.scale()};
    }

    if (!f.is_inversion()) {
        throw Error("pushforward supports affine maps and the inversion only");
    }

    std::vector<Atom> atoms;
    atoms.reserve(m.atoms().size());
    for (const Atom& a : m.atoms()) {
        if (a.pos == 0.0) throw AtomAtPole("atom at 0 under inversion");
        atoms.push_back({-1.0 / a.pos, a.mass});
    }
    std::vector<DensityPiece> pieces;
    for (const DensityPiece& p : m.pieces()) {
        if (p.lo < 0.0 && p.hi > 0.0) {
            DensityPiece neg = p, pos = p;
            neg.hi = 0.0;
            pos.lo = 0.0;
            pieces.push_back(invert_piece(neg));
            pieces.push_back(invert_piece(pos));
        } else {
            pieces.push_back(invert_piece(p));
        }
    }
    return {std::move(atoms), std::move(pieces), m.scale()};
}

double piece_poly_moment(const DensityPiece& p, double a, double b, int k) {
    if (k < 0 || k > 3) throw Error("piece_poly_moment supports k in {0,1,2,3}");
    auto [lo, hi] = piece_range(p);
    a = std::max(a, lo);
    b = std::min(b, hi);
    if (!(a < b)) return 0.0;
    if (const PowerLaw* pw = as_power(p)) {
        if (pw->exponent <= -1.0 && pw->anchor >= a && pw->anchor <= b) return kInf;
        // x^k |x-alpha|^nu expanded binomially in u = x - alpha;
        // the antiderivative of u^j |u|^nu is sign(u)^{j+1} |u|^{nu+j+1}/(nu+j+1).
        auto anti_j = [&](double u, int j) {
            if (u == 0.0) return 0.0;
            const double q = pw->exponent + j + 1.0;
            const double mag = std::pow(std::abs(u), q) / q;
            return (j % 2 == 0) ? std::copysign(mag, u) : mag;
        };
        static const double binom[4][4] = {
            {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
        const double ua = a - pw->anchor, ub = b - pw->anchor;
        double sum = 0.0;
        for (int j = 0; j <= k; ++j) {
            sum += binom[k][j] * std::pow(pw->anchor, k - j) *
                   (anti_j(ub, j) - anti_j(ua, j));
        }
        return pw->coefficient * sum;
    }
    const Tabulated& t = std::get<Tabulated>(p.form);
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < t.grid.size(); ++j) {
        const double x0 = std::max(t.grid[j], a), x1 = std::min(t.grid[j + 1], b);
        if (!(x0 < x1)) continue;
        // rho = A + B x on the grid cell
        const double g0 = t.grid[j], g1 = t.grid[j + 1];
        const double B = (t.values[j + 1] - t.values[j]) / (g1 - g0);
        const double A = t.values[j] - B * g0;
        auto anti = [&](double x) {
            return A * std::pow(x, k + 1) / (k + 1) + B * std::pow(x, k + 2) / (k + 2);
        };
        sum += anti(x1) - anti(x0);
    }
    return sum;
}

double piece_mass(const DensityPiece& p, double a, double b) {
    return piece_poly_moment(p, a, b, 0);
}

}  // namespace livsic
