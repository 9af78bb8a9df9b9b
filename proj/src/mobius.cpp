#include "livsic/mobius.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "livsic/errors.hpp"

namespace livsic {

MobiusMap::MobiusMap(double a, double b, double c, double d)
    : a_(a), b_(b), c_(c), d_(d) {
    const double det = a_ * d_ - b_ * c_;
    if (!(det > 0.0) || !std::isfinite(det)) {
        throw Error("MobiusMap requires ad - bc > 0");
    }
    const double r = std::sqrt(det);
    a_ /= r;
    b_ /= r;
    c_ /= r;
    d_ /= r;
    if (a_ < 0.0 || (a_ == 0.0 && b_ < 0.0)) {
        a_ = -a_;
        b_ = -b_;
        c_ = -c_;
        d_ = -d_;
    }
}

std::complex<double> MobiusMap::operator()(std::complex<double> z) const {
    const std::complex<double> den = c_ * z + d_;
    if (den == std::complex<double>{0.0, 0.0}) {
        const double inf = std::numeric_limits<double>::infinity();
        return {inf, inf};
    }
    return (a_ * z + b_) / den;
}

double MobiusMap::apply_real(double x) const {
    const double den = c_ * x + d_;
    if (den == 0.0) {
        const double num = a_ * x + b_;
        return num >= 0.0 ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
    }
    return (a_ * x + b_) / den;
}

bool MobiusMap::is_identity(double tol) const {
    return max_entry_distance(identity()) <= tol;
}

bool MobiusMap::is_inversion(double tol) const {
    return max_entry_distance(inversion()) <= tol;
}

std::optional<double> MobiusMap::preimage_infinity() const {
    if (c_ == 0.0) return std::nullopt;
    return -d_ / c_ + 0.0;  // flush -0.0
}

double MobiusMap::max_entry_distance(const MobiusMap& other) const {
    double m = std::abs(a_ - other.a_);
    m = std::max(m, std::abs(b_ - other.b_));
    m = std::max(m, std::abs(c_ - other.c_));
    m = std::max(m, std::abs(d_ - other.d_));
    return m;
}

MobiusMap compose(const MobiusMap& f, const MobiusMap& g) {
    return {f.a() * g.a() + f.b() * g.c(), f.a() * g.b() + f.b() * g.d(),
            f.c() * g.a() + f.d() * g.c(), f.c() * g.b() + f.d() * g.d()};
}

Decomposition decompose(const MobiusMap& f) {
    if (f.is_affine()) {
        return {MobiusMap::identity(), false, f};
    }
    const double omega = *f.preimage_infinity();
    const MobiusMap g = MobiusMap::translation(-omega);
    const MobiusMap h = compose(compose(f, g.inverse()), MobiusMap::inversion().inverse());
    if (std::abs(h.c()) > 1e-12) {
        throw DecompositionFailure("residual map is not affine");
    }
    // Flatten roundoff in the lower-left entry so h is exactly affine.
    const MobiusMap h_affine(h.a(), h.b(), 0.0, h.d());
    return {g, true, h_affine};
}

}  // namespace livsic
