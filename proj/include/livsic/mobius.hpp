#pragma once

#include <complex>
#include <optional>

namespace livsic {

/// Orientation-preserving linear-fractional map of the upper half-plane,
/// z -> (az+b)/(cz+d) with real entries and ad-bc > 0. Entries are stored
/// det-normalized (ad-bc = 1) with the sign fixed so that a >= 0, and b >= 0
/// when a = 0, which makes equality of maps testable entrywise.
class MobiusMap {
public:
    MobiusMap(double a, double b, double c, double d);

    static MobiusMap identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static MobiusMap inversion() { return {0.0, 1.0, -1.0, 0.0}; }  // z -> -1/z
    static MobiusMap translation(double t) { return {1.0, t, 0.0, 1.0}; }
    static MobiusMap affine(double slope, double offset) {
        return {slope, offset, 0.0, 1.0};
    }

    double a() const { return a_; }
    double b() const { return b_; }
    double c() const { return c_; }
    double d() const { return d_; }

    /// (az+b)/(cz+d); the pole maps to complex infinity, encoded as
    /// (inf, inf). Points of the open upper half-plane never hit the pole.
    std::complex<double> operator()(std::complex<double> z) const;

    /// Action on the boundary; returns +-inf at the pole.
    double apply_real(double x) const;

    MobiusMap inverse() const { return {d_, -b_, -c_, a_}; }

    bool is_affine() const { return c_ == 0.0; }
    bool is_identity(double tol = 1e-14) const;
    bool is_inversion(double tol = 1e-14) const;

    /// f^{-1}(inf) = -d/c; empty for affine maps (the preimage is inf).
    std::optional<double> preimage_infinity() const;

    double max_entry_distance(const MobiusMap& other) const;

private:
    double a_, b_, c_, d_;
};

inline bool is_mobius_infinity(std::complex<double> v) {
    return std::isinf(v.real()) || std::isinf(v.imag());
}

/// Matrix product, (f o g)(z) = f(g(z)).
MobiusMap compose(const MobiusMap& f, const MobiusMap& g);

/// f = h o iota o g with g a translation and h affine; for affine f the
/// factorization degenerates to g = id, h = f, no inversion.
struct Decomposition {
    MobiusMap g;
    bool uses_inversion;
    MobiusMap h;
};

Decomposition decompose(const MobiusMap& f);

}  // namespace livsic
