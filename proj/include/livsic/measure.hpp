#pragma once

#include <complex>
#include <optional>
#include <variant>
#include <vector>

#include "livsic/mobius.hpp"

namespace livsic {

/// Side of the anchor the support lies on (meaningful when the anchor is a
/// support endpoint).
enum class Side { Left, Right };

/// Density c * |x - anchor|^exponent on the piece support. Model measures
/// keep the exponent in (-1, 1); inversion images may carry exponents below
/// -1, in which case the weighted-mass validation rejects the measure for
/// model use while the representation itself stays legal.
struct PowerLaw {
    double coefficient;
    double exponent;
    double anchor;
    Side side;
};

/// Piecewise-linear density sampled on a sorted grid; zero outside the grid
/// range. Values must be nonnegative and the grid must lie inside the
/// support interval.
struct Tabulated {
    std::vector<double> grid;
    std::vector<double> values;
};

struct DensityPiece {
    double lo;
    double hi;
    std::variant<PowerLaw, Tabulated> form;

    /// Density at x, without the measure's global scale.
    double density(double x) const;
    bool unbounded() const;
};

struct Atom {
    double pos;
    double mass;
};

struct PointClass {
    bool core;      // point of the core of the spectrum
    bool has_atom;  // only meaningful for quasi-regular points
};

/// Borel measure on R in a closed parametric family: finitely many atoms
/// plus density pieces, all multiplied by a positive global scale.
class RealMeasure {
public:
    RealMeasure(std::vector<Atom> atoms, std::vector<DensityPiece> pieces,
                double scale = 1.0);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<DensityPiece>& pieces() const { return pieces_; }
    double scale() const { return scale_; }

    /// True when the total mass is infinite (unbounded density tails or a
    /// non-integrable anchor), which is what the model role requires.
    bool infinite_mass() const { return infinite_mass_; }

    /// Throws NonFiniteWeightedMass unless every piece has finite
    /// (1+x^2)^-1-weighted mass.
    void require_weighted_integrable() const;

    RealMeasure with_scale(double s) const { return {atoms_, pieces_, s}; }

    /// Distance from s to the nearest atom or piece-support closure;
    /// 0 when s touches the support.
    double gap_to_support(double s) const;

private:
    std::vector<Atom> atoms_;
    std::vector<DensityPiece> pieces_;
    double scale_;
    bool infinite_mass_;
};

struct Integral {
    std::complex<double> value;
    double abs_error;
};

struct QuadOptions {
    double abs_tol = 1e-10;
    int max_cells = 60000;
};

/// Integral of dm(x) / (1+x^2) with error estimate.
Integral weighted_total(const RealMeasure& m, const QuadOptions& opt = {});

/// Rescales so that weighted_total = 1. Shape is unchanged, only the global
/// scale moves. Throws NonFiniteWeightedMass on non-integrable input.
RealMeasure normalize(const RealMeasure& m, const QuadOptions& opt = {});

/// Regularized Cauchy transform: integral of
///   1/(x - z) - x/(1+x^2)
/// against the measure, for Im z != 0. Throws QuadratureFailure when the
/// error estimate cannot be brought below opt.abs_tol.
Integral cauchy_integral(const RealMeasure& m, std::complex<double> z,
                         const QuadOptions& opt = {});

/// Integral of dm(x) / (x-s)^2, +inf when divergent. Divergence is decided
/// analytically for power pieces and by window refinement for tabulated
/// pieces (Indeterminate when refinement cannot decide).
double second_moment_at(const RealMeasure& m, double s, const QuadOptions& opt = {});

/// Core-of-spectrum test: core iff the second moment diverges and there is
/// no atom at s.
PointClass classify_point(const RealMeasure& m, double s, const QuadOptions& opt = {});

/// Image measure under an affine map or the inversion z -> -1/z, densities
/// carried by the change-of-variables Jacobian. Not renormalized.
RealMeasure pushforward(const RealMeasure& m, const MobiusMap& f);

/// Boundary-kernel integral of 1/(x-omega) - x/(1+x^2) for a real omega
/// separated from the support; used by direct boundary evaluation.
Integral boundary_integral(const RealMeasure& m, double omega, const QuadOptions& opt = {});

/// Exact (antiderivative) moment of one unscaled piece over [a,b]:
/// integral of x^k rho(x) dx, k in {0,1,2,3}.
double piece_poly_moment(const DensityPiece& p, double a, double b, int k);

/// Exact mass of one unscaled piece over [a,b]; piece_poly_moment with k=0.
double piece_mass(const DensityPiece& p, double a, double b);

}  // namespace livsic
