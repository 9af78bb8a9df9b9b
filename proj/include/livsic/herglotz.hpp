#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "livsic/measure.hpp"
#include "livsic/mobius.hpp"

namespace livsic {

struct BoundaryValue {
    std::complex<double> value;
    double error_estimate;
    enum class Method { DirectQuadrature, EpsilonExtrapolation } method;
    int levels = 0;  // extrapolation levels actually used
};

/// Evaluator for a Herglotz function M normalized by M(i) = i. Backings:
///
///  * measure-backed: the regularized Cauchy transform of a normalized
///    measure;
///  * composed: pullback of an inner evaluator under a half-plane
///    automorphism f, M'(z) = (M(f^{-1}(z)) - Re W) / Im W anchored at
///    W = M(f^{-1}(i)). For the inversion W = i and this is the plain
///    pullback M(-1/z);
///  * custom: closed forms and synthetic test evaluators.
///
/// Values in the lower half-plane come from Schwarz reflection. Evaluators
/// are immutable; anchor constants are computed at construction, so shared
/// use across threads is safe.
class WeylEvaluator {
public:
    /// M(z) for Im z > 0.
    std::complex<double> operator()(std::complex<double> z) const;

    /// Schwarz reflection, conj(M(conj z)), for Im z < 0.
    std::complex<double> reflected(std::complex<double> z) const;

    /// Either half-plane; throws on the real axis (use boundary()).
    std::complex<double> at(std::complex<double> z) const;

    /// Boundary value M(omega + i0). Measure-backed evaluators integrate
    /// directly when omega sits in an open gap of the support and fall back
    /// to a Richardson-accelerated epsilon ladder otherwise; composed ones
    /// recurse; custom ones use their own boundary rule or the ladder.
    BoundaryValue boundary(double omega) const;

    /// Backing measure if measure-backed, else nullptr.
    const RealMeasure* measure() const;

    const std::string& label() const;

    static WeylEvaluator from_measure(RealMeasure normalized, QuadOptions opt = {});

    /// Anchor-recalibrated pullback under f (see class comment). Passing a
    /// precomputed anchor skips the internal evaluation of M(f^{-1}(i)).
    static WeylEvaluator composed(WeylEvaluator inner, MobiusMap map,
                                  std::optional<std::complex<double>> anchor = {});

    static WeylEvaluator custom(
        std::function<std::complex<double>(std::complex<double>)> upper,
        std::function<std::optional<std::complex<double>>(double)> boundary_rule,
        std::string label);

    struct Backing;

private:
    explicit WeylEvaluator(std::shared_ptr<const Backing> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Backing> impl_;
};

inline std::complex<double> weyl_m(const WeylEvaluator& e, std::complex<double> z) {
    return e(z);
}
inline std::complex<double> weyl_m_reflected(const WeylEvaluator& e, std::complex<double> z) {
    return e.reflected(z);
}
inline BoundaryValue boundary_value(const WeylEvaluator& e, double omega) {
    return e.boundary(omega);
}

struct ThresholdSignature {
    bool friedrichs;  // M -> -inf along the ladder lambda = -10^k
    bool krein;       // M -> +inf approaching the spectral bottom from below
};

/// Classifies the reference extension by sampled threshold behavior of M on
/// the real axis below the spectrum. Requires support contained in
/// [spectral_bottom, inf). Throws InconclusiveThreshold on non-monotone
/// sample sequences.
ThresholdSignature threshold_classify(const WeylEvaluator& e, double spectral_bottom);

}  // namespace livsic
