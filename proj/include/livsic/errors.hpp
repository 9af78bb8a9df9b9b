#pragma once

#include <stdexcept>
#include <string>

namespace livsic {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A density piece (or the whole measure) fails the (1+x^2)^-1 integrability test.
struct NonFiniteWeightedMass : Error { using Error::Error; };

/// Adaptive refinement exhausted its budget above the requested tolerance.
struct QuadratureFailure : Error { using Error::Error; };

/// Numeric refinement can neither converge nor certify divergence.
struct Indeterminate : Error { using Error::Error; };

/// Inversion pushforward hit an atom sitting at the pole.
struct AtomAtPole : Error { using Error::Error; };

/// M(z) = -i encountered; impossible for true Herglotz values.
struct PoleAtEvaluation : Error { using Error::Error; };

/// Cayley-type map evaluated at its pole (s = 1).
struct DegenerateValue : Error { using Error::Error; };

/// The epsilon ladder failed to settle; usually a misclassified point.
struct ExtrapolationDivergence : Error { using Error::Error; };

/// Threshold sample sequence is non-monotone.
struct InconclusiveThreshold : Error { using Error::Error; };

/// Resolvent coefficient denominator below threshold.
struct ResonancePoint : Error { using Error::Error; };

struct PointNotQuasiRegular : Error { using Error::Error; };

struct SingularResolvent : Error { using Error::Error; };

/// Bounded characteristic function evaluated at (numerically) an eigenvalue.
struct EigenvalueHit : Error { using Error::Error; };

struct NodeAtZero : Error { using Error::Error; };

/// Internal consistency failure in the h∘ι∘g factorization.
struct DecompositionFailure : Error { using Error::Error; };

}  // namespace livsic
