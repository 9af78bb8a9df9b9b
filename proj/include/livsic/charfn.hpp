#pragma once

#include <complex>
#include <vector>

#include "livsic/herglotz.hpp"

namespace livsic {

/// Contraction coefficient linking the normalized deficiency elements,
/// |kappa| < 1 strictly.
struct VonNeumannParameter {
    explicit VonNeumannParameter(std::complex<double> k);
    std::complex<double> kappa;
};

/// Weyl evaluator plus a von Neumann parameter; enough data to evaluate the
/// characteristic function of the underlying triple.
struct CharEvaluator {
    WeylEvaluator weyl;
    std::complex<double> kappa;
};

/// Cayley transform s = (M - i)/(M + i); contractive, s(i) = 0.
std::complex<double> livsic_s(const WeylEvaluator& e, std::complex<double> z);

/// Inverse of the Cayley transform, M = (1/i)(s+1)/(s-1).
std::complex<double> weyl_from_s(std::complex<double> s);

/// Disc involution x -> (x - kappa)/(conj(kappa) x - 1); its own inverse.
std::complex<double> disc_shift(std::complex<double> x, std::complex<double> kappa);

/// Characteristic function S = disc_shift(s, kappa); S(i) = kappa.
std::complex<double> char_s(const CharEvaluator& c, std::complex<double> z);

/// Normalized characteristic function
///   S_hat = (1 - conj(S(i)))/(1 - S(i)) * S,
/// with S(i) = kappa taken from the stored parameter (the identity is exact,
/// re-deriving it from quadrature would only add noise).
std::complex<double> normalized_char(const CharEvaluator& c, std::complex<double> z);

std::complex<double> normalizing_factor(std::complex<double> kappa);

/// tau = i (1+kappa)/(1-kappa); maps the open disc onto the upper half-plane.
std::complex<double> cayley_parameter(std::complex<double> kappa);

struct LivsicProbeRow {
    double arg;      // ray angle
    double alpha;    // phase grid point
    std::vector<double> magnitudes;  // |z (s(z) - e^{2 i alpha})| along |z| = 10^k
    bool monotone_growth;
};

struct LivsicProbe {
    bool s_at_i_zero;
    double s_at_i_abs;
    std::vector<LivsicProbeRow> rows;
    bool all_growth() const;
};

/// Sampled evidence for the growth condition z (s(z) - e^{2 i alpha}) -> inf
/// in sectors: rays arg z in {eps, pi/2, pi - eps}, radii 10^k (k = 1..5),
/// alpha on a 12-point grid. Heuristic by construction; the report carries
/// the raw magnitudes.
LivsicProbe livsic_criterion_probe(const WeylEvaluator& e, double sector_eps = 0.2);

}  // namespace livsic
