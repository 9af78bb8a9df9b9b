#pragma once

#include <complex>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "livsic/charfn.hpp"
#include "livsic/herglotz.hpp"
#include "livsic/measure.hpp"
#include "livsic/mobius.hpp"

namespace livsic {

/// Normalized measure plus von Neumann parameter: the functional model of a
/// triple (symmetric operator, dissipative extension, reference extension).
class ModelTriple {
public:
    /// The measure must already be normalized (weighted total 1 within 1e-9);
    /// the constructor verifies this. Finite-mass measures are accepted for
    /// oracle work even though the model role expects infinite mass; check
    /// measure().infinite_mass() when it matters.
    ModelTriple(RealMeasure normalized_measure, VonNeumannParameter kappa,
                QuadOptions opt = {});

    const RealMeasure& measure() const { return measure_; }
    std::complex<double> kappa() const { return kappa_; }
    const QuadOptions& quad() const { return quad_; }

    WeylEvaluator evaluator() const { return WeylEvaluator::from_measure(measure_, quad_); }
    CharEvaluator char_evaluator() const { return {evaluator(), kappa_}; }

private:
    RealMeasure measure_;
    std::complex<double> kappa_;
    QuadOptions quad_;
};

/// Regular image triple: evaluator-level realization of f applied to a
/// triple, with the transformed von Neumann parameter and the chain of
/// elementary maps that produced it.
struct TransformedTriple {
    WeylEvaluator weyl;
    std::complex<double> kappa;
    std::vector<MobiusMap> provenance;

    CharEvaluator char_evaluator() const { return {weyl, kappa}; }
};

/// Outcome token for the bounded branch: omega = f^{-1}(inf) is quasi-regular
/// and f maps the dissipative extension to a bounded operator. Carries the
/// unimodular boundary phase S(omega + i0) used by the invariance check.
struct BoundedCase {
    double omega;
    std::complex<double> boundary_phase;
    bool atom_at_omega;
};

using TransformOutcome = std::variant<TransformedTriple, BoundedCase>;

/// Transformed parameter under an affine map f: with w = f^{-1}(i),
/// W = M(w) and tau = i(1+kappa)/(1-kappa),
///   kappa' = (W - tau) / (conj(W) - tau),
/// which lies in the open disc because W and tau are both in the upper
/// half-plane. Reduces to kappa when M(w) = i.
std::complex<double> kappa_affine(const ModelTriple& t, const MobiusMap& f);

/// Applies f to the triple. The branch is decided by classifying
/// omega = f^{-1}(inf) against the measure: core spectrum (or affine f)
/// gives a regular TransformedTriple built through the factorization
/// f = h o iota o g; a quasi-regular omega gives BoundedCase.
TransformOutcome transform_triple(const ModelTriple& t, const MobiusMap& f);

/// Chains another map onto an already-transformed regular triple. The caller
/// is responsible for the chain staying in the regular branch.
TransformedTriple transform_regular(const TransformedTriple& t, const MobiusMap& f);

struct VerifyOptions {
    int oracle_n = 4000;
    double quantile_cut = 1e-7;
    QuadOptions quad{};
};

struct InvarianceRow {
    std::complex<double> z;
    std::complex<double> fz;
    std::complex<double> lhs;
    std::complex<double> rhs;
};

struct InvarianceReport {
    int branch;  // 1 or 2
    std::optional<double> omega;
    double residual;
    std::vector<InvarianceRow> rows;
};

/// Branch 1: residual of S_hat_{f(t)}(f(z)) - S_hat_t(z) over the grid,
/// both sides built from their own evaluator/parameter pairs.
/// Branch 2: residual of S_bounded(f(z)) - S_t(z)/S_t(omega + i0), with
/// S_bounded computed by the trace-formula route on a quantile
/// discretization of the triple.
InvarianceReport verify_invariance(const ModelTriple& t, const MobiusMap& f,
                                   std::span<const std::complex<double>> grid,
                                   const VerifyOptions& opt = {});

/// Scalar coefficient of the rank-one term in the model resolvent,
/// p(z) = (M(z) - i(1+kappa)/(1-kappa))^{-1}, M continued by reflection.
/// Throws ResonancePoint when the denominator is below 1e-12.
std::complex<double> resolvent_p(const ModelTriple& t, std::complex<double> z);

/// Rank-one inverse data at 0: p = (M(0+i0) - tau)^{-1} and the kernel
/// descriptor of Q, (Qf)(x) = (1/x) * integral of f(s)/s dmu(s).
struct RankOneInverse {
    std::complex<double> p;
    BoundaryValue m_at_zero;
};
RankOneInverse inverse_rank_one(const ModelTriple& t);

}  // namespace livsic
