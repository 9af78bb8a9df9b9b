#include "livsic/transform.hpp"

#include <cmath>
#include <utility>

#include "livsic/errors.hpp"
#include "livsic/oracle.hpp"

namespace livsic {

using Complex = std::complex<double>;

namespace {

constexpr Complex kI{0.0, 1.0};

Complex shifted_kappa(Complex anchor, Complex kappa) {
    const Complex tau = cayley_parameter(kappa);
    return (anchor - tau) / (std::conj(anchor) - tau);
}

// One elementary map applied to an evaluator/parameter pair. Identity stages
// are skipped so that e.g. f = iota keeps kappa bit-exact. Under the
// inversion the parameter is unchanged and the pullback needs no anchoring;
// affine stages recalibrate at W = M(f^{-1}(i)) and shift the parameter.
std::pair<WeylEvaluator, Complex> apply_stage(WeylEvaluator e, Complex kappa,
                                              const MobiusMap& f,
                                              std::vector<MobiusMap>* provenance) {
    if (f.is_identity(1e-13)) return {std::move(e), kappa};
    if (provenance) provenance->push_back(f);
    if (f.is_inversion(1e-13)) {
        return {WeylEvaluator::composed(std::move(e), f), kappa};
    }
    const Complex w = f.inverse()(kI);
    const Complex anchor = e.at(w);
    WeylEvaluator out = WeylEvaluator::composed(std::move(e), f, anchor);
    return {std::move(out), shifted_kappa(anchor, kappa)};
}

std::pair<WeylEvaluator, Complex> apply_chain(WeylEvaluator e, Complex kappa,
                                              const MobiusMap& f,
                                              std::vector<MobiusMap>* provenance) {
    if (f.is_affine()) {
        return apply_stage(std::move(e), kappa, f, provenance);
    }
    const Decomposition dec = decompose(f);
    auto [e1, k1] = apply_stage(std::move(e), kappa, dec.g, provenance);
    auto [e2, k2] = apply_stage(std::move(e1), k1, MobiusMap::inversion(), provenance);
    return apply_stage(std::move(e2), k2, dec.h, provenance);
}

}  // namespace

ModelTriple::ModelTriple(RealMeasure normalized_measure, VonNeumannParameter kappa,
                         QuadOptions opt)
    : measure_(std::move(normalized_measure)), kappa_(kappa.kappa), quad_(opt) {
    const Integral wt = weighted_total(measure_, quad_);
    if (std::abs(wt.value.real() - 1.0) > 1e-9 + wt.abs_error) {
        throw Error("model triple requires a normalized measure (weighted total 1)");
    }
}

Complex kappa_affine(const ModelTriple& t, const MobiusMap& f) {
    if (!f.is_affine()) throw Error("kappa_affine requires an affine map");
    if (f.is_identity(0.0)) return t.kappa();
    const Complex w = f.inverse()(kI);
    const Complex anchor = cauchy_integral(t.measure(), w, t.quad()).value;
    return shifted_kappa(anchor, t.kappa());
}

TransformOutcome transform_triple(const ModelTriple& t, const MobiusMap& f) {
    const std::optional<double> omega = f.preimage_infinity();
    if (omega) {
        const PointClass pc = classify_point(t.measure(), *omega, t.quad());
        if (!pc.core) {
            Complex s_boundary;
            if (pc.has_atom) {
                // M blows up at an atom, so the Cayley transform tends to 1.
                s_boundary = Complex{1.0, 0.0};
            } else {
                const BoundaryValue bv = t.evaluator().boundary(*omega);
                s_boundary = (bv.value - kI) / (bv.value + kI);
            }
            return BoundedCase{*omega, disc_shift(s_boundary, t.kappa()), pc.has_atom};
        }
    }
    TransformedTriple out{t.evaluator(), t.kappa(), {}};
    auto [e, k] = apply_chain(std::move(out.weyl), out.kappa, f, &out.provenance);
    out.weyl = std::move(e);
    out.kappa = k;
    return out;
}

TransformedTriple transform_regular(const TransformedTriple& t, const MobiusMap& f) {
    TransformedTriple out{t.weyl, t.kappa, t.provenance};
    auto [e, k] = apply_chain(std::move(out.weyl), out.kappa, f, &out.provenance);
    out.weyl = std::move(e);
    out.kappa = k;
    return out;
}

InvarianceReport verify_invariance(const ModelTriple& t, const MobiusMap& f,
                                   std::span<const Complex> grid,
                                   const VerifyOptions& opt) {
    if (grid.empty()) throw Error("verify_invariance needs a nonempty grid");
    InvarianceReport rep;
    rep.omega = f.preimage_infinity();
    rep.residual = 0.0;

    TransformOutcome outcome = transform_triple(t, f);
    if (const TransformedTriple* tt = std::get_if<TransformedTriple>(&outcome)) {
        rep.branch = 1;
        const CharEvaluator lhs_eval = tt->char_evaluator();
        const CharEvaluator rhs_eval = t.char_evaluator();
        for (Complex z : grid) {
            InvarianceRow row;
            row.z = z;
            row.fz = f(z);
            row.lhs = normalized_char(lhs_eval, row.fz);
            row.rhs = normalized_char(rhs_eval, z);
            rep.residual = std::max(rep.residual, std::abs(row.lhs - row.rhs));
            rep.rows.push_back(row);
        }
        return rep;
    }

    const BoundedCase& bc = std::get<BoundedCase>(outcome);
    rep.branch = 2;
    const DiscreteModel d = discretize(t, opt.oracle_n, opt.quantile_cut);
    const DissipativeMatrix T = build_dissipative(d);
    const DissipativeMatrix Tf = mobius_of(T, f);
    const CharEvaluator rhs_eval = t.char_evaluator();
    for (Complex z : grid) {
        InvarianceRow row;
        row.z = z;
        row.fz = f(z);
        row.lhs = char_bounded_trace(Tf, row.fz);
        row.rhs = char_s(rhs_eval, z) / bc.boundary_phase;
        rep.residual = std::max(rep.residual, std::abs(row.lhs - row.rhs));
        rep.rows.push_back(row);
    }
    return rep;
}

Complex resolvent_p(const ModelTriple& t, Complex z) {
    if (z.imag() == 0.0) throw Error("resolvent_p requires Im z != 0");
    const Complex m = t.evaluator().at(z);
    const Complex den = m - cayley_parameter(t.kappa());
    if (std::abs(den) < 1e-12) {
        throw ResonancePoint("resolvent coefficient denominator vanishes");
    }
    return 1.0 / den;
}

RankOneInverse inverse_rank_one(const ModelTriple& t) {
    const PointClass pc = classify_point(t.measure(), 0.0, t.quad());
    if (pc.core || pc.has_atom) {
        throw PointNotQuasiRegular("0 must be quasi-regular without an atom");
    }
    const BoundaryValue bv = t.evaluator().boundary(0.0);
    const Complex den = bv.value - cayley_parameter(t.kappa());
    if (std::abs(den) < 1e-12) {
        throw ResonancePoint("rank-one inverse coefficient denominator vanishes");
    }
    return {1.0 / den, bv};
}

}  // namespace livsic
