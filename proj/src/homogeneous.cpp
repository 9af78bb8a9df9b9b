#include "livsic/homogeneous.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "livsic/errors.hpp"

namespace livsic {

using Complex = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

void require_open_range(double nu) {
    if (!(nu > -1.0 && nu < 1.0)) throw Error("homogeneous exponent must lie in (-1, 1)");
}

// Principal-branch (z/i)^nu; real z is read as z + i0.
Complex z_over_i_pow(Complex z, double nu) {
    if (z.imag() == 0.0) z = Complex{z.real(), 0.0};  // normalize -0.0
    return std::exp(nu * (std::log(z) - Complex{0.0, kPi / 2.0}));
}

}  // namespace

Complex closed_form_M(const HomogeneousModel& h, Complex z) {
    require_open_range(h.nu);
    if (z.imag() == 0.0) z = Complex{z.real(), 0.0};
    if (h.nu == 0.0) {
        if (h.side == SupportSide::Positive) {
            return (2.0 / kPi) * std::log(-1.0 / z);
        }
        return (2.0 / kPi) * std::log(z);
    }
    const double cot = 1.0 / std::tan(kPi * h.nu / 2.0);
    const Complex zi = z_over_i_pow(z, h.nu);
    if (h.side == SupportSide::Positive) {
        return (Complex{0.0, 1.0} - cot) * zi + cot;
    }
    return (Complex{0.0, 1.0} + cot) * zi - cot;
}

WeylEvaluator homogeneous_evaluator(const HomogeneousModel& h) {
    require_open_range(h.nu);
    const HomogeneousModel model = h;
    return WeylEvaluator::custom(
        [model](Complex z) { return closed_form_M(model, z); },
        [model](double omega) -> std::optional<Complex> {
            return closed_form_M(model, Complex{omega, 0.0});
        },
        (h.side == SupportSide::Positive ? "homogeneous+" : "homogeneous-") +
            std::string(" nu=") + std::to_string(h.nu));
}

RealMeasure homogeneous_measure(const HomogeneousModel& h) {
    require_open_range(h.nu);
    const double inf = std::numeric_limits<double>::infinity();
    DensityPiece piece;
    if (h.side == SupportSide::Positive) {
        piece = DensityPiece{0.0, inf, PowerLaw{1.0, h.nu, 0.0, Side::Right}};
    } else {
        piece = DensityPiece{-inf, 0.0, PowerLaw{1.0, h.nu, 0.0, Side::Left}};
    }
    return RealMeasure({}, {piece});
}

double homogeneous_norm_constant(double nu) {
    require_open_range(nu);
    return kPi / (2.0 * std::cos(kPi * nu / 2.0));
}

double cayley_relation_check(double nu, std::span<const Complex> grid) {
    if (!(nu > 0.0 && nu < 1.0)) throw Error("cayley relation check expects nu in (0,1)");
    const HomogeneousModel plus{nu, SupportSide::Positive};
    const HomogeneousModel minus{-nu, SupportSide::Positive};
    const Complex factor = std::exp(Complex{0.0, kPi * nu});
    auto cayley = [](Complex m) { return (m - Complex{0.0, 1.0}) / (m + Complex{0.0, 1.0}); };
    // s_{-nu} = e^{i pi nu} s_{nu}: both Cayley transforms reduce to
    // ((z/i)^nu - 1)/((z/i)^nu - e^{i pi nu}) up to that unimodular factor.
    double worst = 0.0;
    for (Complex z : grid) {
        const Complex lhs = cayley(closed_form_M(minus, z));
        const Complex rhs = factor * cayley(closed_form_M(plus, z));
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

double inversion_relation_check(double nu, std::span<const Complex> grid) {
    require_open_range(nu);
    const HomogeneousModel plus{nu, SupportSide::Positive};
    const HomogeneousModel neg{-nu, SupportSide::Negative};
    double worst = 0.0;
    for (Complex z : grid) {
        const Complex lhs = closed_form_M(plus, -1.0 / z);
        const Complex rhs = closed_form_M(neg, z);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

ExtensionType extension_type(const HomogeneousModel& h) {
    require_open_range(h.nu);
    if (h.side != SupportSide::Positive) {
        throw Error("extension typing is stated for the positive side");
    }
    return {h.nu >= 0.0, h.nu <= 0.0};
}

namespace {

// Weyl evaluator of the pair (inverse symmetric operator, inverse reference)
// for the positive-side nu model: W(z) = -M_nu(1/z) with the lower-half-plane
// value supplied by reflection. W(i) = i, support of the representing
// measure on [0, inf).
WeylEvaluator inverse_pair_evaluator(double nu) {
    const HomogeneousModel model{nu, SupportSide::Positive};
    return WeylEvaluator::custom(
        [model](Complex z) { return -std::conj(closed_form_M(model, 1.0 / std::conj(z))); },
        [model](double omega) -> std::optional<Complex> {
            if (omega == 0.0) return std::nullopt;
            return -closed_form_M(model, Complex{1.0 / omega, 0.0});
        },
        "inverse-pair nu=" + std::to_string(nu));
}

}  // namespace

InverseDualityReport inverse_duality_report(double nu, std::span<const Complex> grid) {
    if (!(nu >= 0.0 && nu < 1.0)) throw Error("duality report expects nu in [0,1)");
    InverseDualityReport rep;
    rep.inversion_residual = inversion_relation_check(nu, grid);

    const ExtensionType direct = extension_type({nu, SupportSide::Positive});
    const ExtensionType mirrored = extension_type({-nu, SupportSide::Positive});
    rep.types_match = direct.friedrichs && mirrored.krein;

    rep.direct_probe = threshold_classify(homogeneous_evaluator({nu, SupportSide::Positive}), 0.0);
    rep.inverse_probe = threshold_classify(inverse_pair_evaluator(nu), 0.0);
    rep.inverse_matches_krein = rep.inverse_probe.krein &&
                                (rep.inverse_probe.friedrichs == (nu == 0.0));

    rep.pass = rep.inversion_residual < 1e-10 && rep.types_match &&
               rep.direct_probe.friedrichs == direct.friedrichs &&
               rep.direct_probe.krein == direct.krein && rep.inverse_matches_krein;
    return rep;
}

ClosedFormAgreement closed_form_vs_quadrature(double nu, std::span<const Complex> grid,
                                              const QuadOptions& opt) {
    require_open_range(nu);
    const HomogeneousModel model{nu, SupportSide::Positive};
    const RealMeasure raw = homogeneous_measure(model);
    const Integral norm = weighted_total(raw, opt);
    const RealMeasure normalized = normalize(raw, opt);

    ClosedFormAgreement out;
    out.norm_constant_quadrature = norm.value.real();
    out.norm_constant_analytic = homogeneous_norm_constant(nu);
    out.max_residual = 0.0;
    for (Complex z : grid) {
        const Complex viaQuad = cauchy_integral(normalized, z, opt).value;
        const Complex viaForm = closed_form_M(model, z);
        out.max_residual = std::max(out.max_residual, std::abs(viaQuad - viaForm));
    }
    return out;
}

}  // namespace livsic
