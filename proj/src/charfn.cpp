#include "livsic/charfn.hpp"

#include <cmath>
#include <numbers>

#include "livsic/errors.hpp"

namespace livsic {

using Complex = std::complex<double>;

VonNeumannParameter::VonNeumannParameter(Complex k) : kappa(k) {
    if (!(std::abs(k) < 1.0)) throw Error("von Neumann parameter requires |kappa| < 1");
}

Complex livsic_s(const WeylEvaluator& e, Complex z) {
    const Complex m = e(z);
    const Complex den = m + Complex{0.0, 1.0};
    if (std::abs(den) < 1e-14) {
        throw PoleAtEvaluation("M(z) = -i is impossible for Herglotz values");
    }
    return (m - Complex{0.0, 1.0}) / den;
}

Complex weyl_from_s(Complex s) {
    if (std::abs(s - 1.0) < 1e-14) throw DegenerateValue("s = 1 has no finite Weyl value");
    return (s + 1.0) / (Complex{0.0, 1.0} * (s - 1.0));
}

Complex disc_shift(Complex x, Complex kappa) {
    return (x - kappa) / (std::conj(kappa) * x - 1.0);
}

Complex char_s(const CharEvaluator& c, Complex z) {
    return disc_shift(livsic_s(c.weyl, z), c.kappa);
}

Complex normalizing_factor(Complex kappa) {
    return (1.0 - std::conj(kappa)) / (1.0 - kappa);
}

Complex normalized_char(const CharEvaluator& c, Complex z) {
    return normalizing_factor(c.kappa) * char_s(c, z);
}

Complex cayley_parameter(Complex kappa) {
    return Complex{0.0, 1.0} * (1.0 + kappa) / (1.0 - kappa);
}

bool LivsicProbe::all_growth() const {
    for (const LivsicProbeRow& r : rows) {
        if (!r.monotone_growth) return false;
    }
    return true;
}

LivsicProbe livsic_criterion_probe(const WeylEvaluator& e, double sector_eps) {
    if (!(sector_eps > 0.0 && sector_eps < std::numbers::pi / 2.0)) {
        throw Error("sector parameter must lie in (0, pi/2)");
    }
    LivsicProbe probe;
    const Complex s_i = livsic_s(e, Complex{0.0, 1.0});
    probe.s_at_i_abs = std::abs(s_i);
    probe.s_at_i_zero = probe.s_at_i_abs < 1e-9;

    const double rays[3] = {sector_eps, std::numbers::pi / 2.0,
                            std::numbers::pi - sector_eps};
    for (double arg : rays) {
        for (int j = 0; j < 12; ++j) {
            const double alpha = j * std::numbers::pi / 12.0;
            const Complex phase = std::exp(Complex{0.0, 2.0 * alpha});
            LivsicProbeRow row;
            row.arg = arg;
            row.alpha = alpha;
            bool growing = true;
            double prev = 0.0;
            for (int k = 1; k <= 5; ++k) {
                const double r = std::pow(10.0, k);
                const Complex z = r * Complex{std::cos(arg), std::sin(arg)};
                const double mag = std::abs(z * (livsic_s(e, z) - phase));
                row.magnitudes.push_back(mag);
                if (k > 1 && mag <= prev) growing = false;
                prev = mag;
            }
            row.monotone_growth = growing;
            probe.rows.push_back(std::move(row));
        }
    }
    return probe;
}

}  // namespace livsic
