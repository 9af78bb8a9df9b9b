#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "livsic/errors.hpp"
#include "livsic/measure.hpp"
#include "test_support.hpp"

using namespace livsic;
using testsup::kInf;
using Complex = std::complex<double>;

namespace {
constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};
}  // namespace

TEST_CASE("normalize: single atom at 0 with mass 1 is already normalized") {
    RealMeasure m({Atom{0.0, 1.0}}, {});
    CHECK(weighted_total(m).value.real() == doctest::Approx(1.0).epsilon(1e-12));
    RealMeasure n = normalize(m);
    CHECK(n.scale() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normalize: Lebesgue density needs scale 1/pi") {
    RealMeasure m({}, {DensityPiece{-kInf, kInf, PowerLaw{1.0, 0.0, 0.0, Side::Right}}});
    // oracle: arctan antiderivative gives total pi
    CHECK(weighted_total(m).value.real() == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(normalize(m).scale() == doctest::Approx(1.0 / kPi).epsilon(1e-10));
}

TEST_CASE("normalize: density 1 on (1,inf) needs scale 4/pi") {
    RealMeasure m({}, {DensityPiece{1.0, kInf, PowerLaw{1.0, 0.0, 1.0, Side::Right}}});
    // oracle: integral of (1+x^2)^{-1} over (1,inf) is pi/4
    CHECK(normalize(m).scale() == doctest::Approx(4.0 / kPi).epsilon(1e-10));
}

TEST_CASE("normalize is idempotent") {
    RealMeasure n = normalize(testsup::power_measure(0.5));
    RealMeasure nn = normalize(n);
    CHECK(std::abs(weighted_total(nn).value.real() - 1.0) < 1e-12);
}

TEST_CASE("cauchy_integral at i equals i for normalized measures") {
    for (const RealMeasure& m :
         {testsup::lebesgue(), testsup::halfline(), normalize(testsup::power_measure(0.5)),
          normalize(testsup::power_measure(-0.5))}) {
        const Integral r = cauchy_integral(m, kI);
        CHECK(std::abs(r.value - kI) < 1e-9);
        CHECK(r.abs_error <= 1e-10);
    }
}

TEST_CASE("cauchy_integral of normalized Lebesgue is the constant i") {
    const RealMeasure m = testsup::lebesgue();
    for (Complex z : {Complex{0.0, 2.0}, Complex{1.0, 1.0}, Complex{-3.0, 0.25}}) {
        CHECK(std::abs(cauchy_integral(m, z).value - kI) < 1e-9);
    }
}

TEST_CASE("cauchy_integral is Schwarz symmetric") {
    const RealMeasure m = normalize(testsup::power_measure(0.25));
    const Complex z{0.7, 1.3};
    const Complex up = cauchy_integral(m, z).value;
    const Complex down = cauchy_integral(m, std::conj(z)).value;
    CHECK(std::abs(down - std::conj(up)) < 1e-10);
}

TEST_CASE("cauchy_integral requires Im z != 0 and an integrable measure") {
    CHECK_THROWS_AS((void)cauchy_integral(testsup::lebesgue(), Complex{1.0, 0.0}), Error);
    // inversion image of the full power measure is not weighted-integrable
    RealMeasure bad({}, {DensityPiece{-kInf, 0.0, PowerLaw{1.0, -2.5, 0.0, Side::Left}}});
    CHECK_THROWS_AS((void)cauchy_integral(bad, kI), NonFiniteWeightedMass);
}

TEST_CASE("Herglotz positivity on random parameter draws") {
    std::mt19937 rng(20240811u);
    std::uniform_real_distribution<double> nu(-0.6, 0.6);
    std::uniform_real_distribution<double> re(-3.0, 3.0);
    std::uniform_real_distribution<double> im(0.05, 8.0);
    for (int k = 0; k < 25; ++k) {
        const RealMeasure m = normalize(testsup::power_measure(nu(rng)));
        const Complex z{re(rng), im(rng)};
        CHECK(cauchy_integral(m, z).value.imag() > 0.0);
    }
}

TEST_CASE("second moment: power family") {
    const RealMeasure m = normalize(testsup::power_measure(0.5));
    CHECK(std::isinf(second_moment_at(m, 1.0)));
    // comparison oracle: integral of sqrt(x)/(1+x)^2 over (0,inf) is pi/2,
    // scaled by the normalization sqrt(2)/pi
    const double finite = second_moment_at(m, -1.0);
    CHECK(finite == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("second moment: atom sum") {
    RealMeasure m({Atom{0.0, 1.0}}, {});
    CHECK(second_moment_at(m, 5.0) == doctest::Approx(0.04).epsilon(1e-14));
    CHECK(std::isinf(second_moment_at(m, 0.0)));
}

TEST_CASE("second moment: tabulated divergence detection") {
    // density |x| on (-1,1): the kernel integral diverges logarithmically,
    // too slowly for the growth streak and never settling
    RealMeasure vee({}, {DensityPiece{-1.0, 1.0, Tabulated{{-1.0, 0.0, 1.0}, {1.0, 0.0, 1.0}}}});
    CHECK_THROWS_AS((void)second_moment_at(normalize(vee), 0.0), Indeterminate);

    // dead zone around 0: the window refinement settles to a finite value
    RealMeasure notch({}, {DensityPiece{-1.0, 1.0,
                                        Tabulated{{-1.0, -0.1, 0.1, 1.0}, {1.0, 0.0, 0.0, 1.0}}}});
    const double v = second_moment_at(normalize(notch), 0.0);
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
}

TEST_CASE("classify_point") {
    RealMeasure atom({Atom{0.0, 1.0}}, {});
    const PointClass pc = classify_point(atom, 0.0);
    CHECK_FALSE(pc.core);
    CHECK(pc.has_atom);

    const RealMeasure m = normalize(testsup::power_measure(0.5));
    CHECK(classify_point(m, 1.0).core);
    CHECK_FALSE(classify_point(m, -1.0).core);
    CHECK_FALSE(classify_point(m, -1.0).has_atom);
}

TEST_CASE("classify_point on the power family matches the analytic rule") {
    for (double nu : {0.5, 0.25, -0.25, -0.5}) {
        const RealMeasure m = normalize(testsup::power_measure(nu));
        for (double s : {0.0, 0.5, 1.0, 10.0}) {
            CHECK(classify_point(m, s).core);
        }
        for (double s : {-0.1, -1.0, -10.0}) {
            CHECK_FALSE(classify_point(m, s).core);
        }
    }
}

TEST_CASE("pushforward: affine moves atoms and transforms densities") {
    RealMeasure m({Atom{2.0, 3.0}}, {});
    RealMeasure shifted = pushforward(m, MobiusMap::translation(1.0));
    REQUIRE(shifted.atoms().size() == 1);
    CHECK(shifted.atoms()[0].pos == doctest::Approx(3.0));
    CHECK(shifted.atoms()[0].mass == doctest::Approx(3.0));

    // density transforms with the Jacobian: scale 2 halves the values
    RealMeasure leb = testsup::lebesgue();
    RealMeasure scaled = pushforward(leb, MobiusMap::affine(2.0, 0.0));
    CHECK(scaled.pieces()[0].density(0.5) ==
          doctest::Approx(leb.pieces()[0].density(0.25) / 2.0));
}

TEST_CASE("pushforward: inversion of the power family") {
    const RealMeasure m = testsup::power_measure(0.5);
    const RealMeasure img = pushforward(m, MobiusMap::inversion());
    REQUIRE(img.pieces().size() == 1);
    const PowerLaw& pw = std::get<PowerLaw>(img.pieces()[0].form);
    CHECK(pw.exponent == doctest::Approx(-2.5));
    CHECK(pw.anchor == 0.0);
    CHECK(img.pieces()[0].lo == -kInf);
    CHECK(img.pieces()[0].hi == 0.0);
    CHECK(img.infinite_mass());
}

TEST_CASE("pushforward: inversion with an atom at the pole") {
    RealMeasure m({Atom{0.0, 1.0}}, {});
    CHECK_THROWS_AS((void)pushforward(m, MobiusMap::inversion()), AtomAtPole);
}

TEST_CASE("pushforward: inversion matches the substitution rule on a truncated piece") {
    // mu = x^{0.3} dx on (0.5, 2); nu = iota_* mu lives on (-2, -0.5)
    RealMeasure m({}, {DensityPiece{0.5, 2.0, PowerLaw{1.0, 0.3, 0.0, Side::Right}}});
    const RealMeasure img = pushforward(m, MobiusMap::inversion());

    // independent oracle: Simpson refinement of the substituted integrand
    const Complex z{0.4, 0.9};
    auto integrand = [&](double t) {
        const double rho = std::pow(-1.0 / t, 0.3) / (t * t);
        return (1.0 / (t - z) - t / (1.0 + t * t)) * rho;
    };
    const int n = 40000;
    Complex brute{0.0, 0.0};
    const double a = -2.0, b = -0.5, h = (b - a) / n;
    for (int j = 0; j < n; ++j) {
        const double t0 = a + j * h, t1 = t0 + h;
        brute += h / 6.0 * (integrand(t0) + 4.0 * integrand(0.5 * (t0 + t1)) + integrand(t1));
    }
    CHECK(std::abs(cauchy_integral(img, z).value - brute) < 1e-9);
}

TEST_CASE("pushforward round trips preserve the weighted total") {
    const RealMeasure m = normalize(testsup::power_measure(-0.25));
    const MobiusMap f = MobiusMap::affine(2.0, -1.0);
    const RealMeasure back = pushforward(pushforward(m, f), f.inverse());
    CHECK(std::abs(weighted_total(back).value.real() - 1.0) < 1e-9);

    RealMeasure trunc({}, {DensityPiece{0.5, 2.0, PowerLaw{1.0, 0.3, 0.0, Side::Right}}});
    const RealMeasure twice =
        pushforward(pushforward(trunc, MobiusMap::inversion()), MobiusMap::inversion());
    CHECK(std::abs(weighted_total(twice).value.real() -
                   weighted_total(trunc).value.real()) < 1e-9);
}

TEST_CASE("invariants are validated at construction") {
    CHECK_THROWS_AS(RealMeasure({Atom{0.0, -1.0}}, {}), Error);
    CHECK_THROWS_AS(RealMeasure({Atom{1.0, 1.0}, Atom{1.0, 2.0}}, {}), Error);
    CHECK_THROWS_AS(
        RealMeasure({}, {DensityPiece{1.0, 0.0, PowerLaw{1.0, 0.0, 0.0, Side::Right}}}), Error);
    CHECK_THROWS_AS(
        RealMeasure({}, {DensityPiece{0.0, 1.0, Tabulated{{0.5, 0.2}, {1.0, 1.0}}}}), Error);
}

TEST_CASE("boundary integral on a gap point") {
    const RealMeasure m = testsup::halfline();
    const Integral r = boundary_integral(m, 0.0);
    // oracle: antiderivative of 1/x - x/(1+x^2) over (1,inf) is (1/2) log 2
    CHECK(r.value.real() == doctest::Approx(2.0 * std::log(2.0) / kPi).epsilon(1e-10));
    CHECK(std::abs(r.value.imag()) < 1e-12);
    CHECK_THROWS_AS((void)boundary_integral(m, 2.0), Error);
}
