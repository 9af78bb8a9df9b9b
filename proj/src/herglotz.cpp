#include "livsic/herglotz.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "livsic/errors.hpp"

namespace livsic {

using Complex = std::complex<double>;

struct WeylEvaluator::Backing {
    virtual ~Backing() = default;
    virtual Complex upper(Complex z) const = 0;
    virtual BoundaryValue boundary(double omega, const WeylEvaluator& self) const = 0;
    virtual const RealMeasure* measure() const { return nullptr; }
    virtual const std::string& label() const = 0;
};

namespace {

// Richardson table over M(omega + i eps_k), eps_k = 2^-k eps0. The expansion
// in eps starts at the linear term, so the classical ratio-2 table applies.
BoundaryValue epsilon_extrapolation(const WeylEvaluator& e, double omega) {
    constexpr double kEps0 = 1e-2;
    constexpr int kMaxLevels = 20;
    constexpr double kSettle = 1e-8;

    std::vector<std::vector<Complex>> table;
    Complex prev_diag{0.0, 0.0};
    for (int k = 0; k < kMaxLevels; ++k) {
        const double eps = kEps0 * std::pow(0.5, k);
        std::vector<Complex> row(static_cast<std::size_t>(k) + 1);
        row[0] = e(Complex{omega, eps});
        for (int j = 1; j <= k; ++j) {
            const double w = std::pow(2.0, j);
            row[j] = (w * row[j - 1] - table[k - 1][j - 1]) / (w - 1.0);
        }
        table.push_back(row);
        if (k > 0) {
            const double diff = std::abs(row[k] - prev_diag);
            if (diff < kSettle) {
                return {row[k], diff, BoundaryValue::Method::EpsilonExtrapolation, k + 1};
            }
        }
        prev_diag = row[k];
    }
    throw ExtrapolationDivergence("epsilon ladder failed to settle at omega");
}

struct MeasureBacking final : WeylEvaluator::Backing {
    RealMeasure m;
    QuadOptions opt;
    std::string name = "measure";

    MeasureBacking(RealMeasure mm, QuadOptions o) : m(std::move(mm)), opt(o) {}

    Complex upper(Complex z) const override { return cauchy_integral(m, z, opt).value; }

    BoundaryValue boundary(double omega, const WeylEvaluator& self) const override {
        if (m.gap_to_support(omega) > 0.0) {
            Integral r = boundary_integral(m, omega, opt);
            return {r.value, r.abs_error, BoundaryValue::Method::DirectQuadrature, 0};
        }
        return epsilon_extrapolation(self, omega);
    }

    const RealMeasure* measure() const override { return &m; }
    const std::string& label() const override { return name; }
};

struct ComposedBacking final : WeylEvaluator::Backing {
    WeylEvaluator inner;
    MobiusMap map;
    MobiusMap inv;
    double re0;  // Re M(f^{-1}(i))
    double im0;  // Im M(f^{-1}(i))
    std::string name;

    ComposedBacking(WeylEvaluator in, MobiusMap f, Complex anchor)
        : inner(std::move(in)), map(f), inv(f.inverse()), re0(anchor.real()),
          im0(anchor.imag()), name("composed(" + inner.label() + ")") {}

    Complex recalibrate(Complex v) const { return (v - re0) / im0; }

    Complex upper(Complex z) const override { return recalibrate(inner.at(inv(z))); }

    BoundaryValue boundary(double omega, const WeylEvaluator&) const override {
        const double pre = inv.apply_real(omega);
        if (std::isinf(pre)) {
            throw Error("boundary preimage at infinity under composed evaluator");
        }
        BoundaryValue b = inner.boundary(pre);
        b.value = recalibrate(b.value);
        b.error_estimate /= im0;
        return b;
    }

    const std::string& label() const override { return name; }
};

struct CustomBacking final : WeylEvaluator::Backing {
    std::function<Complex(Complex)> fn;
    std::function<std::optional<Complex>(double)> boundary_rule;
    std::string name;

    Complex upper(Complex z) const override { return fn(z); }

    BoundaryValue boundary(double omega, const WeylEvaluator& self) const override {
        if (boundary_rule) {
            if (auto v = boundary_rule(omega)) {
                return {*v, 0.0, BoundaryValue::Method::DirectQuadrature, 0};
            }
        }
        return epsilon_extrapolation(self, omega);
    }

    const std::string& label() const override { return name; }
};

}  // namespace

Complex WeylEvaluator::operator()(Complex z) const {
    if (!(z.imag() > 0.0)) throw Error("Weyl evaluation requires Im z > 0");
    return impl_->upper(z);
}

Complex WeylEvaluator::reflected(Complex z) const {
    if (!(z.imag() < 0.0)) throw Error("reflected evaluation requires Im z < 0");
    return std::conj(impl_->upper(std::conj(z)));
}

Complex WeylEvaluator::at(Complex z) const {
    if (z.imag() > 0.0) return impl_->upper(z);
    if (z.imag() < 0.0) return std::conj(impl_->upper(std::conj(z)));
    throw Error("use boundary() on the real axis");
}

BoundaryValue WeylEvaluator::boundary(double omega) const {
    return impl_->boundary(omega, *this);
}

const RealMeasure* WeylEvaluator::measure() const { return impl_->measure(); }

const std::string& WeylEvaluator::label() const { return impl_->label(); }

WeylEvaluator WeylEvaluator::from_measure(RealMeasure normalized, QuadOptions opt) {
    return WeylEvaluator(std::make_shared<MeasureBacking>(std::move(normalized), opt));
}

WeylEvaluator WeylEvaluator::composed(WeylEvaluator inner, MobiusMap map,
                                      std::optional<Complex> anchor) {
    Complex w;
    if (anchor) {
        w = *anchor;
    } else if (map.is_inversion() || map.is_identity()) {
        // i is a fixed point, the pullback needs no recalibration
        w = Complex{0.0, 1.0};
    } else {
        w = inner.at(map.inverse()(Complex{0.0, 1.0}));
    }
    if (!(w.imag() > 0.0)) throw Error("composition anchor must lie in the upper half-plane");
    return WeylEvaluator(std::make_shared<ComposedBacking>(std::move(inner), map, w));
}

WeylEvaluator WeylEvaluator::custom(
    std::function<Complex(Complex)> upper,
    std::function<std::optional<Complex>(double)> boundary_rule, std::string label) {
    auto b = std::make_shared<CustomBacking>();
    b->fn = std::move(upper);
    b->boundary_rule = std::move(boundary_rule);
    b->name = std::move(label);
    return WeylEvaluator(std::move(b));
}

namespace {

// Divergence heuristic for a monotone ladder: the sequence is called
// divergent when it already passed the hard bound, or when its increments
// are not decaying (geometric tail with ratio below ~0.8 means convergence).
bool ladder_diverges(const std::vector<double>& y, double hard_bound_sign) {
    const std::size_t n = y.size();
    if (hard_bound_sign * y[n - 1] >= 1e3) return true;
    const double d_first = std::abs(y[1] - y[0]);
    const double d_last = std::abs(y[n - 1] - y[n - 2]);
    return d_last >= 0.8 * d_first;
}

}  // namespace

ThresholdSignature threshold_classify(const WeylEvaluator& e, double spectral_bottom) {
    std::vector<double> far(6), near(6);
    for (int k = 1; k <= 6; ++k) {
        const BoundaryValue b = e.boundary(-std::pow(10.0, k));
        far[k - 1] = b.value.real();
    }
    for (int k = 1; k <= 6; ++k) {
        const BoundaryValue b = e.boundary(spectral_bottom - std::pow(10.0, -k));
        near[k - 1] = b.value.real();
    }
    // M is strictly increasing between spectral gaps, so the far ladder must
    // decrease and the near ladder must increase.
    for (int k = 1; k < 6; ++k) {
        if (!(far[k] < far[k - 1]) || !(near[k] > near[k - 1])) {
            throw InconclusiveThreshold("threshold sample ladder is not monotone");
        }
    }
    ThresholdSignature sig;
    sig.friedrichs = ladder_diverges(far, -1.0);
    sig.krein = ladder_diverges(near, +1.0);
    return sig;
}

}  // namespace livsic
