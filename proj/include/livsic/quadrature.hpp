#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace livsic::quad {

using Complex = std::complex<double>;

/// One integration segment, already reparametrized onto t in (0,1).
/// The callback returns integrand(x(t)) * x'(t); the engine never evaluates
/// the endpoints themselves, so integrable endpoint singularities are fine
/// as long as the chart keeps them mild.
struct Segment {
    std::function<Complex(double)> g;
};

struct Options {
    double abs_tol = 1e-11;
    int max_cells = 60000;
};

struct Result {
    Complex value{0.0, 0.0};
    double abs_error = 0.0;
    long evaluations = 0;
    bool converged = true;
};

/// Globally adaptive Gauss-Kronrod (7,15) over a list of segments.
/// Bisects the worst cell until the summed error estimate drops below
/// abs_tol or the cell budget runs out (converged=false in that case;
/// callers decide whether that is fatal).
Result integrate(const std::vector<Segment>& segments, const Options& opt = {});

/// Builds a segment for integrating f over the x-interval [a,b] with known
/// algebraic endpoint behavior: integrand ~ |x-a|^alpha_left near a and
/// ~ |b-x|^alpha_right near b (alpha > -1; 0 means regular). A power chart
/// t -> t^p absorbs the singular end; if both ends are singular the interval
/// is split at the midpoint, hence the vector result.
std::vector<Segment> charted_segments(double a, double b,
                                      std::function<Complex(double)> f,
                                      double alpha_left = 0.0,
                                      double alpha_right = 0.0);

}  // namespace livsic::quad
