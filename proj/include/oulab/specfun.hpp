#pragma once

// Special functions and adaptive quadrature shared by every other module.

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace oulab {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Natural log of Gamma for x > 0. Lanczos (g = 7, 9 terms) below 15,
/// Stirling series with Bernoulli corrections above.
double log_gamma(double x);

/// ln B(a, b) = lnG(a) + lnG(b) - lnG(a + b).
double log_beta(double a, double b);

/// ln of the integral of exp(-r^2/2) r^m over (0, inf),
/// i.e. ln( Gamma((m+1)/2) 2^((m-1)/2) ).
double log_gaussian_radial_moment(int m);

/// Same moment in linear space; overflows to +inf for large m, so callers
/// beyond m ~ 100 should stay in log space.
double gaussian_radial_moment(int m);

/// 1 - exp(-x) without cancellation for small x.
double one_minus_exp(double x);

/// Standard normal density, CDF and quantile.
double normal_pdf(double z);
double normal_cdf(double z);
double normal_quantile(double p);

/// Endpoint behaviour of an integrand: none, or (t - a)^alpha with
/// alpha in (-1, 0) (mirrored at b).
struct EndpointSingularity {
    double alpha = 0.0;  // 0 means regular

    static EndpointSingularity none() { return {}; }
    static EndpointSingularity algebraic(double alpha);
    bool singular() const { return alpha != 0.0; }
};

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    std::size_t max_subdivisions = 2000;
    EndpointSingularity left{};
    EndpointSingularity right{};

    void validate() const;
    QuadratureSpec with_left(EndpointSingularity s) const;
    QuadratureSpec with_right(EndpointSingularity s) const;
    QuadratureSpec regular() const;
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = false;
    std::size_t evaluations = 0;
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (7/15) quadrature of f over (a, b). Either bound
/// may be infinite; semi-infinite ranges use t = a - ln(1 - u), so the
/// integrand must decay at least exponentially. Algebraic endpoint
/// singularities flagged in `spec` are removed by t = a + (b-a) s^(1/(1+alpha)).
/// `breakpoints` (strictly inside (a, b)) seed the initial panels.
QuadResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec = {},
                     std::span<const double> breakpoints = {});

/// E[f(Z)], Z ~ N(0, 1), by adaptive quadrature over the real line.
/// `breakpoints` are points in z where f is non-smooth.
QuadResult gaussian_expectation(const Integrand& f, const QuadratureSpec& spec = {},
                                std::span<const double> breakpoints = {});

struct VectorQuadResult {
    std::vector<double> values;
    std::vector<double> errors;
    bool converged = false;
    std::size_t panels = 0;
};

/// Vector-valued integrand: fills `out` (size dim) with the components at x.
using VectorIntegrand = std::function<void(double x, std::span<double> out)>;

/// Adaptive GK 7/15 over a finite (a, b) for `dim` integrands sharing the same
/// nodes. The panel with the worst component error (relative to that
/// component's tolerance) is bisected until every component converges.
VectorQuadResult integrate_vector(const VectorIntegrand& f, std::size_t dim, double a, double b,
                                  const QuadratureSpec& spec = {},
                                  std::span<const double> breakpoints = {});

}  // namespace oulab
