#include <doctest.h>

#include "oulab/gaussian.hpp"
#include "oulab/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace oulab;

namespace {

// gamma(a, x) = x^a sum_n (-x)^n / (n! (n + a)), convergent for all x.
double lower_gamma_series(double a, double x) {
    double sum = 0.0;
    double term = 1.0;  // (-x)^n / n!
    for (int n = 0; n < 200; ++n) {
        sum += term / (n + a);
        term *= -x / (n + 1);
    }
    return std::pow(x, a) * sum;
}

// Composite Simpson rule, used as an independent brute-force oracle.
template <class F>
double simpson(F f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

TEST_SUITE("specfun") {

TEST_CASE("log_gamma reference values") {
    CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(kPi)).epsilon(1e-14));
    CHECK(std::abs(log_gamma(1.0)) < 1e-15);
    CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
    CHECK(std::abs(log_gamma(2.0)) < 1e-15);
}

TEST_CASE("log_gamma matches std::lgamma to 1e-13 relative") {
    for (double x = 0.01; x < 300.0; x *= 1.37) {
        const double ref = std::lgamma(x);
        const double tol = 1e-13 * std::max(1.0, std::abs(ref));
        CHECK(std::abs(log_gamma(x) - ref) <= tol);
    }
}

TEST_CASE("log_gamma recurrence on half integers") {
    for (double x = 0.5; x <= 200.5; x += 1.0) CHECK(std::abs(log_gamma(x + 1.0) - log_gamma(x) - std::log(x)) <= 1e-12);
}

TEST_CASE("log_gamma rejects nonpositive arguments") {
    CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(log_gamma(-1.5), std::domain_error);
}

TEST_CASE("log_beta") {
    CHECK(log_beta(0.5, 0.5) == doctest::Approx(std::log(kPi)).epsilon(1e-14));
    CHECK(log_beta(1.0, 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(std::abs(log_beta(1.0, 1.0)) < 1e-15);
    CHECK_THROWS(log_beta(0.0, 1.0));
    CHECK_THROWS(log_beta(1.0, -2.0));
    // \int_0^pi sin^j = B((j+1)/2, 1/2), brute force for j = 4
    const double s4 = simpson([](double p) { return std::pow(std::sin(p), 4); }, 0.0, kPi, 2000);
    CHECK(std::exp(log_beta(2.5, 0.5)) == doctest::Approx(s4).epsilon(1e-11));
}

TEST_CASE("gaussian radial moments") {
    CHECK(gaussian_radial_moment(0) == doctest::Approx(std::sqrt(kPi / 2.0)).epsilon(1e-14));
    CHECK(gaussian_radial_moment(1) == doctest::Approx(1.0).epsilon(1e-14));
    const double brute = simpson([](double r) { return std::exp(-0.5 * r * r) * r * r * r; }, 0.0, 40.0, 40000);
    CHECK(gaussian_radial_moment(3) == doctest::Approx(brute).epsilon(1e-11));
    CHECK(gaussian_radial_moment(3) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::isfinite(log_gaussian_radial_moment(5000)));
    for (int m = 2; m < 200; m += 7)
        CHECK(log_gaussian_radial_moment(m + 2) - log_gaussian_radial_moment(m) == doctest::Approx(std::log(m + 1.0)).epsilon(1e-12));
}

TEST_CASE("one_minus_exp is accurate for tiny arguments") {
    for (double x : {1e-300, 1e-12, 3e-6, 1e-5, 2e-5, 0.1, 1.0, 30.0}) CHECK(one_minus_exp(x) == doctest::Approx(-std::expm1(-x)).epsilon(1e-15));
}

TEST_CASE("normal distribution helpers") {
    CHECK(normal_pdf(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * kPi)));
    for (double z : {-8.0, -2.5, -0.3, 0.0, 1.0, 4.0}) CHECK(normal_cdf(z) == doctest::Approx(0.5 * std::erfc(-z / std::sqrt(2.0))).epsilon(1e-14));
    for (double p : {1e-300, 1e-10, 0.01, 0.3, 0.5, 0.77, 0.999999}) {
        const double z = normal_quantile(p);
        CHECK(normal_cdf(z) == doctest::Approx(p).epsilon(1e-13));
    }
}

TEST_CASE("QuadratureSpec validation") {
    QuadratureSpec s;
    s.rel_tol = 0.0;
    CHECK_THROWS(s.validate());
    CHECK_THROWS(EndpointSingularity::algebraic(-1.0));
    CHECK_THROWS(EndpointSingularity::algebraic(0.5));
    QuadratureSpec t;
    t.max_subdivisions = 0;
    CHECK_THROWS(t.validate());
}

TEST_CASE("integrate: beta-type integral for m = 5") {
    const QuadResult r = integrate([](double x) { return x * (1.0 - x * x); }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("integrate: singular resolvent weight gives pi/2") {
    QuadratureSpec spec;
    const QuadResult r = integrate([](double t) { return std::exp(-t) / std::sqrt(one_minus_exp(2.0 * t)); }, 0.0, kInf,
                                   spec.with_left(EndpointSingularity::algebraic(-0.5)));
    CHECK(r.converged);
    CHECK(std::abs(r.value - kPi / 2.0) <= 1e-10 * kPi / 2.0);
    // the same value after u = e^{-t}: \int_0^1 (1 - u^2)^{-1/2} du
    const QuadResult u = integrate([](double x) { return 1.0 / std::sqrt((1.0 - x) * (1.0 + x)); }, 0.0, 1.0,
                                   spec.with_right(EndpointSingularity::algebraic(-0.5)));
    CHECK(u.value == doctest::Approx(r.value).epsilon(1e-11));
}

TEST_CASE("integrate: s^{-1/4} e^{-s} against the lower incomplete gamma series") {
    QuadratureSpec spec;
    const QuadResult r = integrate([](double s) { return std::pow(s, -0.25) * std::exp(-s); }, 0.0, 1.0,
                                   spec.with_left(EndpointSingularity::algebraic(-0.25)));
    CHECK(r.converged);
    const double ref = lower_gamma_series(0.75, 1.0);
    CHECK(std::abs(r.value - ref) <= 1e-10 * ref);
}

TEST_CASE("integrate: closed-form battery") {
    struct Case {
        Integrand f;
        double a, b, exact;
    };
    const std::vector<Case> cases{
        {[](double x) { return x * x * std::exp(-0.5 * x * x); }, -kInf, kInf, std::sqrt(2.0 * kPi)},
        {[](double x) { return std::pow(x, 4) * std::exp(-0.5 * x * x); }, -kInf, kInf, 3.0 * std::sqrt(2.0 * kPi)},
        {[](double x) { return x * x * x * std::exp(-x); }, 0.0, kInf, 6.0},
        {[](double x) { return 3.0 * x * x - 2.0 * x + 1.0; }, -1.0, 2.0, 9.0 - 3.0 + 3.0},
        {[](double x) { return std::exp(-x * x); }, 0.0, kInf, 0.5 * std::sqrt(kPi)},
    };
    QuadratureSpec spec;
    for (const auto& c : cases) {
        const QuadResult r = integrate(c.f, c.a, c.b, spec);
        REQUIRE(r.converged);
        CHECK(std::abs(r.value - c.exact) <= std::max(spec.abs_tol, spec.rel_tol * std::abs(c.exact)));
        CHECK(r.error_estimate >= 0.0);
    }
}

TEST_CASE("integrate: additivity on random smooth integrands") {
    RngStream rng(7, 1);
    for (int i = 0; i < 20; ++i) {
        const double p = rng.normal(), q = rng.normal(), w = 0.5 + 3.0 * rng.uniform();
        const Integrand f = [&](double x) { return std::sin(w * x + p) * std::exp(q * x / 4.0); };
        double a = -2.0 + 4.0 * rng.uniform(), b = -2.0 + 4.0 * rng.uniform();
        if (a > b) std::swap(a, b);
        const double c = a + (b - a) * rng.uniform();
        const QuadResult whole = integrate(f, a, b);
        const QuadResult left = integrate(f, a, c);
        const QuadResult right = integrate(f, c, b);
        CHECK(std::abs(left.value + right.value - whole.value) <=
              whole.error_estimate + left.error_estimate + right.error_estimate + 1e-13);
    }
}

TEST_CASE("integrate: reversed limits negate") {
    const QuadResult r = integrate([](double x) { return std::cos(x); }, 1.0, 0.0);
    CHECK(r.value == doctest::Approx(-std::sin(1.0)).epsilon(1e-13));
}

TEST_CASE("integrate: non-convergence is reported") {
    QuadratureSpec spec;
    spec.max_subdivisions = 1;
    const QuadResult r = integrate([](double x) { return std::sin(200.0 * x * x); }, 0.0, 5.0, spec);
    CHECK_FALSE(r.converged);
}

TEST_CASE("gaussian_expectation of polynomials") {
    CHECK(gaussian_expectation([](double z) { return z * z; }).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(gaussian_expectation([](double z) { return z * z * z; }).value) < 1e-12);
    const double k[] = {0.0};
    CHECK(gaussian_expectation([](double z) { return z > 0 ? 1.0 : 0.0; }, {}, k).value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("integrate_vector agrees with scalar integration componentwise") {
    const std::vector<double> lam{1.0, 10.0, 1000.0};
    const std::vector<double> br{0.5, 0.1, 0.01};
    const VectorQuadResult v = integrate_vector(
        [&](double s, std::span<double> out) {
            for (std::size_t k = 0; k < lam.size(); ++k) out[k] = 2.0 * s * std::exp(-lam[k] * s * s) * std::cos(s);
        },
        lam.size(), 0.0, 1.0, {}, br);
    CHECK(v.converged);
    for (std::size_t k = 0; k < lam.size(); ++k) {
        const double l = lam[k];
        const QuadResult s = integrate([l](double x) { return 2.0 * x * std::exp(-l * x * x) * std::cos(x); }, 0.0, 1.0);
        CHECK(v.values[k] == doctest::Approx(s.value).epsilon(1e-10));
    }
    CHECK_THROWS(integrate_vector([](double, std::span<double>) {}, 1, 0.0, kInf));
}

}  // TEST_SUITE
