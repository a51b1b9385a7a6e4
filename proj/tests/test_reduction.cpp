#include <doctest.h>

#include "oulab/oracle.hpp"
#include "oulab/reduction.hpp"

#include <cmath>
#include <vector>

using namespace oulab;

namespace {

ReductionTask make_task(int m, int k, std::vector<double> c, Profile1D p) {
    ReductionTask t;
    t.m = m;
    t.k = k;
    t.c = std::move(c);
    t.profile = std::move(p);
    return t;
}

std::vector<double> random_c(RngStream& rng, int m) {
    std::vector<double> c(m);
    for (auto& v : c) v = rng.normal();
    return c;
}

Profile1D test_spline() { return hermite_spline_profile({-2.0, -0.8, 0.0, 0.5, 1.7}, {0.9, -0.4, 0.2, -1.0, 0.6}); }

}  // namespace

TEST_SUITE("reduction") {

TEST_CASE("log_prefactor") {
    CHECK(log_prefactor(2) == doctest::Approx(-std::log(kPi)).epsilon(1e-15));
    // m = 3: 2 pi / ((2 pi)^{3/2} Gamma(1))
    CHECK(log_prefactor(3) == doctest::Approx(std::log(2.0 * kPi) - 1.5 * std::log(2.0 * kPi)).epsilon(1e-15));
    // m = 50 by an explicit sum of logs: Gamma(24.5) = sqrt(pi) prod_{j=0}^{23} (j + 1/2)
    double lg = 0.5 * std::log(kPi);
    for (int j = 0; j < 24; ++j) lg += std::log(j + 0.5);
    const double ref = std::log(2.0 * kPi) + 23.5 * std::log(kPi) - 25.0 * std::log(2.0 * kPi) - lg;
    CHECK(log_prefactor(50) == doctest::Approx(ref).epsilon(1e-13));
    CHECK(std::isfinite(log_prefactor(10000)));
    CHECK_THROWS(log_prefactor(1));
}

TEST_CASE("radial_reduce of a constant vanishes") {
    for (int m : {2, 3, 5}) {
        std::vector<double> c(m, 0.0);
        c[0] = 1.0;
        c[m - 1] += 0.5;
        const QuadResult r = radial_reduce(make_task(m, 1, c, constant_profile(1.0)));
        CHECK(std::abs(r.value) <= 1e-10);
    }
}

TEST_CASE("radial_reduce of the sign profile, m = 4") {
    const QuadResult r = radial_reduce(make_task(4, 2, {1, 1, 1, 1}, sign_profile()));
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(std::sqrt(2.0 / kPi) * 0.5).epsilon(1e-9));
}

TEST_CASE("radial_reduce against direct Monte Carlo for a spline profile") {
    RngStream rng(21, 0);
    for (int i = 0; i < 3; ++i) {
        const auto c = random_c(rng, 3);
        const ReductionTask t = make_task(3, 1 + i % 3, c, test_spline());
        const QuadResult q = radial_reduce(t);
        const MCEstimate mc = mc_gaussian_integral_mk(t.profile, c, 3, t.k, 1000000, rng.substream(10 + i), false);
        CHECK(std::abs(q.value - mc.mean) <= 3.0 * mc.std_error);
    }
}

TEST_CASE("odd_reduce agrees with radial_reduce for smooth steps") {
    RngStream rng(22, 0);
    for (int m : {2, 3, 6}) {
        for (int i = 0; i < 3; ++i) {
            const ReductionTask t = make_task(m, 1 + i % m, random_c(rng, m), make_smooth_step(5));
            const QuadResult a = odd_reduce(t);
            const QuadResult b = radial_reduce(t);
            CHECK(std::abs(a.value - b.value) <= a.error_estimate + b.error_estimate + 1e-10);
        }
    }
}

TEST_CASE("odd_reduce of the sign profile matches the closed form") {
    RngStream rng(23, 0);
    for (int m : {2, 3, 5, 10, 50}) {
        for (int i = 0; i < 4; ++i) {
            const auto c = random_c(rng, m);
            const int k = 1 + i % m;
            const QuadResult r = odd_reduce(make_task(m, k, c, sign_profile()));
            CHECK(std::abs(r.value - sign_closed_form(c, k)) <= 1e-8);
        }
    }
}

TEST_CASE("odd_reduce is linear in the profile and rejects even profiles") {
    const std::vector<double> c{0.4, -1.2, 0.9};
    const double plus = odd_reduce(make_task(3, 2, c, sign_profile())).value;
    const double minus = odd_reduce(make_task(3, 2, c, sign_profile().scaled(-1.0))).value;
    CHECK(minus == doctest::Approx(-plus).epsilon(1e-12));
    CHECK_THROWS(odd_reduce(make_task(3, 2, c, constant_profile(1.0))));
}

TEST_CASE("sign_closed_form") {
    const std::vector<double> e2{0.0, 1.0, 0.0};
    CHECK(sign_closed_form(e2, 2) == doctest::Approx(std::sqrt(2.0 / kPi)).epsilon(1e-15));
    const std::vector<double> ones{1.0, 1.0};
    CHECK(sign_closed_form(ones, 1) == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(1e-15));
    RngStream rng(24, 0);
    const auto c = random_c(rng, 7);
    double s = 0.0;
    for (int k = 1; k <= 7; ++k) s += std::pow(sign_closed_form(c, k), 2);
    CHECK(s == doctest::Approx(2.0 / kPi).epsilon(1e-14));
    CHECK_THROWS(sign_closed_form(std::vector<double>{0.0, 0.0}, 1));
}

TEST_CASE("only the direction cosine depends on k") {
    RngStream rng(25, 0);
    const auto c = random_c(rng, 4);
    const double a = radial_reduce(make_task(4, 1, c, test_spline())).value;
    const double b = radial_reduce(make_task(4, 3, c, test_spline())).value;
    CHECK(a / b == doctest::Approx(c[0] / c[2]).epsilon(1e-8));
}

TEST_CASE("rescaling c is rescaling the profile argument") {
    const double beta = 2.7;
    const std::vector<double> c{0.3, -0.5, 1.1};
    std::vector<double> bc;
    for (double v : c) bc.push_back(beta * v);
    const Profile1D base = tanh_profile();
    const Profile1D stretched("tanh(beta x)", [beta](double x) { return std::tanh(beta * x); }, 1.0, true, Smoothness::smooth);
    const double lhs = odd_reduce(make_task(3, 3, bc, base)).value;
    const double rhs = odd_reduce(make_task(3, 3, c, stretched)).value;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
}

TEST_CASE("the sign profile is extremal among odd profiles bounded by one") {
    RngStream rng(26, 0);
    const std::vector<Profile1D> ps{tanh_profile(), sin_profile(), make_smooth_step(2), make_smooth_step(9)};
    for (int i = 0; i < 5; ++i) {
        const int m = 2 + i;
        const auto c = random_c(rng, m);
        const double bound = std::abs(sign_closed_form(c, 1));
        for (const auto& p : ps) CHECK(std::abs(odd_reduce(make_task(m, 1, c, p)).value) <= bound + 1e-9);
    }
}

TEST_CASE("smooth steps increase to the closed form") {
    const std::vector<double> c{0.5, 1.0, 2.0};
    double prev = -1.0;
    for (int n = 1; n <= 256; n *= 2) {
        const double v = odd_reduce(make_task(3, 2, c, make_smooth_step(n))).value;
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
    CHECK(prev <= sign_closed_form(c, 2) + 1e-12);
    CHECK(prev >= 0.99 * sign_closed_form(c, 2));
}

TEST_CASE("the component orthogonal to c carries no mass") {
    const std::vector<double> c{1.0, -2.0, 0.5};
    const double n2 = 1.0 + 4.0 + 0.25;
    const Profile1D p = make_smooth_step(2);
    RngStream rng(27, 0);
    RunningStats st;
    for (int i = 0; i < 400000; ++i) {
        double x[3];
        double s = 0.0;
        for (int j = 0; j < 3; ++j) {
            x[j] = rng.normal();
            s += c[j] * x[j];
        }
        const double orth = x[0] - s * c[0] / n2;
        st.add(p(s) * orth);
    }
    const MCEstimate e = st.estimate(rng);
    CHECK(std::abs(e.mean) <= 3.0 * e.std_error);
}

TEST_CASE("task validation") {
    CHECK_THROWS(radial_reduce(make_task(1, 1, {1.0}, sign_profile())));
    CHECK_THROWS(radial_reduce(make_task(2, 3, {1.0, 1.0}, sign_profile())));
    CHECK_THROWS(radial_reduce(make_task(2, 1, {0.0, 0.0}, sign_profile())));
    CHECK_THROWS(radial_reduce(make_task(3, 1, {1.0, 1.0}, sign_profile())));
}

}  // TEST_SUITE
