#include <doctest.h>

#include "oulab/oracle.hpp"
#include "oulab/ousolver.hpp"

#include <cmath>
#include <vector>

using namespace oulab;

namespace {

FieldFunction cyl(Profile1D p, std::vector<double> dir) { return FieldFunction(CylindricalFn(std::move(p), std::move(dir))); }

const QuadMethod kQuad{};

MCMethod mc(std::uint64_t n, std::uint64_t seed, std::uint64_t stream = 0) { return MCMethod{n, RngStream(seed, stream), true}; }

}  // namespace

TEST_SUITE("ousolver") {

TEST_CASE("kernel scale parsing") {
    CHECK(parse_kernel_scale("derived") == KernelScale::derived);
    CHECK(parse_kernel_scale("paper_si1") == KernelScale::paper_si1);
    CHECK_THROWS(parse_kernel_scale("other"));
    CHECK(to_string(KernelScale::paper_si1) == "paper_si1");
    CHECK(kernel_scale_factor(KernelScale::paper_si1) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("semigroup of a constant is the constant") {
    const OUModel m1(1, Spectrum::quadratic(1.0));
    const OUModel m2(2, Spectrum::quadratic(1.0));
    const std::vector<double> x1{0.7}, x2{0.7, -1.3};
    for (double t : {0.0, 0.01, 1.0, 30.0}) {
        CHECK(semigroup_apply(m1, cyl(constant_profile(1.0), {1.0}), t, x1, kQuad).value == doctest::Approx(1.0).epsilon(1e-12));
        const FieldFunction one(2, [](std::span<const double>) { return 1.0; }, 1.0);
        CHECK(semigroup_apply(m2, one, t, x2, kQuad).value == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("semigroup at t = 0 is the identity") {
    const OUModel m(2, Spectrum::quadratic(1.0));
    const FieldFunction f = cyl(tanh_profile(), {1.0, 2.0});
    const std::vector<double> x{0.2, 0.1};
    const Estimate e = semigroup_apply(m, f, 0.0, x, kQuad);
    CHECK(e.value == std::tanh(0.4));
    CHECK(e.error == 0.0);
}

TEST_CASE("semigroup of sin against the characteristic-function identity") {
    const OUModel m(1, Spectrum::quadratic(1.0));
    const FieldFunction f = cyl(sin_profile(), {1.0});
    for (double t : {0.1, 0.5, 2.0}) {
        for (double x : {-1.5, 0.3, 2.0}) {
            const double c2 = (1.0 - std::exp(-2.0 * t)) / 2.0;
            const double exact = std::exp(-0.5 * c2) * std::sin(std::exp(-t) * x);
            const std::vector<double> xs{x};
            CHECK(semigroup_apply(m, f, t, xs, kQuad).value == doctest::Approx(exact).epsilon(1e-10));
            const Estimate e = semigroup_apply(m, f, t, xs, mc(200000, 3));
            CHECK(std::abs(e.value - exact) <= 3.0 * e.error + 1e-15);
        }
    }
}

TEST_CASE("semigroup law P_{t+s} = P_t P_s") {
    const OUModel m(1, Spectrum::quadratic(1.0));
    const FieldFunction f = cyl(tanh_profile(), {1.0});
    const double t = 0.3, s = 0.6;
    const std::vector<double> x{0.8};
    const FieldFunction ps(1, [&](std::span<const double> y) { return semigroup_apply(m, f, s, y, kQuad).value; }, 1.0);
    const Estimate composed = semigroup_apply(m, ps, t, x, mc(20000, 4));
    const double direct = semigroup_apply(m, f, t + s, x, kQuad).value;
    CHECK(std::abs(composed.value - direct) <= 3.0 * composed.error);
    CHECK(semigroup_apply(m, ps, t, x, kQuad).value == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("tensor quadrature is limited to m <= 3 for general functions") {
    const OUModel m(4, Spectrum::quadratic(1.0));
    const FieldFunction f(4, [](std::span<const double> x) { return std::tanh(x[0] * x[1]); }, 1.0);
    const std::vector<double> x(4, 0.1);
    CHECK_THROWS(semigroup_apply(m, f, 1.0, x, kQuad));
    CHECK_NOTHROW(semigroup_apply(m, f, 1.0, x, mc(2000, 1)));
}

TEST_CASE("contraction and normalization") {
    RngStream rng(9, 0);
    const OUModel m(2, Spectrum::quadratic(1.0));
    for (int i = 0; i < 10; ++i) {
        const std::vector<double> dir{rng.normal(), rng.normal()};
        const std::vector<double> x{2.0 * rng.normal(), 2.0 * rng.normal()};
        const double t = 3.0 * rng.uniform();
        const FieldFunction f = cyl(make_smooth_step(2), dir);
        const Estimate q = semigroup_apply(m, f, t, x, kQuad);
        CHECK(std::abs(q.value) <= 1.0 + 3.0 * q.error);
        const Estimate u = resolvent_apply(m, f, x, kQuad);
        CHECK(std::abs(u.value) <= 1.0 + 1e-9);
    }
}

TEST_CASE("resolvent examples") {
    const OUModel m(1, Spectrum::quadratic(1.0));
    const std::vector<double> x{1.7};
    CHECK(resolvent_apply(m, cyl(constant_profile(1.0), {1.0}), x, kQuad).value == doctest::Approx(1.0).epsilon(1e-10));
    const FieldFunction lin(1, [](std::span<const double> y) { return y[0]; }, kInf, "linear", true);
    CHECK(resolvent_apply(m, lin, x, kQuad).value == doctest::Approx(1.7 / 2.0).epsilon(1e-10));
    const OUModel m3(1, Spectrum::explicit_list({3.0}));
    CHECK(resolvent_apply(m3, lin, x, kQuad).value == doctest::Approx(1.7 / 4.0).epsilon(1e-10));
    const Estimate e = resolvent_apply(m, cyl(tanh_profile(), {1.0}), x, mc(200000, 5));
    const double q = resolvent_apply(m, cyl(tanh_profile(), {1.0}), x, kQuad).value;
    CHECK(std::abs(e.value - q) <= 3.0 * e.error);
}

TEST_CASE("gradient of the semigroup: closed forms") {
    const OUModel m(1, Spectrum::quadratic(1.0));
    const std::vector<double> x{0.4}, h{1.0};
    const FieldFunction lin(1, [](std::span<const double> y) { return y[0]; }, kInf, "linear", true);
    for (double t : {0.05, 0.5, 3.0}) {
        CHECK(grad_semigroup(m, lin, t, x, h, kQuad).value == doctest::Approx(std::exp(-t)).epsilon(1e-10));
        CHECK(std::abs(grad_semigroup(m, cyl(constant_profile(1.0), {1.0}), t, x, h, kQuad).value) <= 1e-12);
    }
    CHECK_THROWS(grad_semigroup(m, lin, 0.0, x, h, kQuad));
}

TEST_CASE("gradient of the semigroup against finite differences") {
    RngStream rng(12, 0);
    for (int i = 0; i < 10; ++i) {
        const int dim = 1 + i % 3;
        const OUModel m(dim, Spectrum::quadratic(0.5 + rng.uniform()));
        std::vector<double> x(dim), h(dim), dir(dim);
        for (int k = 0; k < dim; ++k) {
            x[k] = rng.normal();
            h[k] = rng.normal();
            dir[k] = rng.normal();
        }
        const double t = 0.1 + rng.uniform();
        FieldFunction f = cyl(tanh_profile(), dir);
        if (dim <= 2 && i % 2 == 1) {
            f = FieldFunction(dim, [dim](std::span<const double> y) { return std::tanh(y[0]) * std::cos(y[dim - 1] * 0.7); }, 1.0);
        }
        const double fd = fd_gradient([&](std::span<const double> y) { return semigroup_apply(m, f, t, y, kQuad).value; }, x, h, 1e-4);
        const double q = grad_semigroup(m, f, t, x, h, kQuad).value;
        CHECK(std::abs(q - fd) <= 1e-6 * std::max(1e-3, std::abs(fd)));
        const Estimate e = grad_semigroup(m, f, t, x, h, mc(100000, 13, i));
        CHECK(std::abs(e.value - fd) <= 3.0 * e.error + 1e-9);
    }
}

TEST_CASE("gradient of the resolvent against finite differences") {
    const OUModel m(2, Spectrum::quadratic(1.0));
    const FieldFunction f = cyl(tanh_profile(), {1.0, -0.5});
    const std::vector<double> x{0.3, 0.6};
    const GradientVector g = grad_resolvent_vector(m, f, x, kQuad);
    for (int k = 0; k < 2; ++k) {
        std::vector<double> h{0.0, 0.0};
        h[k] = 1.0;
        const double fd = fd_gradient([&](std::span<const double> y) { return resolvent_apply(m, f, y, kQuad).value; }, x, h, 1e-3);
        CHECK(g.components[k] == doctest::Approx(fd).epsilon(1e-6));
        CHECK(grad_resolvent(m, f, x, h, kQuad).value == doctest::Approx(g.components[k]).epsilon(1e-8));
    }
    const GradientVector gm = grad_resolvent_vector(m, f, x, mc(400000, 14));
    for (int k = 0; k < 2; ++k) CHECK(std::abs(gm.components[k] - g.components[k]) <= 3.0 * gm.errors[k]);
}

TEST_CASE("weighted gradient at the origin: constants and the sign profile") {
    const OUModel m(3, Spectrum::quadratic(1.0));
    const GradientVector z = sqrtA_grad_resolvent_zero(m, cyl(constant_profile(1.0), {1.0, 1.0, 1.0}), kQuad);
    for (double v : z.components) CHECK(std::abs(v) <= 1e-12);

    const OUModel m1(1, Spectrum::quadratic(1.0));
    // inner integral is sqrt(2/pi); \int e^{-t} sqrt(2) e^{-t} (1 - e^{-2t})^{-1/2} dt = sqrt(2)
    const QuadResult tint = integrate([](double t) { return std::sqrt(2.0) * std::exp(-2.0 * t) / std::sqrt(-std::expm1(-2.0 * t)); },
                                      0.0, kInf, QuadratureSpec{}.with_left(EndpointSingularity::algebraic(-0.5)));
    const GradientVector g = sqrtA_grad_resolvent_zero(m1, cyl(sign_profile(), {1.0}), kQuad);
    CHECK(g.components[0] == doctest::Approx(std::sqrt(2.0 / kPi) * tint.value).epsilon(1e-9));
    CHECK(g.norm_sq == doctest::Approx(g.components[0] * g.components[0]).epsilon(1e-15));
    CHECK(g.kernel_scale == KernelScale::derived);
}

TEST_CASE("weighted gradient at the origin matches sqrt(lambda) times the FD slope") {
    for (double lambda : {1.0, 4.0}) {
        const OUModel m(1, Spectrum::explicit_list({lambda}));
        const FieldFunction f = cyl(tanh_profile(), {1.0});
        const std::vector<double> zero{0.0}, h{1.0};
        const double fd = fd_gradient([&](std::span<const double> y) { return resolvent_apply(m, f, y, kQuad).value; }, zero, h, 1e-3);
        const double g = sqrtA_grad_resolvent_zero(m, f, kQuad).components[0];
        CHECK(std::abs(g - std::sqrt(lambda) * fd) <= 1e-3 * std::abs(g));
        const OUModel mp(1, Spectrum::explicit_list({lambda}), KernelScale::paper_si1);
        CHECK(sqrtA_grad_resolvent_zero(mp, f, kQuad).components[0] == doctest::Approx(g / std::sqrt(2.0)).epsilon(1e-10));
    }
}

TEST_CASE("weighted gradient at the origin: reduction, tensor quadrature and Monte Carlo agree") {
    const OUModel m(2, Spectrum::quadratic(1.0));
    const FieldFunction f = cyl(make_smooth_step(2), {1.0, 1.5});
    const GradientVector viaReduction = sqrtA_grad_resolvent_zero(m, f, kQuad);
    const FieldFunction general(2, [](std::span<const double> x) { return make_smooth_step(2)(x[0] + 1.5 * x[1]); }, 1.0);
    const GradientVector viaTensor = sqrtA_grad_resolvent_zero(m, general, kQuad);
    const GradientVector viaMC = sqrtA_grad_resolvent_zero(m, f, mc(400000, 15));
    for (int k = 0; k < 2; ++k) {
        CHECK(viaTensor.components[k] == doctest::Approx(viaReduction.components[k]).epsilon(1e-6));
        CHECK(std::abs(viaMC.components[k] - viaReduction.components[k]) <= 3.0 * viaMC.errors[k]);
    }
}

TEST_CASE("weighted gradient at the origin is linear in f") {
    const OUModel m(2, Spectrum::quadratic(1.0));
    const FieldFunction f1 = cyl(tanh_profile(), {1.0, 0.3});
    const FieldFunction f2 = cyl(sin_profile(), {-0.4, 1.0});
    const double a = 0.7, b = -1.3;
    const FieldFunction combo(2, [&](std::span<const double> x) { return a * f1(x) + b * f2(x); }, std::abs(a) + std::abs(b));
    const GradientVector g1 = sqrtA_grad_resolvent_zero(m, f1, kQuad);
    const GradientVector g2 = sqrtA_grad_resolvent_zero(m, f2, kQuad);
    const GradientVector g = sqrtA_grad_resolvent_zero(m, combo, kQuad);
    for (int k = 0; k < 2; ++k) CHECK(g.components[k] == doctest::Approx(a * g1.components[k] + b * g2.components[k]).epsilon(1e-6));
}

TEST_CASE("norm_sq is invariant under a joint permutation of coordinates") {
    const OUModel m = OUModel::diagonal({1.0, 4.0});
    const OUModel swapped = OUModel::diagonal({4.0, 1.0});
    const GradientVector a = sqrtA_grad_resolvent_zero(m, cyl(make_smooth_step(3), {0.8, -1.7}), kQuad);
    const GradientVector b = sqrtA_grad_resolvent_zero(swapped, cyl(make_smooth_step(3), {-1.7, 0.8}), kQuad);
    CHECK(a.norm_sq == doctest::Approx(b.norm_sq).epsilon(1e-9));
    CHECK(a.components[0] == doctest::Approx(b.components[1]).epsilon(1e-9));
    CHECK_THROWS(m.spectrum());
}

TEST_CASE("scalar sup of sqrt(lambda) |Du|") {
    std::vector<std::vector<double>> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back({-5.0 + 0.25 * i});
    const OUModel m(1, Spectrum::constant(1.0));
    CHECK(scalar_grad_sup(m, cyl(constant_profile(1.0), {1.0}), grid).value <= 1e-12);
    const ScalarSup s = scalar_grad_sup(m, cyl(tanh_profile(), {1.0}), grid);
    CHECK(s.value <= kPi / std::sqrt(2.0));
    CHECK(s.value > 0.1);
    for (double lambda : {0.25, 1.0, 4.0, 16.0}) {
        const OUModel ml(1, Spectrum::constant(lambda));
        CHECK(scalar_grad_sup(ml, cyl(sin_profile(), {1.0}), grid).value <= kPi / std::sqrt(2.0));
    }
    CHECK_THROWS(scalar_grad_sup(OUModel(1, Spectrum::quadratic(1.0)), cyl(tanh_profile(), {1.0}), grid));
}

}  // TEST_SUITE
