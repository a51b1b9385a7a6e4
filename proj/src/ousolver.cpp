#include "oulab/ousolver.hpp"

#include "oulab/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace oulab {

std::string to_string(KernelScale s) { return s == KernelScale::derived ? "derived" : "paper_si1"; }

KernelScale parse_kernel_scale(const std::string& s) {
    if (s == "derived") return KernelScale::derived;
    if (s == "paper_si1") return KernelScale::paper_si1;
    throw std::invalid_argument("kernel scale must be 'derived' or 'paper_si1', got '" + s + "'");
}

double kernel_scale_factor(KernelScale s) { return s == KernelScale::derived ? 1.0 : 1.0 / std::sqrt(2.0); }

OUModel::OUModel(int m, Spectrum spectrum, KernelScale scale)
    : m_(m), spectrum_(std::move(spectrum)), scale_(scale) {
    if (m_ < 1) throw std::invalid_argument("OUModel: dimension must be >= 1");
    if (m_ > spectrum_->max_dimension())
        throw std::invalid_argument("OUModel: spectrum provides only " + std::to_string(spectrum_->max_dimension()) +
                                    " eigenvalues");
    lambdas_ = spectrum_->first(m_);
}

OUModel OUModel::diagonal(std::vector<double> lambdas, KernelScale scale) {
    if (lambdas.empty()) throw std::invalid_argument("OUModel: dimension must be >= 1");
    for (double l : lambdas)
        if (!(l > 0.0) || !std::isfinite(l)) throw std::invalid_argument("OUModel: eigenvalues must be positive");
    OUModel model;
    model.m_ = static_cast<int>(lambdas.size());
    model.scale_ = scale;
    model.lambdas_ = std::move(lambdas);
    return model;
}

const Spectrum& OUModel::spectrum() const {
    if (!spectrum_) throw std::logic_error("OUModel: diagonal model has no Spectrum");
    return *spectrum_;
}

void GradientVector::recompute_norm() {
    norm_sq = 0.0;
    for (double g : components) norm_sq += g * g;
}

namespace {

// Horizon for t-integrals; the neglected tail carries a factor e^{-40}.
constexpr double kHorizon = 40.0;

struct TimeState {
    std::vector<double> decay;  // e^{-lambda_k t}
    std::vector<double> c;      // c_k(t)
    std::vector<double> c2;
};

TimeState time_state(const OUModel& model, double t) {
    TimeState s;
    const auto& lam = model.lambdas();
    s.decay.resize(lam.size());
    s.c.resize(lam.size());
    s.c2.resize(lam.size());
    for (std::size_t k = 0; k < lam.size(); ++k) {
        s.decay[k] = std::exp(-lam[k] * t);
        s.c2[k] = cov_scalar_sq(lam[k], t);
        s.c[k] = std::sqrt(s.c2[k]);
    }
    return s;
}

void check_dims(const OUModel& model, const FieldFunction& f, std::span<const double> x) {
    if (f.dim() != model.dim()) throw std::invalid_argument("ousolver: function dimension differs from model dimension");
    if (static_cast<int>(x.size()) != model.dim()) throw std::invalid_argument("ousolver: point dimension mismatch");
}

QuadratureSpec tighter(const QuadratureSpec& spec) {
    QuadratureSpec s = spec.regular();
    s.rel_tol = spec.rel_tol * 0.1;
    s.abs_tol = spec.abs_tol * 0.1;
    return s;
}

// ---- cylindrical fast path: f(x) = F(<w, x>) ----

struct Shift {
    double a;
    double sigma;
};

Shift cyl_shift(const CylindricalFn& f, const TimeState& s, std::span<const double> x) {
    const auto& w = f.direction();
    double a = 0.0;
    double v = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        a += w[k] * s.decay[k] * x[k];
        v += w[k] * w[k] * s.c2[k];
    }
    return {a, std::sqrt(v)};
}

std::vector<double> shifted_knots(const Profile1D& F, double a, double sigma) {
    std::vector<double> out;
    for (double q : F.knots()) out.push_back((q - a) / sigma);
    return out;
}

// E F(a + sigma Z)
double profile_expect(const Profile1D& F, double a, double sigma, const QuadratureSpec& spec, bool& ok,
                      double& err) {
    if (sigma == 0.0) return F(a);
    const auto br = shifted_knots(F, a, sigma);
    const QuadResult r = gaussian_expectation([&](double z) { return F(a + sigma * z); }, spec, br);
    ok = ok && r.converged;
    err += r.error_estimate;
    return r.value;
}

// E[Z F(a + sigma Z)]
double stein_moment(const Profile1D& F, double a, double sigma, const QuadratureSpec& spec, bool& ok, double& err) {
    if (sigma == 0.0) return 0.0;
    if (F.is_sign()) return 2.0 * normal_pdf(a / sigma);
    // E[Z] = 0, so centring at F(a) removes the cancellation between plateaus
    const auto br = shifted_knots(F, a, sigma);
    const double fa = F(a);
    const QuadResult r = gaussian_expectation([&](double z) { return z * (F(a + sigma * z) - fa); }, spec, br);
    ok = ok && r.converged;
    err += r.error_estimate;
    return r.value;
}

// ---- general path: nested tensor quadrature for m <= 3 ----

double nested_expectation(int m, const std::function<double(std::span<const double>)>& g,
                          const QuadratureSpec& spec, bool& ok, double& err) {
    if (m > 3) throw std::invalid_argument("ousolver: tensor quadrature is limited to m <= 3; use MC or a cylindrical function");
    std::vector<double> z(static_cast<std::size_t>(m), 0.0);
    std::function<double(int)> level = [&](int i) -> double {
        if (i == m) return g(z);
        const QuadResult r = gaussian_expectation(
            [&, i](double zi) {
                z[static_cast<std::size_t>(i)] = zi;
                return level(i + 1);
            },
            spec);
        if (i == 0) err += r.error_estimate;
        ok = ok && r.converged;
        return r.value;
    };
    return level(0);
}

// ---- Monte Carlo building blocks ----

template <class Sample>
MCEstimate run_mc(const MCMethod& mc, int m, Sample&& sample) {
    if (mc.n < 2) throw std::invalid_argument("ousolver: MC requires n >= 2");
    RngStream rng = mc.rng;
    RunningStats st;
    std::vector<double> z(static_cast<std::size_t>(m));
    const std::uint64_t terms = mc.antithetic ? mc.n / 2 : mc.n;
    for (std::uint64_t i = 0; i < terms; ++i) st.add(sample(rng, z));
    return st.estimate(mc.rng);
}

Estimate from_mc(const MCEstimate& e, bool antithetic) {
    return {e.mean, e.std_error, true, antithetic ? 2 * e.n : e.n, "mc"};
}

Estimate from_quad(double value, double err, bool ok) { return {value, err, ok, 0, "quad"}; }

double semigroup_quad(const OUModel& model, const FieldFunction& f, double t, std::span<const double> x,
                      const QuadratureSpec& spec, bool& ok, double& err) {
    const TimeState s = time_state(model, t);
    if (const CylindricalFn* cyl = f.cylindrical()) {
        const Shift sh = cyl_shift(*cyl, s, x);
        return profile_expect(cyl->profile(), sh.a, sh.sigma, spec, ok, err);
    }
    const int m = model.dim();
    std::vector<double> base(static_cast<std::size_t>(m)), y(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) base[k] = s.decay[k] * x[k];
    if (t == 0.0) return f(base);
    return nested_expectation(
        m,
        [&](std::span<const double> z) {
            for (int k = 0; k < m; ++k) y[k] = base[k] + s.c[k] * z[k];
            return f(y);
        },
        spec, ok, err);
}

double grad_semigroup_quad(const OUModel& model, const FieldFunction& f, double t, std::span<const double> x,
                           std::span<const double> h, const QuadratureSpec& spec, bool& ok, double& err) {
    const TimeState s = time_state(model, t);
    const int m = model.dim();
    if (const CylindricalFn* cyl = f.cylindrical()) {
        const Shift sh = cyl_shift(*cyl, s, x);
        const auto& w = cyl->direction();
        double lead = 0.0;
        for (int k = 0; k < m; ++k) lead += s.decay[k] * h[k] * w[k];
        double e = 0.0;
        const double mom = stein_moment(cyl->profile(), sh.a, sh.sigma, spec, ok, e);
        err += std::abs(lead / sh.sigma) * e;
        return lead / sh.sigma * mom;
    }
    std::vector<double> base(static_cast<std::size_t>(m)), y(static_cast<std::size_t>(m)), lam_h(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        base[k] = s.decay[k] * x[k];
        lam_h[k] = s.decay[k] / s.c[k] * h[k];
    }
    return nested_expectation(
        m,
        [&](std::span<const double> z) {
            double wgt = 0.0;
            for (int k = 0; k < m; ++k) {
                y[k] = base[k] + s.c[k] * z[k];
                wgt += lam_h[k] * z[k];
            }
            return wgt == 0.0 ? 0.0 : wgt * f(y);
        },
        spec, ok, err);
}

std::vector<double> geometric_breaks(double top, double lambda_max) {
    std::vector<double> br;
    const double floor_s = 0.05 / std::sqrt(lambda_max + 1.0);
    for (double s = top * 0.5; s > floor_s; s *= 0.5) br.push_back(s);
    return br;
}

}  // namespace

Estimate semigroup_apply(const OUModel& model, const FieldFunction& f, double t, std::span<const double> x,
                         const Method& method) {
    check_dims(model, f, x);
    if (!(t >= 0.0)) throw std::invalid_argument("semigroup_apply: t must be >= 0");
    if (t == 0.0) return {f(x), 0.0, true, 0, "exact"};
    if (const auto* q = std::get_if<QuadMethod>(&method)) {
        bool ok = true;
        double err = 0.0;
        const double v = semigroup_quad(model, f, t, x, q->spec, ok, err);
        return from_quad(v, err, ok);
    }
    const auto& mc = std::get<MCMethod>(method);
    const int m = model.dim();
    const TimeState s = time_state(model, t);
    std::vector<double> base(m), y1(m), y2(m);
    for (int k = 0; k < m; ++k) base[k] = s.decay[k] * x[k];
    const MCEstimate e = run_mc(mc, m, [&](RngStream& rng, std::vector<double>& z) {
        for (int k = 0; k < m; ++k) z[k] = rng.normal();
        for (int k = 0; k < m; ++k) {
            y1[k] = base[k] + s.c[k] * z[k];
            y2[k] = base[k] - s.c[k] * z[k];
        }
        return mc.antithetic ? 0.5 * (f(y1) + f(y2)) : f(y1);
    });
    return from_mc(e, mc.antithetic);
}

Estimate resolvent_apply(const OUModel& model, const FieldFunction& f, std::span<const double> x,
                         const Method& method) {
    check_dims(model, f, x);
    if (const auto* q = std::get_if<QuadMethod>(&method)) {
        bool ok = true;
        double inner_err = 0.0;
        const QuadratureSpec inner = tighter(q->spec);
        const QuadResult r = integrate(
            [&](double t) {
                double e = 0.0;
                const double v = semigroup_quad(model, f, t, x, inner, ok, e);
                return std::exp(-t) * v;
            },
            0.0, kInf, q->spec.regular());
        (void)inner_err;
        return from_quad(r.value, r.error_estimate, r.converged && ok);
    }
    const auto& mc = std::get<MCMethod>(method);
    const int m = model.dim();
    std::vector<double> y1(m), y2(m);
    const MCEstimate e = run_mc(mc, m, [&](RngStream& rng, std::vector<double>& z) {
        const double t = -std::log(rng.uniform());
        const TimeState s = time_state(model, t);
        for (int k = 0; k < m; ++k) z[k] = rng.normal();
        for (int k = 0; k < m; ++k) {
            y1[k] = s.decay[k] * x[k] + s.c[k] * z[k];
            y2[k] = s.decay[k] * x[k] - s.c[k] * z[k];
        }
        return mc.antithetic ? 0.5 * (f(y1) + f(y2)) : f(y1);
    });
    return from_mc(e, mc.antithetic);
}

Estimate grad_semigroup(const OUModel& model, const FieldFunction& f, double t, std::span<const double> x,
                        std::span<const double> h, const Method& method) {
    check_dims(model, f, x);
    if (static_cast<int>(h.size()) != model.dim()) throw std::invalid_argument("grad_semigroup: direction dimension mismatch");
    if (!(t > 0.0)) throw std::invalid_argument("grad_semigroup: t must be > 0 (the kernel is singular at t = 0)");
    if (const auto* q = std::get_if<QuadMethod>(&method)) {
        bool ok = true;
        double err = 0.0;
        const double v = grad_semigroup_quad(model, f, t, x, h, q->spec, ok, err);
        return from_quad(v, err, ok);
    }
    const auto& mc = std::get<MCMethod>(method);
    const int m = model.dim();
    const TimeState s = time_state(model, t);
    std::vector<double> base(m), lam_h(m), y1(m), y2(m);
    for (int k = 0; k < m; ++k) {
        base[k] = s.decay[k] * x[k];
        lam_h[k] = s.decay[k] / s.c[k] * h[k];
    }
    const MCEstimate e = run_mc(mc, m, [&](RngStream& rng, std::vector<double>& z) {
        double wgt = 0.0;
        for (int k = 0; k < m; ++k) {
            z[k] = rng.normal();
            wgt += lam_h[k] * z[k];
            y1[k] = base[k] + s.c[k] * z[k];
            y2[k] = base[k] - s.c[k] * z[k];
        }
        return mc.antithetic ? 0.5 * wgt * (f(y1) - f(y2)) : wgt * f(y1);
    });
    return from_mc(e, mc.antithetic);
}

Estimate grad_resolvent(const OUModel& model, const FieldFunction& f, std::span<const double> x,
                        std::span<const double> h, const Method& method) {
    check_dims(model, f, x);
    if (static_cast<int>(h.size()) != model.dim()) throw std::invalid_argument("grad_resolvent: direction dimension mismatch");
    if (const auto* q = std::get_if<QuadMethod>(&method)) {
        bool ok = true;
        const QuadratureSpec inner = tighter(q->spec);
        const QuadResult r = integrate(
            [&](double t) {
                double e = 0.0;
                return std::exp(-t) * grad_semigroup_quad(model, f, t, x, h, inner, ok, e);
            },
            0.0, kInf, q->spec.regular().with_left(EndpointSingularity::algebraic(-0.5)));
        return from_quad(r.value, r.error_estimate, r.converged && ok);
    }
    const auto& mc = std::get<MCMethod>(method);
    const int m = model.dim();
    const double sqrt_pi = std::sqrt(kPi);
    std::vector<double> y1(m), y2(m);
    const MCEstimate e = run_mc(mc, m, [&](RngStream& rng, std::vector<double>& z) {
        // t ~ Gamma(1/2, 1) via t = Z0^2 / 2; importance weight e^{-t} / p(t) = sqrt(pi t).
        const double z0 = rng.normal();
        const double t = 0.5 * z0 * z0;
        const TimeState s = time_state(model, t);
        double wgt = 0.0;
        for (int k = 0; k < m; ++k) {
            z[k] = rng.normal();
            wgt += s.decay[k] / s.c[k] * h[k] * z[k];
            y1[k] = s.decay[k] * x[k] + s.c[k] * z[k];
            y2[k] = s.decay[k] * x[k] - s.c[k] * z[k];
        }
        const double iw = sqrt_pi * std::sqrt(t);
        return mc.antithetic ? 0.5 * iw * wgt * (f(y1) - f(y2)) : iw * wgt * f(y1);
    });
    return from_mc(e, mc.antithetic);
}

GradientVector grad_resolvent_vector(const OUModel& model, const FieldFunction& f, std::span<const double> x,
                                     const Method& method) {
    check_dims(model, f, x);
    const int m = model.dim();
    GradientVector out;
    out.components.assign(m, 0.0);
    out.errors.assign(m, 0.0);

    const auto* q = std::get_if<QuadMethod>(&method);
    const CylindricalFn* cyl = f.cylindrical();
    if (q && cyl) {
        // t = s^2 on (0, sqrt(T)); the integrand in s is bounded at 0.
        const QuadratureSpec inner = tighter(q->spec);
        const auto& w = cyl->direction();
        bool ok = true;
        const auto& lam = model.lambdas();
        const double top = std::sqrt(kHorizon);
        const auto br = geometric_breaks(top, *std::max_element(lam.begin(), lam.end()));
        const VectorQuadResult r = integrate_vector(
            [&](double sv, std::span<double> outv) {
                const double t = sv * sv;
                const TimeState s = time_state(model, t);
                const Shift sh = cyl_shift(*cyl, s, x);
                double e = 0.0;
                const double mom = stein_moment(cyl->profile(), sh.a, sh.sigma, inner, ok, e);
                const double common = 2.0 * sv * std::exp(-t) * mom / sh.sigma;
                for (int k = 0; k < m; ++k) outv[k] = common * s.decay[k] * w[k];
            },
            static_cast<std::size_t>(m), 0.0, top, q->spec.regular(), br);
        const double sup = f.sup_bound();
        for (int k = 0; k < m; ++k) {
            const double tail = sup * std::sqrt(2.0 / kPi) * std::exp(-kHorizon * (1.0 + lam[k])) /
                                std::sqrt(cov_scalar_sq(lam[k], kHorizon));
            out.components[k] = r.values[k];
            out.errors[k] = r.errors[k] + tail;
        }
        out.converged = r.converged && ok;
        out.method = "quad";
    } else if (q) {
        std::vector<double> h(m, 0.0);
        out.converged = true;
        for (int k = 0; k < m; ++k) {
            std::fill(h.begin(), h.end(), 0.0);
            h[k] = 1.0;
            const Estimate e = grad_resolvent(model, f, x, h, method);
            out.components[k] = e.value;
            out.errors[k] = e.error;
            out.converged = out.converged && e.converged;
        }
        out.method = "quad";
    } else {
        const auto& mc = std::get<MCMethod>(method);
        if (mc.n < 2) throw std::invalid_argument("ousolver: MC requires n >= 2");
        RngStream rng = mc.rng;
        std::vector<RunningStats> st(m);
        std::vector<double> z(m), y1(m), y2(m);
        const double sqrt_pi = std::sqrt(kPi);
        const std::uint64_t terms = mc.antithetic ? mc.n / 2 : mc.n;
        for (std::uint64_t i = 0; i < terms; ++i) {
            const double z0 = rng.normal();
            const double t = 0.5 * z0 * z0;
            const TimeState s = time_state(model, t);
            for (int k = 0; k < m; ++k) {
                z[k] = rng.normal();
                y1[k] = s.decay[k] * x[k] + s.c[k] * z[k];
                y2[k] = s.decay[k] * x[k] - s.c[k] * z[k];
            }
            const double fv = mc.antithetic ? 0.5 * (f(y1) - f(y2)) : f(y1);
            const double iw = sqrt_pi * std::sqrt(t);
            for (int k = 0; k < m; ++k) st[k].add(iw * s.decay[k] / s.c[k] * z[k] * fv);
        }
        for (int k = 0; k < m; ++k) {
            const MCEstimate e = st[k].estimate(mc.rng);
            out.components[k] = e.mean;
            out.errors[k] = e.std_error;
        }
        out.method = "mc";
    }
    out.recompute_norm();
    return out;
}

GradientVector sqrtA_grad_resolvent_zero(const OUModel& model, const FieldFunction& f, const Method& method) {
    const int m = model.dim();
    if (f.dim() != m) throw std::invalid_argument("sqrtA_grad_resolvent_zero: dimension mismatch");
    if (std::isinf(f.sup_bound()) && !f.formula_test())
        throw std::invalid_argument("sqrtA_grad_resolvent_zero: f must be bounded");
    const auto& lam = model.lambdas();
    const double radial_scale = model.kernel_scale() == KernelScale::derived ? std::sqrt(2.0) : 1.0;

    GradientVector out;
    out.kernel_scale = model.kernel_scale();
    out.components.assign(m, 0.0);
    out.errors.assign(m, 0.0);

    const auto* q = std::get_if<QuadMethod>(&method);
    const CylindricalFn* cyl = f.cylindrical();
    if (q && cyl) {
        const Profile1D& F = cyl->profile();
        const auto& w = cyl->direction();
        const QuadratureSpec inner = tighter(q->spec);
        bool ok = true;
        // I_{m,k}(F; v) / (v_k / |v|) as a function of r = |v|.
        auto kernel = [&](double r) {
            if (m == 1) {
                double e = 0.0;
                return stein_moment(F, 0.0, r, inner, ok, e);
            }
            const QuadResult res = F.odd() ? odd_kernel(m, r, F, inner) : radial_kernel(m, r, F, inner);
            ok = ok && res.converged;
            return res.value;
        };
        const double top = std::sqrt(kHorizon);
        const auto br = geometric_breaks(top, *std::max_element(lam.begin(), lam.end()));
        std::vector<double> v(m);
        const VectorQuadResult r = integrate_vector(
            [&](double sv, std::span<double> outv) {
                const double t = sv * sv;
                double r2 = 0.0;
                for (int k = 0; k < m; ++k) {
                    v[k] = w[k] * std::sqrt(cov_scalar_sq(lam[k], t));
                    r2 += v[k] * v[k];
                }
                const double rn = std::sqrt(r2);
                const double g = kernel(rn);
                for (int k = 0; k < m; ++k) {
                    const double weight = radial_scale * lam[k] * std::exp(-lam[k] * t) /
                                          std::sqrt(one_minus_exp(2.0 * lam[k] * t));
                    outv[k] = 2.0 * sv * std::exp(-t) * weight * (v[k] / rn) * g;
                }
            },
            static_cast<std::size_t>(m), 0.0, top, q->spec.regular(), br);
        for (int k = 0; k < m; ++k) {
            const double tail = radial_scale * lam[k] * std::exp(-(1.0 + lam[k]) * kHorizon) /
                                std::sqrt(one_minus_exp(2.0 * lam[k] * kHorizon)) / (1.0 + lam[k]) *
                                f.sup_bound() * std::sqrt(2.0 / kPi);
            out.components[k] = r.values[k];
            out.errors[k] = r.errors[k] + tail;
        }
        out.converged = r.converged && ok;
        out.method = "quad";
    } else if (q) {
        const std::vector<double> zero(m, 0.0);
        GradientVector g = grad_resolvent_vector(model, f, zero, method);
        const double factor = kernel_scale_factor(model.kernel_scale());
        for (int k = 0; k < m; ++k) {
            out.components[k] = factor * std::sqrt(lam[k]) * g.components[k];
            out.errors[k] = factor * std::sqrt(lam[k]) * g.errors[k];
        }
        out.converged = g.converged;
        out.method = "quad";
    } else {
        const auto& mc = std::get<MCMethod>(method);
        if (mc.n < 2) throw std::invalid_argument("ousolver: MC requires n >= 2");
        RngStream rng = mc.rng;
        std::vector<RunningStats> st(m);
        std::vector<double> xs(m), y1(m), y2(m), weight(m);
        const double sqrt_pi = std::sqrt(kPi);
        const std::uint64_t terms = mc.antithetic ? mc.n / 2 : mc.n;
        for (std::uint64_t i = 0; i < terms; ++i) {
            const double z0 = rng.normal();
            const double t = 0.5 * z0 * z0;
            for (int k = 0; k < m; ++k) {
                xs[k] = rng.normal();
                const double ck = std::sqrt(cov_scalar_sq(lam[k], t));
                y1[k] = ck * xs[k];
                y2[k] = -y1[k];
                weight[k] = radial_scale * lam[k] * std::exp(-lam[k] * t) / std::sqrt(one_minus_exp(2.0 * lam[k] * t));
            }
            const double fv = mc.antithetic ? 0.5 * (f(y1) - f(y2)) : f(y1);
            const double iw = sqrt_pi * std::sqrt(t);
            for (int k = 0; k < m; ++k) st[k].add(iw * weight[k] * xs[k] * fv);
        }
        for (int k = 0; k < m; ++k) {
            const MCEstimate e = st[k].estimate(mc.rng);
            out.components[k] = e.mean;
            out.errors[k] = e.std_error;
        }
        out.method = "mc";
    }
    out.recompute_norm();
    return out;
}

ScalarSup scalar_grad_sup(const OUModel& model, const FieldFunction& f,
                          const std::vector<std::vector<double>>& x_grid, const Method& method) {
    if (!model.has_spectrum() || model.spectrum().kind() != Spectrum::Kind::constant)
        throw std::invalid_argument("scalar_grad_sup: requires a constant spectrum");
    if (x_grid.empty()) throw std::invalid_argument("scalar_grad_sup: empty grid");
    const double root_lambda = std::sqrt(model.lambda(1));
    ScalarSup best;
    best.value = -1.0;
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        const GradientVector g = grad_resolvent_vector(model, f, x_grid[i], method);
        double err2 = 0.0;
        for (double e : g.errors) err2 += e * e;
        const double value = root_lambda * std::sqrt(g.norm_sq);
        best.converged = best.converged && g.converged;
        if (value > best.value) {
            best.value = value;
            best.error = root_lambda * std::sqrt(err2);
            best.argmax = i;
        }
    }
    return best;
}

}  // namespace oulab
