#include "oulab/bounds.hpp"

#include "oulab/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oulab {

namespace {

std::vector<double> geometric_breaks(double top, double lambda_max) {
    std::vector<double> br;
    const double floor_s = 0.05 / std::sqrt(lambda_max + 1.0);
    for (double s = top * 0.5; s > floor_s; s *= 0.5) br.push_back(s);
    return br;
}

double weight(double lambda, double t) { return lambda * std::exp(-lambda * t) / std::sqrt(one_minus_exp(2.0 * lambda * t)); }

void require_increasing(const Spectrum& spectrum, const char* who) {
    if (!spectrum.increasing())
        throw std::invalid_argument(std::string(who) +
                                    ": constant spectra are the scalar case, which obeys the dimension-free bound "
                                    "pi/sqrt(2); use scalar-bound instead");
}

QuadratureSpec tighter(const QuadratureSpec& spec) {
    QuadratureSpec s = spec.regular();
    s.rel_tol = spec.rel_tol * 0.1;
    s.abs_tol = spec.abs_tol * 0.1;
    return s;
}

}  // namespace

double divergence_integrand(const Spectrum& spectrum, int m, int k, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("divergence_integrand: t must be > 0");
    if (k < 1 || k > m) throw std::invalid_argument("divergence_integrand: k must lie in [1, m]");
    require_increasing(spectrum, "divergence_integrand");
    const auto lam = spectrum.first(m);
    const double norm = cov_norm(lam, t);
    const double ck = std::sqrt(cov_scalar_sq(lam[k - 1], t));
    return weight(lam[k - 1], t) * ck / norm;
}

double chain_gamma_integral(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("chain_gamma_integral: upper limit must be > 0");
    QuadratureSpec spec;
    spec.rel_tol = 1e-13;
    spec.abs_tol = 1e-15;
    const QuadResult r = integrate([](double s) { return std::pow(s, -0.25) * std::exp(-s); }, 0.0, x,
                                   spec.with_left(EndpointSingularity::algebraic(-0.25)));
    return r.value;
}

double chain_bound(double c0, double delta, const Spectrum& spectrum, int m) {
    if (!(c0 > 0.0) || !(delta > 0.0)) throw std::invalid_argument("chain_bound: c0 and delta must be > 0");
    const auto cert = spectrum.certified_c0();
    if (!cert) throw std::invalid_argument("chain_bound: spectrum carries no certificate lambda_k >= c0 k^2");
    if (c0 > *cert * (1.0 + 1e-15))
        throw std::invalid_argument("chain_bound: c0 exceeds the spectrum's certified constant");
    const double g = chain_gamma_integral(c0 * delta);
    return std::sqrt(c0 / (2.0 * kPi)) / kPi * g * g * sqrt_harmonic_sum(spectrum, m);
}

DivergenceRow divergence_lower_bound(const Spectrum& spectrum, int m, double delta, bool time_weighted,
                                     KernelScale scale, const QuadratureSpec& spec) {
    require_increasing(spectrum, "diverge");
    if (m < 2) throw std::invalid_argument("divergence_lower_bound: m must be >= 2");
    if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("divergence_lower_bound: delta must be > 0");
    spec.validate();

    const auto lam = spectrum.first(m);
    const std::size_t mm = lam.size();
    const double top = std::sqrt(delta);
    const auto br = geometric_breaks(top, lam.back());
    std::vector<double> ck(mm), decay(mm);

    // Components 0..m-1: literal integrand; m..2m-1: e^{-lambda_k t}/|c(t)|.
    // t = s^2, dt = 2 s ds.
    const VectorQuadResult r = integrate_vector(
        [&](double s, std::span<double> out) {
            const double t = s * s;
            double norm2 = 0.0;
            for (std::size_t k = 0; k < mm; ++k) {
                const double c2 = cov_scalar_sq(lam[k], t);
                ck[k] = std::sqrt(c2);
                decay[k] = std::exp(-lam[k] * t);
                norm2 += c2;
            }
            const double jac = 2.0 * s * (time_weighted ? std::exp(-t) : 1.0) / std::sqrt(norm2);
            for (std::size_t k = 0; k < mm; ++k) {
                const double w = lam[k] * decay[k] / std::sqrt(one_minus_exp(2.0 * lam[k] * t));
                out[k] = jac * w * ck[k];
                out[mm + k] = jac * decay[k];
            }
        },
        2 * mm, 0.0, top, spec.regular(), br);

    const double s2 = scale == KernelScale::derived ? 2.0 : 1.0;
    DivergenceRow row;
    row.m = m;
    row.delta = delta;
    row.kernel_scale = scale;
    row.time_weighted = time_weighted;
    row.converged = r.converged;
    double d = 0.0, de = 0.0, q = 0.0, qe = 0.0;
    for (std::size_t k = 0; k < mm; ++k) {
        const double j = r.values[k];
        const double kk = r.values[mm + k];
        d += j * j;
        de += 2.0 * std::abs(j) * r.errors[k];
        q += lam[k] * kk * kk;
        qe += 2.0 * lam[k] * std::abs(kk) * r.errors[mm + k];
    }
    row.D_m = s2 * 2.0 / kPi * d;
    row.D_m_error = s2 * 2.0 / kPi * de;
    row.sqq_bound = s2 / kPi * q;
    row.sqq_error = s2 / kPi * qe;
    row.sqrt_harmonic = sqrt_harmonic_sum(spectrum, m);
    if (const auto cert = spectrum.certified_c0()) {
        row.chain_bound = s2 * chain_bound(*cert, delta, spectrum, m) * (time_weighted ? std::exp(-2.0 * delta) : 1.0);
    } else {
        row.chain_bound = std::numeric_limits<double>::quiet_NaN();
    }
    return row;
}

WitnessResult s_m_witness(const Profile1D& profile, const Spectrum& spectrum, int m, double delta,
                          const QuadratureSpec& spec) {
    require_increasing(spectrum, "witness");
    if (m < 2) throw std::invalid_argument("witness: m must be >= 2 (the polar reduction needs two coordinates)");
    if (!(delta > 0.0)) throw std::invalid_argument("witness: delta must be > 0");
    if (profile.sup_bound() > 1.0) throw std::invalid_argument("witness: profile must satisfy |F| <= 1");
    spec.validate();

    const auto lam = spectrum.first(m);
    const std::size_t mm = lam.size();
    const QuadratureSpec inner = tighter(spec);
    bool ok = true;
    std::vector<double> ck(mm);
    const double top = std::sqrt(delta);
    const auto br = geometric_breaks(top, lam.back());
    const VectorQuadResult r = integrate_vector(
        [&](double s, std::span<double> out) {
            const double t = s * s;
            double norm2 = 0.0;
            for (std::size_t k = 0; k < mm; ++k) {
                const double c2 = cov_scalar_sq(lam[k], t);
                ck[k] = std::sqrt(c2);
                norm2 += c2;
            }
            const double norm = std::sqrt(norm2);
            const QuadResult g = profile.odd() ? odd_kernel(m, norm, profile, inner) : radial_kernel(m, norm, profile, inner);
            ok = ok && g.converged;
            for (std::size_t k = 0; k < mm; ++k) out[k] = 2.0 * s * weight(lam[k], t) * ck[k] / norm * g.value;
        },
        mm, 0.0, top, spec.regular(), br);

    WitnessResult w;
    w.converged = r.converged && ok;
    for (std::size_t k = 0; k < mm; ++k) {
        w.value += r.values[k] * r.values[k];
        w.error += 2.0 * std::abs(r.values[k]) * r.errors[k];
    }
    return w;
}

std::vector<ScalarCase> default_scalar_suite() {
    return {
        {"const:1", constant_profile(1.0)},
        {"tanh", tanh_profile()},
        {"sin", sin_profile()},
        {"step:n=1", make_smooth_step(1)},
        {"sign", sign_profile()},
    };
}

std::vector<double> default_scalar_grid(int points) {
    if (points < 2) throw std::invalid_argument("scalar grid needs at least 2 points");
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) g[i] = -5.0 + 10.0 * i / (points - 1);
    return g;
}

std::vector<ScalarRow> scalar_bound_harness(const std::vector<double>& lambdas, const std::vector<ScalarCase>& cases,
                                            const std::vector<int>& ms, const std::vector<double>& grid,
                                            const QuadratureSpec& spec) {
    if (cases.empty()) throw std::invalid_argument("scalar-bound: the function suite is empty");
    if (lambdas.empty()) throw std::invalid_argument("scalar-bound: no lambda values given");
    if (ms.empty()) throw std::invalid_argument("scalar-bound: no dimensions given");
    if (grid.empty()) throw std::invalid_argument("scalar-bound: empty grid");
    const double bound = kPi / std::sqrt(2.0);
    std::vector<ScalarRow> rows;
    for (double lambda : lambdas) {
        for (const auto& c : cases) {
            if (c.profile.sup_bound() > 1.0)
                throw std::invalid_argument("scalar-bound: case '" + c.name + "' is not bounded by 1");
            for (int m : ms) {
                const OUModel model(m, Spectrum::constant(lambda));
                std::vector<double> dir(static_cast<std::size_t>(m), 0.0);
                dir[0] = 1.0;
                const FieldFunction f(CylindricalFn(c.profile, dir));
                std::vector<std::vector<double>> pts;
                for (double s : grid) {
                    std::vector<double> x(static_cast<std::size_t>(m), 0.0);
                    x[0] = s;
                    pts.push_back(std::move(x));
                }
                const ScalarSup sup = scalar_grad_sup(model, f, pts, QuadMethod{spec});
                ScalarRow row;
                row.lambda = lambda;
                row.f_name = c.name;
                row.m = m;
                row.sup_value = sup.value;
                row.error = sup.error;
                row.bound = bound;
                row.pass = sup.converged && sup.value <= bound + 3.0 * sup.error;
                rows.push_back(row);
            }
        }
    }
    return rows;
}

std::vector<P2Row> p2_contrast(const Spectrum& spectrum, const std::vector<int>& ms, const Profile1D& profile,
                               std::uint64_t points, const RngStream& rng, const QuadratureSpec& spec) {
    if (points < 2) throw std::invalid_argument("p2-contrast: need at least 2 sample points");
    std::vector<P2Row> rows;
    for (int m : ms) {
        const OUModel model(m, spectrum);
        const auto& lam = model.lambdas();
        const FieldFunction f(CylindricalFn(profile, std::vector<double>(static_cast<std::size_t>(m), 1.0)));
        std::vector<double> var(lam.size());
        for (std::size_t k = 0; k < lam.size(); ++k) var[k] = 0.5 / lam[k];
        const GaussianDiag mu(var);
        RngStream stream = rng.substream(static_cast<std::uint64_t>(m));
        std::vector<double> x(lam.size());
        double sn = 0.0, sd = 0.0, snn = 0.0, sdd = 0.0, snd = 0.0;
        for (std::uint64_t i = 0; i < points; ++i) {
            mu.sample_into(stream, x);
            const GradientVector g = grad_resolvent_vector(model, f, x, QuadMethod{spec});
            double num = 0.0;
            for (std::size_t k = 0; k < lam.size(); ++k) num += lam[k] * g.components[k] * g.components[k];
            const double fv = f(x);
            const double den = fv * fv;
            sn += num;
            sd += den;
            snn += num * num;
            sdd += den * den;
            snd += num * den;
        }
        const double n = static_cast<double>(points);
        const double mn = sn / n;
        const double md = sd / n;
        if (!(md > 0.0)) throw std::invalid_argument("p2-contrast: f vanishes on the sample");
        const double ratio = mn / md;
        // Delta method for a ratio of means.
        const double vn = (snn - n * mn * mn) / (n - 1.0);
        const double vd = (sdd - n * md * md) / (n - 1.0);
        const double cnd = (snd - n * mn * md) / (n - 1.0);
        const double v = std::max(0.0, (vn - 2.0 * ratio * cnd + ratio * ratio * vd) / (md * md * n));
        rows.push_back({m, ratio, std::sqrt(v)});
    }
    return rows;
}

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("least_squares_slope: need >= 2 paired points");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx == 0.0) throw std::invalid_argument("least_squares_slope: degenerate abscissae");
    return sxy / sxx;
}

}  // namespace oulab
