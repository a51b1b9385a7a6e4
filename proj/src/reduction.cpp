#include "oulab/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace oulab {

void ReductionTask::validate() const {
    if (m < 2) throw std::invalid_argument("reduction: m must be >= 2");
    if (k < 1 || k > m) throw std::invalid_argument("reduction: k must lie in [1, m]");
    if (static_cast<int>(c.size()) != m) throw std::invalid_argument("reduction: c must have m entries");
    if (!(norm() > 0.0)) throw std::invalid_argument("reduction: c must be nonzero");
}

double ReductionTask::norm() const {
    double s = 0.0;
    for (double v : c) s += v * v;
    return std::sqrt(s);
}

double ReductionTask::direction_cosine() const { return c[k - 1] / norm(); }

double log_prefactor(int m) {
    if (m < 2) throw std::invalid_argument("log_prefactor: m must be >= 2");
    const double md = static_cast<double>(m);
    return std::log(2.0 * kPi) + 0.5 * (md - 3.0) * std::log(kPi) - 0.5 * md * std::log(2.0 * kPi) -
           log_gamma(0.5 * (md - 1.0));
}

namespace {

struct RadialSetup {
    double log_pref;
    double rho_max;
    std::vector<double> rho_breaks;
    QuadratureSpec inner;
    QuadratureSpec outer;
};

RadialSetup setup(int m, double r, const Profile1D& profile, const QuadratureSpec& spec) {
    if (m < 2) throw std::invalid_argument("reduction: m must be >= 2");
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("reduction: |c| must be positive");
    spec.validate();
    RadialSetup s;
    s.log_pref = log_prefactor(m);
    s.rho_max = std::sqrt(static_cast<double>(m)) + 12.0;
    s.rho_breaks.push_back(std::sqrt(static_cast<double>(m)));
    for (double q : profile.knots()) {
        const double rho = std::abs(q) / r;
        if (rho > 0.0 && rho < s.rho_max) s.rho_breaks.push_back(rho);
    }
    s.outer = spec.regular();
    s.inner = spec.regular();
    s.inner.rel_tol = spec.rel_tol * 0.1;
    s.inner.abs_tol = spec.abs_tol * 0.01;
    return s;
}

// Rigorous bound on \int_R^inf exp(logc + m ln rho - rho^2/2) drho for R^2 > m:
// the log-integrand has slope <= m/R - R beyond R.
double radial_tail_bound(double log_c, int m, double big_r) {
    const double md = static_cast<double>(m);
    const double rate = big_r - md / big_r;
    return std::exp(log_c + md * std::log(big_r) - 0.5 * big_r * big_r) / rate;
}

}  // namespace

QuadResult radial_kernel(int m, double r, const Profile1D& profile, const QuadratureSpec& spec) {
    const RadialSetup s = setup(m, r, profile, spec);
    const double md = static_cast<double>(m);
    bool inner_ok = true;
    std::vector<double> th_breaks;
    auto outer = [&](double rho) {
        const double rr = r * rho;
        th_breaks.assign(1, 0.5 * kPi);
        for (double q : profile.knots())
            if (std::abs(q) < rr) th_breaks.push_back(std::acos(q / rr));
        const QuadResult in = integrate(
            [&](double th) {
                const double ct = std::cos(th);
                const double st = std::sin(th);
                const double w = (m == 2) ? ct : ct * std::pow(st, md - 2.0);
                return w * profile(rr * ct);
            },
            0.0, kPi, s.inner, th_breaks);
        inner_ok = inner_ok && in.converged;
        return std::exp(s.log_pref + md * std::log(rho) - 0.5 * rho * rho) * in.value;
    };
    QuadResult out = integrate(outer, 0.0, s.rho_max, s.outer, s.rho_breaks);
    out.error_estimate += kPi * profile.sup_bound() * radial_tail_bound(s.log_pref, m, s.rho_max);
    out.converged = out.converged && inner_ok;
    return out;
}

QuadResult odd_kernel(int m, double r, const Profile1D& profile, const QuadratureSpec& spec) {
    if (!profile.odd()) throw std::invalid_argument("odd_reduce: profile '" + profile.name() + "' is not odd");
    const RadialSetup s = setup(m, r, profile, spec);
    const double md = static_cast<double>(m);
    const double expo = 0.5 * (md - 3.0);
    const double log2pref = s.log_pref + std::log(2.0);
    bool inner_ok = true;
    std::vector<double> x_breaks;
    auto outer = [&](double rho) {
        const double rr = r * rho;
        x_breaks.clear();
        for (double q : profile.knots())
            if (q > 0.0 && q < rr) x_breaks.push_back(m == 2 ? std::asin(q / rr) : q / rr);
        // m = 2: x = sin(th) removes the (1 - x^2)^{-1/2} endpoint singularity
        const QuadResult in =
            (m == 2) ? integrate([&](double th) { return std::sin(th) * profile(rr * std::sin(th)); }, 0.0, kPi / 2.0,
                                 s.inner, x_breaks)
                     : integrate(
                           [&](double x) {
                               const double w = (m == 3) ? x : x * std::pow((1.0 - x) * (1.0 + x), expo);
                               return w * profile(rr * x);
                           },
                           0.0, 1.0, s.inner, x_breaks);
        inner_ok = inner_ok && in.converged;
        return std::exp(log2pref + md * std::log(rho) - 0.5 * rho * rho) * in.value;
    };
    QuadResult out = integrate(outer, 0.0, s.rho_max, s.outer, s.rho_breaks);
    out.error_estimate += profile.sup_bound() * radial_tail_bound(log2pref, m, s.rho_max);
    out.converged = out.converged && inner_ok;
    return out;
}

QuadResult radial_reduce(const ReductionTask& task, const QuadratureSpec& spec) {
    task.validate();
    QuadResult out = radial_kernel(task.m, task.norm(), task.profile, spec);
    const double cosine = task.direction_cosine();
    out.value *= cosine;
    out.error_estimate *= std::abs(cosine);
    return out;
}

QuadResult odd_reduce(const ReductionTask& task, const QuadratureSpec& spec) {
    task.validate();
    QuadResult out = odd_kernel(task.m, task.norm(), task.profile, spec);
    const double cosine = task.direction_cosine();
    out.value *= cosine;
    out.error_estimate *= std::abs(cosine);
    return out;
}

double sign_closed_form(std::span<const double> c, int k) {
    if (k < 1 || static_cast<std::size_t>(k) > c.size()) throw std::invalid_argument("sign_closed_form: k out of range");
    double s = 0.0;
    for (double v : c) s += v * v;
    if (!(s > 0.0)) throw std::invalid_argument("sign_closed_form: c must be nonzero");
    return std::sqrt(2.0 / kPi) * c[k - 1] / std::sqrt(s);
}

}  // namespace oulab
