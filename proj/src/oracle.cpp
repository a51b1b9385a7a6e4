#include "oulab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oulab {

MCEstimate mc_gaussian_integral_mk(const Profile1D& profile, std::span<const double> c, int m, int k,
                                   std::uint64_t n, const RngStream& rng, bool antithetic) {
    if (m < 1 || static_cast<int>(c.size()) != m) throw std::invalid_argument("mc_gaussian_integral_mk: c must have m entries");
    if (k < 1 || k > m) throw std::invalid_argument("mc_gaussian_integral_mk: k must lie in [1, m]");
    if (n < 1000) throw std::invalid_argument("mc_gaussian_integral_mk: n must be >= 1000");
    RngStream stream = rng;
    RunningStats st;
    const std::uint64_t terms = antithetic ? n / 2 : n;
    for (std::uint64_t i = 0; i < terms; ++i) {
        double s = 0.0;
        double xk = 0.0;
        for (int j = 0; j < m; ++j) {
            const double z = stream.normal();
            s += c[j] * z;
            if (j == k - 1) xk = z;
        }
        const double v = profile(s) * xk;
        st.add(antithetic ? 0.5 * (v - profile(-s) * xk) : v);
    }
    return st.estimate(rng);
}

double fd_gradient(const ScalarField& g, std::span<const double> x, std::span<const double> h, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("fd_gradient: eps must be > 0");
    if (x.size() != h.size()) throw std::invalid_argument("fd_gradient: dimension mismatch");
    std::vector<double> xp(x.begin(), x.end()), xm(x.begin(), x.end());
    for (std::size_t i = 0; i < x.size(); ++i) {
        xp[i] += eps * h[i];
        xm[i] -= eps * h[i];
    }
    return (g(xp) - g(xm)) / (2.0 * eps);
}

double pde_residual(const ScalarField& u, const ScalarField& f, const Spectrum& spectrum, int m,
                    const std::vector<std::vector<double>>& grid, double eps) {
    if (m < 1 || m > 2) throw std::invalid_argument("pde_residual: m must be 1 or 2");
    if (!(eps > 0.0)) throw std::invalid_argument("pde_residual: eps must be > 0");
    const auto lam = spectrum.first(m);
    double worst = 0.0;
    std::vector<double> y;
    for (const auto& x : grid) {
        if (static_cast<int>(x.size()) != m) throw std::invalid_argument("pde_residual: grid point dimension mismatch");
        const double u0 = u(x);
        double lap = 0.0;
        double drift = 0.0;
        for (int k = 0; k < m; ++k) {
            y = x;
            y[k] = x[k] + eps;
            const double up = u(y);
            y[k] = x[k] - eps;
            const double um = u(y);
            lap += (up - 2.0 * u0 + um) / (eps * eps);
            drift += lam[k] * x[k] * (up - um) / (2.0 * eps);
        }
        worst = std::max(worst, std::abs(u0 - 0.5 * lap + drift - f(x)));
    }
    return worst;
}

}  // namespace oulab
