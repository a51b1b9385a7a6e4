#pragma once

// Divergence of the weighted gradient functional: the lower bound
//
//   D_m = (2/pi) sum_k ( \int_0^delta lambda_k e^{-lambda_k t} (1 - e^{-2 lambda_k t})^{-1/2} c_k(t)/|c(t)| dt )^2,
//
// its rewritten form (sqq) and the closed-form chain bound, witnesses for
// individual test functions, and harnesses for the scalar bound pi/sqrt(2)
// and the p = 2 contrast.

#include "oulab/gaussian.hpp"
#include "oulab/ousolver.hpp"
#include "oulab/specfun.hpp"
#include "oulab/spectrum.hpp"
#include "oulab/testfn.hpp"

#include <string>
#include <vector>

namespace oulab {

struct DivergenceRow {
    int m = 0;
    double delta = 1.0;
    double D_m = 0.0;
    double sqq_bound = 0.0;
    double chain_bound = 0.0;  // NaN when the spectrum has no c0 certificate
    double sqrt_harmonic = 0.0;
    KernelScale kernel_scale = KernelScale::derived;
    bool time_weighted = false;
    double D_m_error = 0.0;
    double sqq_error = 0.0;
    bool converged = true;
};

/// lambda_k e^{-lambda_k t} (1 - e^{-2 lambda_k t})^{-1/2} c_k(t) / |c(t)|, t > 0.
double divergence_integrand(const Spectrum& spectrum, int m, int k, double t);

/// D_m together with the sqq form and the chain bound. `derived` scale
/// multiplies every inner integral by sqrt(2), so all three members double.
/// `time_weighted` inserts e^{-t} under the integrals and e^{-2 delta} in
/// the chain bound.
DivergenceRow divergence_lower_bound(const Spectrum& spectrum, int m, double delta, bool time_weighted = false,
                                     KernelScale scale = KernelScale::derived, const QuadratureSpec& spec = {});

/// (1/pi) sqrt(c0/(2 pi)) (\int_0^{c0 delta} s^{-1/4} e^{-s} ds)^2 sum_{k<=m} lambda_k^{-1/2}.
/// Requires a spectrum certified with lambda_k >= c0' k^2 for some c0' >= c0.
double chain_bound(double c0, double delta, const Spectrum& spectrum, int m);

/// \int_0^x s^{-1/4} e^{-s} ds.
double chain_gamma_integral(double x);

struct WitnessResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

/// sum_k ( \int_0^delta lambda_k e^{-lambda_k t} (1 - e^{-2 lambda_k t})^{-1/2} I_{m,k}(F; c(t)) dt )^2
/// for the single function f(x) = F(x_1 + ... + x_m).
WitnessResult s_m_witness(const Profile1D& profile, const Spectrum& spectrum, int m, double delta,
                          const QuadratureSpec& spec = {});

struct ScalarCase {
    std::string name;
    Profile1D profile;
};

/// const 1, tanh, sin, smoothed step F_1 and sign, each applied to x_1.
std::vector<ScalarCase> default_scalar_suite();

/// Evenly spaced points on [-5, 5].
std::vector<double> default_scalar_grid(int points = 41);

struct ScalarRow {
    double lambda = 0.0;
    std::string f_name;
    int m = 1;
    double sup_value = 0.0;
    double error = 0.0;
    double bound = 0.0;
    bool pass = false;
};

/// For every lambda, case and m, the max over x = s e_1 (s on the grid) of
/// sqrt(lambda) |D u(x)|; pass iff value <= pi/sqrt(2) + 3 error.
std::vector<ScalarRow> scalar_bound_harness(const std::vector<double>& lambdas, const std::vector<ScalarCase>& cases,
                                            const std::vector<int>& ms, const std::vector<double>& grid,
                                            const QuadratureSpec& spec = {});

struct P2Row {
    int m = 0;
    double ratio = 0.0;
    double ratio_std_error = 0.0;
};

/// Monte Carlo estimate of \int |(-A)^{1/2} D u|^2 dmu / \int f^2 dmu over the
/// invariant measure mu = N(0, diag(1/(2 lambda_k))), f(x) = F(x_1 + ... + x_m).
std::vector<P2Row> p2_contrast(const Spectrum& spectrum, const std::vector<int>& ms, const Profile1D& profile,
                               std::uint64_t points, const RngStream& rng, const QuadratureSpec& spec = {});

/// Least-squares slope of ys against xs.
double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace oulab
