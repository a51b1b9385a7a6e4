#pragma once

// Brute-force validators: direct Monte Carlo in R^m, finite differences and
// a grid residual of u - (1/2) Lap u + sum_k lambda_k x_k D_k u - f.

#include "oulab/gaussian.hpp"
#include "oulab/spectrum.hpp"
#include "oulab/testfn.hpp"

#include <functional>
#include <span>
#include <vector>

namespace oulab {

using ScalarField = std::function<double(std::span<const double>)>;

/// Plain Monte Carlo of E[F(<c, X>) X_k], X ~ N(0, I_m). With `antithetic`
/// each term averages the pair (X, -X); n counts function evaluations.
MCEstimate mc_gaussian_integral_mk(const Profile1D& profile, std::span<const double> c, int m, int k,
                                   std::uint64_t n, const RngStream& rng, bool antithetic = true);

/// (g(x + eps h) - g(x - eps h)) / (2 eps).
double fd_gradient(const ScalarField& g, std::span<const double> x, std::span<const double> h, double eps);

/// max over the grid of |u - (1/2) sum_k D_kk u + sum_k lambda_k x_k D_k u - f|
/// with central differences of step eps; m <= 2.
double pde_residual(const ScalarField& u, const ScalarField& f, const Spectrum& spectrum, int m,
                    const std::vector<std::vector<double>>& grid, double eps);

}  // namespace oulab
