#pragma once

// Rank-one Gaussian integrals
//
//   I_{m,k}(F; c) = (2 pi)^(-m/2) \int_{R^m} F(<c, x>) x_k exp(-|x|^2 / 2) dx
//
// reduced to a two dimensional (rho, theta) integral by polar coordinates
// aligned with c. Only the prefactor c_k / |c| depends on k, so the
// "kernel" functions below return I_{m,k} / (c_k / |c|) as a function of
// r = |c| and can be shared across coordinates.

#include "oulab/specfun.hpp"
#include "oulab/testfn.hpp"

#include <span>
#include <vector>

namespace oulab {

struct ReductionTask {
    int m = 2;
    int k = 1;  // 1-based
    std::vector<double> c;
    Profile1D profile = sign_profile();

    void validate() const;
    double direction_cosine() const;  // c_k / |c|
    double norm() const;              // |c|
};

/// ln of 2 pi sqrt(pi)^(m-3) / ((2 pi)^(m/2) Gamma((m-1)/2)), m >= 2.
double log_prefactor(int m);

/// prefactor * \int_0^inf \int_0^pi e^{-rho^2/2} rho^m cos(th) sin(th)^(m-2) F(r rho cos th) dth drho.
QuadResult radial_kernel(int m, double r, const Profile1D& profile, const QuadratureSpec& spec = {});

/// Half-domain form for odd F:
/// 2 * prefactor * \int_0^inf e^{-rho^2/2} rho^m \int_0^1 x (1-x^2)^((m-3)/2) F(r rho x) dx drho.
QuadResult odd_kernel(int m, double r, const Profile1D& profile, const QuadratureSpec& spec = {});

QuadResult radial_reduce(const ReductionTask& task, const QuadratureSpec& spec = {});
QuadResult odd_reduce(const ReductionTask& task, const QuadratureSpec& spec = {});

/// I_{m,k}(F0; c) = sqrt(2/pi) c_k / |c|.
double sign_closed_form(std::span<const double> c, int k);

}  // namespace oulab
