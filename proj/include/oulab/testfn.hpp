#pragma once

// Bounded scalar profiles F and cylindrical functions x -> F(<c, x>).

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace oulab {

enum class Smoothness { measurable, c1, c2, smooth };

/// A scalar profile R -> R with a certified sup bound. `knots` lists the
/// points where the profile fails to be smooth; quadrature routines split
/// their panels there.
class Profile1D {
public:
    using Fn = std::function<double(double)>;

    Profile1D(std::string name, Fn eval, double sup_bound, bool odd, Smoothness smoothness,
              std::vector<double> knots = {});

    double operator()(double x) const { return eval_(x); }
    const std::string& name() const { return name_; }
    double sup_bound() const { return sup_bound_; }
    bool odd() const { return odd_; }
    Smoothness smoothness() const { return smoothness_; }
    const std::vector<double>& knots() const { return knots_; }
    /// True for the sign profile F0 (enables closed forms downstream).
    bool is_sign() const { return is_sign_; }
    /// Smooth-step index n, or 0.
    int step_index() const { return step_n_; }

    /// alpha * F; sup bound and knots carried over.
    Profile1D scaled(double alpha) const;

private:
    friend Profile1D sign_profile();
    friend Profile1D make_smooth_step(int n);

    std::string name_;
    Fn eval_;
    double sup_bound_;
    bool odd_;
    Smoothness smoothness_;
    std::vector<double> knots_;
    bool is_sign_ = false;
    int step_n_ = 0;
};

/// F0 = 1 on (0, inf), -1 on (-inf, 0), F0(0) = 0.
Profile1D sign_profile();

/// Odd C^2 step: 0 on [0, 1/(n+1)], 1 on [1/n, inf), quintic smoothstep
/// 6u^5 - 15u^4 + 10u^3 in between; extended by F(-x) = -F(x).
Profile1D make_smooth_step(int n);

Profile1D tanh_profile();
Profile1D sin_profile();
Profile1D constant_profile(double value);

/// Fritsch-Carlson monotone cubic Hermite interpolant through (xs, ys),
/// constant outside [xs.front(), xs.back()]. Never overshoots the data, so
/// the sup bound is max |ys|.
Profile1D hermite_spline_profile(std::vector<double> xs, std::vector<double> ys);

/// Parses `sign`, `step:n=<k>`, `sin`, `tanh`, `const:<v>`.
Profile1D parse_profile(const std::string& descriptor);

/// x -> F(<c, x>).
class CylindricalFn {
public:
    CylindricalFn(Profile1D profile, std::vector<double> direction);

    const Profile1D& profile() const { return profile_; }
    const std::vector<double>& direction() const { return direction_; }
    int dim() const { return static_cast<int>(direction_.size()); }
    double sup_bound() const { return profile_.sup_bound(); }
    double direction_norm() const { return norm_; }

    double operator()(std::span<const double> x) const;

private:
    Profile1D profile_;
    std::vector<double> direction_;
    double norm_;
};

/// A bounded function on R^m: either cylindrical (fast paths available) or a
/// general callable. `formula_test` marks unbounded test functions that are
/// only allowed in formula-level checks.
class FieldFunction {
public:
    using Fn = std::function<double(std::span<const double>)>;

    FieldFunction(CylindricalFn f);  // NOLINT(google-explicit-constructor)
    FieldFunction(int dim, Fn f, double sup_bound, std::string name = "general", bool formula_test = false);

    int dim() const { return dim_; }
    double sup_bound() const { return sup_bound_; }
    bool formula_test() const { return formula_test_; }
    const std::string& name() const { return name_; }
    const CylindricalFn* cylindrical() const { return cyl_.get(); }

    double operator()(std::span<const double> x) const { return fn_(x); }

private:
    int dim_;
    Fn fn_;
    double sup_bound_;
    std::string name_;
    bool formula_test_ = false;
    std::shared_ptr<const CylindricalFn> cyl_;
};

}  // namespace oulab
