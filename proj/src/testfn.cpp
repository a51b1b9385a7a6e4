#include "oulab/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oulab {

Profile1D::Profile1D(std::string name, Fn eval, double sup_bound, bool odd, Smoothness smoothness,
                     std::vector<double> knots)
    : name_(std::move(name)),
      eval_(std::move(eval)),
      sup_bound_(sup_bound),
      odd_(odd),
      smoothness_(smoothness),
      knots_(std::move(knots)) {
    if (!eval_) throw std::invalid_argument("Profile1D: empty evaluator");
    if (!(sup_bound_ > 0.0)) throw std::invalid_argument("Profile1D: sup_bound must be positive");
    std::sort(knots_.begin(), knots_.end());
}

Profile1D Profile1D::scaled(double alpha) const {
    if (alpha == 0.0) throw std::invalid_argument("Profile1D::scaled: factor must be nonzero");
    Profile1D out = *this;
    const Fn inner = eval_;
    out.eval_ = [inner, alpha](double x) { return alpha * inner(x); };
    out.sup_bound_ = std::abs(alpha) * sup_bound_;
    out.name_ = name_ + "*" + std::to_string(alpha);
    out.is_sign_ = false;
    out.step_n_ = 0;
    return out;
}

Profile1D sign_profile() {
    Profile1D p("sign", [](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }, 1.0, true,
                Smoothness::measurable, {0.0});
    p.is_sign_ = true;
    return p;
}

Profile1D make_smooth_step(int n) {
    if (n < 1) throw std::invalid_argument("make_smooth_step: n must be >= 1");
    const double lo = 1.0 / (n + 1.0);
    const double hi = 1.0 / n;
    auto half = [lo, hi](double y) {
        if (y <= lo) return 0.0;
        if (y >= hi) return 1.0;
        const double u = (y - lo) / (hi - lo);
        return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
    };
    Profile1D p("step:n=" + std::to_string(n),
                [half](double x) { return x >= 0.0 ? half(x) : -half(-x); }, 1.0, true, Smoothness::c2,
                {-hi, -lo, lo, hi});
    p.step_n_ = n;
    return p;
}

Profile1D tanh_profile() {
    return Profile1D("tanh", [](double x) { return std::tanh(x); }, 1.0, true, Smoothness::smooth);
}

Profile1D sin_profile() {
    return Profile1D("sin", [](double x) { return std::sin(x); }, 1.0, true, Smoothness::smooth);
}

Profile1D constant_profile(double value) {
    if (value == 0.0) {
        // sup_bound must be positive; the zero profile still satisfies |F| <= 1.
        return Profile1D("const:0", [](double) { return 0.0; }, 1.0, true, Smoothness::smooth);
    }
    return Profile1D("const:" + std::to_string(value), [value](double) { return value; }, std::abs(value), false,
                     Smoothness::smooth);
}

Profile1D hermite_spline_profile(std::vector<double> xs, std::vector<double> ys) {
    const std::size_t n = xs.size();
    if (n < 2 || ys.size() != n) throw std::invalid_argument("hermite_spline_profile: need >= 2 matching points");
    for (std::size_t i = 1; i < n; ++i)
        if (!(xs[i] > xs[i - 1])) throw std::invalid_argument("hermite_spline_profile: xs must be increasing");

    std::vector<double> delta(n - 1), slope(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    slope[0] = delta[0];
    slope[n - 1] = delta[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i)
        slope[i] = (delta[i - 1] * delta[i] <= 0.0) ? 0.0 : 0.5 * (delta[i - 1] + delta[i]);
    // Fritsch-Carlson limiter
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (delta[i] == 0.0) {
            slope[i] = slope[i + 1] = 0.0;
            continue;
        }
        const double a = slope[i] / delta[i];
        const double b = slope[i + 1] / delta[i];
        const double s = a * a + b * b;
        if (s > 9.0) {
            const double tau = 3.0 / std::sqrt(s);
            slope[i] = tau * a * delta[i];
            slope[i + 1] = tau * b * delta[i];
        }
    }
    double sup = 0.0;
    for (double y : ys) sup = std::max(sup, std::abs(y));
    if (sup == 0.0) sup = 1.0;

    auto eval = [xs, ys, slope](double x) {
        if (x <= xs.front()) return ys.front();
        if (x >= xs.back()) return ys.back();
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
        const double h = xs[i + 1] - xs[i];
        const double u = (x - xs[i]) / h;
        const double u2 = u * u;
        const double u3 = u2 * u;
        return (2 * u3 - 3 * u2 + 1) * ys[i] + (u3 - 2 * u2 + u) * h * slope[i] + (-2 * u3 + 3 * u2) * ys[i + 1] +
               (u3 - u2) * h * slope[i + 1];
    };
    return Profile1D("spline", eval, sup, false, Smoothness::c1, xs);
}

Profile1D parse_profile(const std::string& d) {
    if (d == "sign") return sign_profile();
    if (d == "sin") return sin_profile();
    if (d == "tanh") return tanh_profile();
    if (d.rfind("step:n=", 0) == 0) {
        const std::string num = d.substr(7);
        std::size_t used = 0;
        int n = 0;
        try {
            n = std::stoi(num, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != num.size()) throw std::invalid_argument("profile: cannot parse step index in '" + d + "'");
        return make_smooth_step(n);
    }
    if (d.rfind("const:", 0) == 0) return constant_profile(std::stod(d.substr(6)));
    throw std::invalid_argument("profile: unknown profile '" + d + "' (expected sign | step:n=<k> | sin | tanh)");
}

CylindricalFn::CylindricalFn(Profile1D profile, std::vector<double> direction)
    : profile_(std::move(profile)), direction_(std::move(direction)) {
    if (direction_.empty()) throw std::invalid_argument("CylindricalFn: empty direction");
    double s = 0.0;
    for (double v : direction_) s += v * v;
    norm_ = std::sqrt(s);
    if (!(norm_ > 0.0)) throw std::invalid_argument("CylindricalFn: direction must be nonzero");
}

double CylindricalFn::operator()(std::span<const double> x) const {
    if (x.size() != direction_.size()) throw std::invalid_argument("CylindricalFn: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += direction_[i] * x[i];
    return profile_(s);
}

FieldFunction::FieldFunction(CylindricalFn f)
    : dim_(f.dim()), sup_bound_(f.sup_bound()), name_(f.profile().name()), cyl_(std::make_shared<CylindricalFn>(std::move(f))) {
    auto c = cyl_;
    fn_ = [c](std::span<const double> x) { return (*c)(x); };
}

FieldFunction::FieldFunction(int dim, Fn f, double sup_bound, std::string name, bool formula_test)
    : dim_(dim), fn_(std::move(f)), sup_bound_(sup_bound), name_(std::move(name)), formula_test_(formula_test) {
    if (dim_ < 1) throw std::invalid_argument("FieldFunction: dimension must be >= 1");
    if (!fn_) throw std::invalid_argument("FieldFunction: empty callable");
    if (!(sup_bound_ > 0.0)) throw std::invalid_argument("FieldFunction: sup bound must be positive (use inf for unbounded)");
    if (std::isinf(sup_bound_) && !formula_test_)
        throw std::invalid_argument("FieldFunction: unbounded functions are only allowed with formula_test");
}

}  // namespace oulab
