#include "oulab/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

namespace oulab {

namespace {

constexpr double kLnSqrt2Pi = 0.91893853320467274178032973640562;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Lanczos approximation, g = 7, n = 9.
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_log_gamma(double x) {
    // valid for x >= 0.5
    const double z = x - 1.0;
    double a = kLanczos[0];
    for (int i = 1; i < 9; ++i) a += kLanczos[i] / (z + i);
    const double t = z + 7.5;
    return kLnSqrt2Pi + (z + 0.5) * std::log(t) - t + std::log(a);
}

double stirling_log_gamma(double x) {
    const double r = 1.0 / x;
    const double r2 = r * r;
    const double series =
        r * (1.0 / 12.0 -
             r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 * (1.0 / 1680.0 - r2 / 1188.0))));
    return (x - 0.5) * std::log(x) - x + kLnSqrt2Pi + series;
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
    if (x >= 15.0) return stirling_log_gamma(x);
    if (x >= 0.5) return lanczos_log_gamma(x);
    // reflection, 0 < x < 0.5
    return std::log(kPi / std::sin(kPi * x)) - lanczos_log_gamma(1.0 - x);
}

double log_beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("log_beta: arguments must be positive");
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double log_gaussian_radial_moment(int m) {
    if (m < 0) throw std::domain_error("gaussian_radial_moment: m must be >= 0");
    return log_gamma(0.5 * (m + 1)) + 0.5 * (m - 1) * std::log(2.0);
}

double gaussian_radial_moment(int m) { return std::exp(log_gaussian_radial_moment(m)); }

double one_minus_exp(double x) {
    if (std::abs(x) < 1e-5) return x * (1.0 - x * (0.5 - x * (1.0 / 6.0 - x / 24.0)));
    return -std::expm1(-x);
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z - kLnSqrt2Pi); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Wichura, AS241 (PPND16); relative accuracy about 1e-16.
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must lie in (0, 1)");
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            (((((((2509.0809287301226727 * r + 33430.575583588128105) * r +
                  67265.770927008700853) * r + 45921.953931549871457) * r +
                13731.693765509461125) * r + 1971.5909503065514427) * r +
              133.14166789178437745) * r + 3.387132872796366608);
        const double den =
            (((((((5226.495278852545925 * r + 28729.085735721942674) * r +
                  39307.89580009271061) * r + 21213.794301586595867) * r +
                5394.1960214247511077) * r + 687.1870074920579083) * r +
              42.313330701600911252) * r + 1.0);
        return q * num / den;
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
                  0.24178072517745061177) * r + 1.27045825245236838258) * r +
                3.64784832476320460504) * r + 5.7694972214606914055) * r +
              4.6303378461565452959) * r + 1.42343711074968357734);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
                  0.0151986665636164571966) * r + 0.14810397642748007459) * r +
                0.68976733498510000455) * r + 1.6763848301838038494) * r +
              2.05319162663775882187) * r + 1.0);
        val = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  0.0012426609473880784386) * r + 0.026532189526576123093) * r +
                0.29656057182850489123) * r + 1.7848265399172913358) * r +
              5.4637849111641143699) * r + 6.6579046435011037772);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
                  1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
                0.0148753612908506148525) * r + 0.13692988092273580531) * r +
              0.59983220655588793769) * r + 1.0);
        val = num / den;
    }
    return q < 0.0 ? -val : val;
}

EndpointSingularity EndpointSingularity::algebraic(double alpha) {
    if (!(alpha > -1.0 && alpha < 0.0))
        throw std::invalid_argument("algebraic endpoint exponent must lie in (-1, 0)");
    return EndpointSingularity{alpha};
}

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0)) throw std::invalid_argument("QuadratureSpec: rel_tol must be > 0");
    if (!(abs_tol > 0.0)) throw std::invalid_argument("QuadratureSpec: abs_tol must be > 0");
    if (max_subdivisions < 1) throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
    for (const auto& s : {left, right})
        if (s.singular() && !(s.alpha > -1.0 && s.alpha < 0.0))
            throw std::invalid_argument("QuadratureSpec: singular exponent must lie in (-1, 0)");
}

QuadratureSpec QuadratureSpec::with_left(EndpointSingularity s) const {
    QuadratureSpec out = *this;
    out.left = s;
    return out;
}

QuadratureSpec QuadratureSpec::with_right(EndpointSingularity s) const {
    QuadratureSpec out = *this;
    out.right = s;
    return out;
}

QuadratureSpec QuadratureSpec::regular() const {
    QuadratureSpec out = *this;
    out.left = {};
    out.right = {};
    return out;
}

namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct RuleOut {
    double value;
    double error;
};

double quadpack_error(double resk, double resg, double resabs, double resasc) {
    double err = std::abs(resk - resg);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps))
        err = std::max(50.0 * kEps * resabs, err);
    return err;
}

template <class F>
RuleOut gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::array<double, 15> fv{};
    fv[7] = f(c);
    for (int j = 0; j < 7; ++j) {
        fv[j] = f(c - h * kXgk[j]);
        fv[14 - j] = f(c + h * kXgk[j]);
    }
    double resk = kWgk[7] * fv[7];
    double resg = kWg[3] * fv[7];
    double resabs = std::abs(resk);
    for (int j = 0; j < 7; ++j) {
        const double s = fv[j] + fv[14 - j];
        resk += kWgk[j] * s;
        resabs += kWgk[j] * (std::abs(fv[j]) + std::abs(fv[14 - j]));
        if (j % 2 == 1) resg += kWg[j / 2] * s;
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fv[7] - mean);
    for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
    const double ah = std::abs(h);
    const double value = resk * h;
    if (!std::isfinite(value)) return {value, kInf};
    return {value, quadpack_error(value, resg * h, resabs * ah, resasc * ah)};
}

// A piece of the original range mapped to a finite parameter interval.
struct Segment {
    std::function<double(double)> g;
    double u0;
    double u1;
};

// Transforms f on (lo, hi) into a well-behaved integrand over a finite range.
Segment make_segment(const Integrand& f, double lo, double hi, double left_alpha, double right_alpha) {
    const bool lo_inf = std::isinf(lo);
    const bool hi_inf = std::isinf(hi);
    if (lo_inf && hi_inf) throw std::logic_error("make_segment: doubly infinite segment");
    if (hi_inf) {
        return {[f, lo](double u) {
                    const double w = 1.0 - u;
                    return f(lo - std::log(w)) / w;
                },
                0.0, 1.0};
    }
    if (lo_inf) {
        return {[f, hi](double u) {
                    const double w = 1.0 - u;
                    return f(hi + std::log(w)) / w;
                },
                0.0, 1.0};
    }
    const double len = hi - lo;
    if (left_alpha != 0.0) {
        const double p = 1.0 / (1.0 + left_alpha);
        return {[f, lo, len, p](double s) {
                    const double sp = std::pow(s, p);
                    return f(lo + len * sp) * len * p * (sp / s);
                },
                0.0, 1.0};
    }
    if (right_alpha != 0.0) {
        const double p = 1.0 / (1.0 + right_alpha);
        return {[f, hi, len, p](double s) {
                    const double sp = std::pow(s, p);
                    return f(hi - len * sp) * len * p * (sp / s);
                },
                0.0, 1.0};
    }
    return {f, lo, hi};
}

struct Panel {
    std::size_t seg;
    double u0;
    double u1;
    double value;
    double error;
};

struct PanelOrder {
    bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

std::vector<Segment> build_segments(const Integrand& f, double a, double b, const QuadratureSpec& spec,
                                    std::span<const double> breakpoints) {
    std::vector<double> pts;
    pts.push_back(a);
    std::vector<double> inner;
    for (double p : breakpoints)
        if (std::isfinite(p) && p > a && p < b) inner.push_back(p);
    std::sort(inner.begin(), inner.end());
    inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
    if (inner.empty()) {
        if (std::isinf(a) && std::isinf(b)) {
            inner.push_back(0.0);
        } else if (std::isinf(b) && spec.left.singular()) {
            inner.push_back(a + 1.0);
        } else if (std::isinf(a) && spec.right.singular()) {
            inner.push_back(b - 1.0);
        } else if (spec.left.singular() && spec.right.singular()) {
            inner.push_back(0.5 * (a + b));
        }
    }
    pts.insert(pts.end(), inner.begin(), inner.end());
    pts.push_back(b);

    std::vector<Segment> segs;
    const std::size_t n = pts.size() - 1;
    for (std::size_t i = 0; i < n; ++i) {
        const double la = (i == 0) ? spec.left.alpha : 0.0;
        const double ra = (i + 1 == n) ? spec.right.alpha : 0.0;
        segs.push_back(make_segment(f, pts[i], pts[i + 1], la, ra));
    }
    return segs;
}

double tolerance(const QuadratureSpec& spec, double value) {
    return std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
}

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec,
                     std::span<const double> breakpoints) {
    spec.validate();
    if (std::isnan(a) || std::isnan(b)) throw std::invalid_argument("integrate: NaN bound");
    if (a == b) return {0.0, 0.0, true, 0};
    if (a > b) {
        QuadratureSpec swapped = spec;
        std::swap(swapped.left, swapped.right);
        QuadResult r = integrate(f, b, a, swapped, breakpoints);
        r.value = -r.value;
        return r;
    }
    if ((std::isinf(a) && spec.left.singular()) || (std::isinf(b) && spec.right.singular()))
        throw std::invalid_argument("integrate: singular flag on an infinite endpoint");

    const std::vector<Segment> segs = build_segments(f, a, b, spec, breakpoints);

    std::priority_queue<Panel, std::vector<Panel>, PanelOrder> heap;
    double total = 0.0;
    double total_err = 0.0;
    std::size_t evals = 0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const RuleOut r = gk15(segs[i].g, segs[i].u0, segs[i].u1);
        evals += 15;
        heap.push({i, segs[i].u0, segs[i].u1, r.value, r.error});
        total += r.value;
        total_err += r.error;
    }

    std::size_t splits = 0;
    while (total_err > tolerance(spec, total) && splits < spec.max_subdivisions) {
        Panel worst = heap.top();
        const double mid = 0.5 * (worst.u0 + worst.u1);
        if (!(mid > worst.u0 && mid < worst.u1)) break;  // panel at roundoff resolution
        heap.pop();
        const auto& g = segs[worst.seg].g;
        const RuleOut l = gk15(g, worst.u0, mid);
        const RuleOut r = gk15(g, mid, worst.u1);
        evals += 30;
        total += (l.value + r.value) - worst.value;
        total_err += (l.error + r.error) - worst.error;
        heap.push({worst.seg, worst.u0, mid, l.value, l.error});
        heap.push({worst.seg, mid, worst.u1, r.value, r.error});
        ++splits;
        if (!std::isfinite(total)) break;
    }

    // Deterministic final summation in range order.
    std::vector<Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) {
        return x.seg != y.seg ? x.seg < y.seg : x.u0 < y.u0;
    });
    QuadResult out;
    out.evaluations = evals;
    for (const Panel& p : panels) {
        out.value += p.value;
        out.error_estimate += p.error;
    }
    out.converged = std::isfinite(out.value) && out.error_estimate <= tolerance(spec, out.value);
    return out;
}

QuadResult gaussian_expectation(const Integrand& f, const QuadratureSpec& spec,
                                std::span<const double> breakpoints) {
    return integrate([&f](double z) { return f(z) * normal_pdf(z); }, -kInf, kInf, spec.regular(),
                     breakpoints);
}

namespace {

struct VecPanel {
    double a;
    double b;
    std::vector<double> values;
    std::vector<double> errors;
    double priority;
};

void gk15_vector(const VectorIntegrand& f, std::size_t dim, double a, double b, std::vector<double>& values,
                 std::vector<double>& errors, std::vector<double>& scratch) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double ah = std::abs(h);
    scratch.assign(15 * dim, 0.0);
    auto row = [&](int j) { return std::span<double>(scratch.data() + j * dim, dim); };
    f(c, row(7));
    for (int j = 0; j < 7; ++j) {
        f(c - h * kXgk[j], row(j));
        f(c + h * kXgk[j], row(14 - j));
    }
    values.assign(dim, 0.0);
    errors.assign(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
        auto fv = [&](int j) { return scratch[j * dim + k]; };
        double resk = kWgk[7] * fv(7);
        double resg = kWg[3] * fv(7);
        double resabs = std::abs(resk);
        for (int j = 0; j < 7; ++j) {
            const double s = fv(j) + fv(14 - j);
            resk += kWgk[j] * s;
            resabs += kWgk[j] * (std::abs(fv(j)) + std::abs(fv(14 - j)));
            if (j % 2 == 1) resg += kWg[j / 2] * s;
        }
        const double mean = 0.5 * resk;
        double resasc = kWgk[7] * std::abs(fv(7) - mean);
        for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv(j) - mean) + std::abs(fv(14 - j) - mean));
        values[k] = resk * h;
        errors[k] = std::isfinite(values[k]) ? quadpack_error(values[k], resg * h, resabs * ah, resasc * ah) : kInf;
    }
}

}  // namespace

VectorQuadResult integrate_vector(const VectorIntegrand& f, std::size_t dim, double a, double b,
                                  const QuadratureSpec& spec, std::span<const double> breakpoints) {
    spec.validate();
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
        throw std::invalid_argument("integrate_vector: requires finite a < b");
    VectorQuadResult out;
    out.values.assign(dim, 0.0);
    out.errors.assign(dim, 0.0);
    if (dim == 0) {
        out.converged = true;
        return out;
    }

    std::vector<double> pts{a};
    for (double p : breakpoints)
        if (p > a && p < b) pts.push_back(p);
    std::sort(pts.begin() + 1, pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    pts.push_back(b);

    std::vector<double> scratch;
    std::vector<VecPanel> panels;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        VecPanel p{pts[i], pts[i + 1], {}, {}, 0.0};
        gk15_vector(f, dim, p.a, p.b, p.values, p.errors, scratch);
        for (std::size_t k = 0; k < dim; ++k) {
            out.values[k] += p.values[k];
            out.errors[k] += p.errors[k];
        }
        panels.push_back(std::move(p));
    }

    // Per-component tolerance frozen from the initial pass, used only for ranking panels.
    std::vector<double> scale(dim);
    for (std::size_t k = 0; k < dim; ++k) scale[k] = tolerance(spec, out.values[k]);
    auto priority = [&](const VecPanel& p) {
        double worst = 0.0;
        for (std::size_t k = 0; k < dim; ++k) worst = std::max(worst, p.errors[k] / scale[k]);
        return worst;
    };
    auto cmp = [](const VecPanel& x, const VecPanel& y) { return x.priority < y.priority; };
    for (auto& p : panels) p.priority = priority(p);
    std::priority_queue<VecPanel, std::vector<VecPanel>, decltype(cmp)> heap(cmp, std::move(panels));

    auto all_converged = [&] {
        for (std::size_t k = 0; k < dim; ++k)
            if (!(out.errors[k] <= tolerance(spec, out.values[k]))) return false;
        return true;
    };

    std::size_t splits = 0;
    while (!all_converged() && splits < spec.max_subdivisions) {
        VecPanel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;
        heap.pop();
        VecPanel l{worst.a, mid, {}, {}, 0.0};
        VecPanel r{mid, worst.b, {}, {}, 0.0};
        gk15_vector(f, dim, l.a, l.b, l.values, l.errors, scratch);
        gk15_vector(f, dim, r.a, r.b, r.values, r.errors, scratch);
        for (std::size_t k = 0; k < dim; ++k) {
            out.values[k] += l.values[k] + r.values[k] - worst.values[k];
            out.errors[k] += l.errors[k] + r.errors[k] - worst.errors[k];
        }
        l.priority = priority(l);
        r.priority = priority(r);
        heap.push(std::move(l));
        heap.push(std::move(r));
        ++splits;
    }

    std::vector<VecPanel> final_panels;
    final_panels.reserve(heap.size());
    while (!heap.empty()) {
        final_panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(final_panels.begin(), final_panels.end(), [](const VecPanel& x, const VecPanel& y) { return x.a < y.a; });
    std::fill(out.values.begin(), out.values.end(), 0.0);
    std::fill(out.errors.begin(), out.errors.end(), 0.0);
    for (const auto& p : final_panels) {
        for (std::size_t k = 0; k < dim; ++k) {
            out.values[k] += p.values[k];
            out.errors[k] += p.errors[k];
        }
    }
    out.panels = final_panels.size();
    out.converged = all_converged();
    return out;
}

}  // namespace oulab
