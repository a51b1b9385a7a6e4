#include "oulab/spectrum.hpp"

#include "oulab/specfun.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace oulab {

namespace {

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_positive(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("spectrum: cannot parse " + key + "='" + text + "'");
    }
    if (used != text.size()) throw std::invalid_argument("spectrum: trailing characters in " + key + "='" + text + "'");
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("spectrum: " + key + " must be positive");
    return v;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

Spectrum Spectrum::quadratic(double c0) {
    if (!(c0 > 0.0) || !std::isfinite(c0)) throw std::invalid_argument("quadratic spectrum: c0 must be positive");
    Spectrum s;
    s.kind_ = Kind::quadratic;
    s.param_ = c0;
    return s;
}

Spectrum Spectrum::explicit_list(std::vector<double> values, std::optional<double> certified_c0) {
    if (values.empty()) throw std::invalid_argument("explicit spectrum: empty list");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0) || !std::isfinite(values[i]))
            throw std::invalid_argument("explicit spectrum: entries must be positive");
        if (i > 0 && !(values[i] > values[i - 1]))
            throw std::invalid_argument("explicit spectrum: entries must be strictly increasing");
    }
    if (certified_c0) {
        if (!(*certified_c0 > 0.0)) throw std::invalid_argument("explicit spectrum: certificate must be positive");
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double k = static_cast<double>(i + 1);
            if (values[i] < *certified_c0 * k * k)
                throw std::invalid_argument("explicit spectrum: lambda_" + std::to_string(i + 1) +
                                            " violates the certified lower bound c0 k^2");
        }
    }
    Spectrum s;
    s.kind_ = Kind::explicit_list;
    s.values_ = std::move(values);
    s.certificate_ = certified_c0;
    return s;
}

Spectrum Spectrum::constant(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("constant spectrum: lambda must be positive");
    Spectrum s;
    s.kind_ = Kind::constant;
    s.param_ = lambda;
    return s;
}

Spectrum Spectrum::from_file(const std::string& path, std::optional<double> certified_c0) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("explicit spectrum: cannot open '" + path + "'");
    std::vector<double> values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        values.push_back(parse_positive(path + ":" + std::to_string(lineno), line));
    }
    Spectrum s = explicit_list(std::move(values), certified_c0);
    s.source_ = path;
    return s;
}

Spectrum Spectrum::parse(const std::string& descriptor) {
    const std::string d = trim(descriptor);
    const auto colon = d.find(':');
    const std::string kind = trim(d.substr(0, colon));
    std::string rest = colon == std::string::npos ? std::string{} : d.substr(colon + 1);

    std::string c0_text, lambda_text, file_text;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("spectrum: expected key=value, got '" + item + "'");
        const std::string key = trim(item.substr(0, eq));
        const std::string val = trim(item.substr(eq + 1));
        if (key == "c0") c0_text = val;
        else if (key == "lambda") lambda_text = val;
        else if (key == "file") file_text = val;
        else throw std::invalid_argument("spectrum: unknown key '" + key + "'");
    }

    if (kind == "quadratic") return quadratic(c0_text.empty() ? 1.0 : parse_positive("c0", c0_text));
    if (kind == "constant") {
        if (lambda_text.empty()) throw std::invalid_argument("spectrum: constant requires lambda=<value>");
        return constant(parse_positive("lambda", lambda_text));
    }
    if (kind == "explicit") {
        if (file_text.empty()) throw std::invalid_argument("spectrum: explicit requires file=<path>");
        std::optional<double> cert;
        if (!c0_text.empty()) cert = parse_positive("c0", c0_text);
        return from_file(file_text, cert);
    }
    throw std::invalid_argument("spectrum: unknown kind '" + kind +
                                "' (expected quadratic:c0=..., constant:lambda=..., explicit:file=...)");
}

double Spectrum::lambda(int k) const {
    if (k < 1) throw std::out_of_range("spectrum: index must be >= 1");
    switch (kind_) {
        case Kind::quadratic: return param_ * static_cast<double>(k) * static_cast<double>(k);
        case Kind::constant: return param_;
        case Kind::explicit_list:
            if (static_cast<std::size_t>(k) > values_.size())
                throw std::out_of_range("spectrum: index " + std::to_string(k) + " beyond explicit list of length " +
                                        std::to_string(values_.size()));
            return values_[k - 1];
    }
    return 0.0;
}

int Spectrum::max_dimension() const {
    if (kind_ == Kind::explicit_list) return static_cast<int>(values_.size());
    return std::numeric_limits<int>::max();
}

std::optional<double> Spectrum::certified_c0() const {
    switch (kind_) {
        case Kind::quadratic: return param_;
        case Kind::explicit_list: return certificate_;
        case Kind::constant: return std::nullopt;
    }
    return std::nullopt;
}

std::string Spectrum::describe() const {
    switch (kind_) {
        case Kind::quadratic: return "quadratic:c0=" + fmt(param_);
        case Kind::constant: return "constant:lambda=" + fmt(param_);
        case Kind::explicit_list: {
            std::string s = "explicit:file=" + (source_.empty() ? std::string("<memory>") : source_);
            if (certificate_) s += ",c0=" + fmt(*certificate_);
            return s;
        }
    }
    return {};
}

std::vector<double> Spectrum::first(int m) const {
    if (m < 1) throw std::invalid_argument("spectrum: dimension must be >= 1");
    std::vector<double> out(m);
    for (int k = 1; k <= m; ++k) out[k - 1] = lambda(k);
    return out;
}

double cov_scalar_sq(double lambda, double t) {
    if (t <= 0.0) return 0.0;
    return one_minus_exp(2.0 * lambda * t) / (2.0 * lambda);
}

CovScalars cov_scalars(const Spectrum& spectrum, int m, double t) {
    if (m < 1) throw std::invalid_argument("cov_scalars: m must be >= 1");
    if (!(t >= 0.0)) throw std::invalid_argument("cov_scalars: t must be >= 0");
    CovScalars out;
    out.t = t;
    out.c.resize(m);
    out.c2.resize(m);
    double sum = 0.0;
    for (int k = 1; k <= m; ++k) {
        const double q = cov_scalar_sq(spectrum.lambda(k), t);
        out.c2[k - 1] = q;
        out.c[k - 1] = std::sqrt(q);
        sum += q;
    }
    out.norm = std::sqrt(sum);
    return out;
}

double cov_norm(const std::vector<double>& lambdas, double t) {
    double sum = 0.0;
    for (double l : lambdas) sum += cov_scalar_sq(l, t);
    return std::sqrt(sum);
}

double tail_sum_bound(double c0, double s) {
    if (!(c0 > 0.0) || !(s > 0.0)) throw std::invalid_argument("tail_sum_bound: c0 and s must be positive");
    return std::sqrt(kPi / (2.0 * c0 * s));
}

double c_norm_upper(double c0, double t) {
    if (!(c0 > 0.0) || !(t > 0.0)) throw std::invalid_argument("c_norm_upper: c0 and t must be positive");
    return std::pow(2.0 * kPi * t / c0, 0.25);
}

double sqrt_harmonic_sum(const Spectrum& spectrum, int m) {
    if (!spectrum.increasing())
        throw std::invalid_argument("sqrt_harmonic_sum: not defined for a constant spectrum");
    if (m < 1) throw std::invalid_argument("sqrt_harmonic_sum: m must be >= 1");
    double sum = 0.0;
    for (int k = 1; k <= m; ++k) sum += 1.0 / std::sqrt(spectrum.lambda(k));
    return sum;
}

}  // namespace oulab
