#pragma once

// Eigenvalue sequences lambda_k of the diagonal drift and the time scalars
// c_k(t) = sqrt((1 - exp(-2 lambda_k t)) / (2 lambda_k)) derived from them.

#include <optional>
#include <string>
#include <vector>

namespace oulab {

class Spectrum {
public:
    enum class Kind { quadratic, explicit_list, constant };

    /// lambda_k = c0 k^2.
    static Spectrum quadratic(double c0 = 1.0);
    /// Finite strictly increasing positive list; with a certificate every
    /// entry is checked against c0 k^2 on construction.
    static Spectrum explicit_list(std::vector<double> values, std::optional<double> certified_c0 = {});
    /// lambda_k = lambda for every k (the scalar case).
    static Spectrum constant(double lambda);

    /// Reads one ascending positive value per line; blank lines and lines
    /// starting with '#' are ignored.
    static Spectrum from_file(const std::string& path, std::optional<double> certified_c0 = {});

    /// Parses `quadratic:c0=1`, `constant:lambda=2.5`, `explicit:file=<path>`
    /// (optionally `,c0=<value>` for a certificate).
    static Spectrum parse(const std::string& descriptor);

    Kind kind() const { return kind_; }
    bool increasing() const { return kind_ != Kind::constant; }

    /// lambda_k, k >= 1.
    double lambda(int k) const;

    /// Largest dimension the spectrum supports (explicit lists are finite).
    int max_dimension() const;

    /// c0 such that lambda_k >= c0 k^2 is guaranteed, if known.
    std::optional<double> certified_c0() const;

    std::string describe() const;

    /// lambda_1..lambda_m as a vector.
    std::vector<double> first(int m) const;

private:
    Spectrum() = default;
    Kind kind_ = Kind::quadratic;
    double param_ = 1.0;  // c0 for quadratic, lambda for constant
    std::vector<double> values_;
    std::optional<double> certificate_;
    std::string source_;
};

struct CovScalars {
    double t = 0.0;
    std::vector<double> c;   // c_k(t)
    std::vector<double> c2;  // c_k(t)^2, computed without a square root round trip
    double norm = 0.0;       // |c(t)|
};

/// c_k(t)^2 = (1 - exp(-2 lambda t)) / (2 lambda), stable for small lambda t.
double cov_scalar_sq(double lambda, double t);

CovScalars cov_scalars(const Spectrum& spectrum, int m, double t);

/// |c(t)| for lambdas given explicitly (hot path; no allocation).
double cov_norm(const std::vector<double>& lambdas, double t);

/// sqrt(pi / (2 c0 s)), an upper bound for sum_k exp(-2 c0 k^2 s).
double tail_sum_bound(double c0, double s);

/// (2 pi t / c0)^(1/4), an upper bound for |c(t)| when lambda_k >= c0 k^2.
double c_norm_upper(double c0, double t);

/// sum_{k <= m} lambda_k^(-1/2); rejected for constant spectra.
double sqrt_harmonic_sum(const Spectrum& spectrum, int m);

}  // namespace oulab
