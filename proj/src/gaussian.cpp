#include "oulab/gaussian.hpp"

#include "oulab/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace oulab {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), key_(mix64(mix64(seed + kGolden) ^ mix64(~stream_id))) {}

std::uint64_t RngStream::next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
}

double RngStream::uniform() {
    // 53 random bits centred in their cell: never exactly 0 or 1.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() { return normal_quantile(uniform()); }

std::string RngStream::describe() const {
    return "seed=" + std::to_string(seed_) + ",stream=" + std::to_string(stream_id_);
}

void RunningStats::add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
    if (other.n_ == 0) return;
    if (n_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(other.n_);
    const double d = other.mean_ - mean_;
    const double n = na + nb;
    mean_ += d * nb / n;
    m2_ += other.m2_ + d * d * na * nb / n;
    n_ += other.n_;
}

double RunningStats::variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

MCEstimate RunningStats::estimate(const RngStream& rng) const {
    MCEstimate e;
    e.mean = mean_;
    e.n = n_;
    e.std_error = n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
    e.seed = rng.seed();
    e.stream_id = rng.stream_id();
    return e;
}

GaussianDiag::GaussianDiag(std::vector<double> variances) : variances_(std::move(variances)) {
    if (variances_.empty()) throw std::invalid_argument("GaussianDiag: dimension must be >= 1");
    sd_.reserve(variances_.size());
    double log_det = 0.0;
    for (double v : variances_) {
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("GaussianDiag: variances must be positive");
        sd_.push_back(std::sqrt(v));
        log_det += std::log(v);
    }
    log_norm_ = -0.5 * static_cast<double>(variances_.size()) * std::log(2.0 * kPi) - 0.5 * log_det;
}

GaussianDiag GaussianDiag::standard(int m) {
    if (m < 1) throw std::invalid_argument("GaussianDiag: dimension must be >= 1");
    return GaussianDiag(std::vector<double>(static_cast<std::size_t>(m), 1.0));
}

double GaussianDiag::log_density(std::span<const double> x) const {
    if (x.size() != variances_.size()) throw std::invalid_argument("GaussianDiag: dimension mismatch");
    double q = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) q += x[i] * x[i] / variances_[i];
    return log_norm_ - 0.5 * q;
}

double GaussianDiag::density(std::span<const double> x) const { return std::exp(log_density(x)); }

void GaussianDiag::sample_into(RngStream& rng, std::span<double> out) const {
    if (out.size() != sd_.size()) throw std::invalid_argument("GaussianDiag: dimension mismatch");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = sd_[i] * rng.normal();
}

std::vector<double> GaussianDiag::sample(std::size_t n, RngStream& rng) const {
    if (n < 1) throw std::invalid_argument("GaussianDiag::sample: n must be >= 1");
    const std::size_t m = sd_.size();
    std::vector<double> out(n * m);
    for (std::size_t i = 0; i < n; ++i) sample_into(rng, std::span<double>(out.data() + i * m, m));
    return out;
}

double expected_abs_inner(std::span<const double> h) {
    double n2 = 0.0;
    for (double v : h) n2 += v * v;
    if (h.empty() || std::abs(std::sqrt(n2) - 1.0) > 1e-12)
        throw std::invalid_argument("expected_abs_inner: h must be a unit vector");
    return std::sqrt(2.0 / kPi);
}

}  // namespace oulab
