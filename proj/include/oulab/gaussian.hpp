#pragma once

// Centered diagonal Gaussian measures and the deterministic random streams
// used by every Monte Carlo estimate in the library.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace oulab {

/// Counter-based generator: the i-th output is a SplitMix64 finalisation of
/// key + i * golden, where the key is derived from (seed, stream_id).
/// Identical (seed, stream_id) pairs give identical sequences on every
/// platform. A stream is not meant to be shared between threads; give each
/// parallel batch its own stream_id instead.
class RngStream {
public:
    RngStream(std::uint64_t seed = 0, std::uint64_t stream_id = 0);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }
    std::uint64_t position() const { return counter_; }

    std::uint64_t next_u64();
    /// Uniform on the open interval (0, 1).
    double uniform();
    /// Standard normal by inverse CDF.
    double normal();

    /// A new independent stream with the same seed.
    RngStream substream(std::uint64_t stream_id) const { return RngStream(seed_, stream_id); }

    std::string describe() const;

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Result of a Monte Carlo average.
struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;  // number of independent terms averaged
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

/// Streaming mean/variance (Welford); merging is done in caller order.
class RunningStats {
public:
    void add(double x);
    void merge(const RunningStats& other);
    std::uint64_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const;  // unbiased sample variance
    MCEstimate estimate(const RngStream& rng) const;

private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

class GaussianDiag {
public:
    explicit GaussianDiag(std::vector<double> variances);
    static GaussianDiag standard(int m);

    int dim() const { return static_cast<int>(variances_.size()); }
    const std::vector<double>& variances() const { return variances_; }

    double log_density(std::span<const double> x) const;
    double density(std::span<const double> x) const;

    /// Fills `out` (size dim) with one draw.
    void sample_into(RngStream& rng, std::span<double> out) const;
    /// n draws, row-major (n x dim).
    std::vector<double> sample(std::size_t n, RngStream& rng) const;

private:
    std::vector<double> variances_;
    std::vector<double> sd_;
    double log_norm_ = 0.0;
};

/// E|<h, Y>| for Y ~ N(0, I) and a unit vector h: sqrt(2 / pi).
double expected_abs_inner(std::span<const double> h);

}  // namespace oulab
