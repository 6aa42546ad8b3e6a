#pragma once

// Monte Carlo estimates of the probability that a cyclic system drawn
// uniformly from its Frechet hyperbox is contextual.
//
// Every sample owns a counter-based random stream derived from
// (master seed, sample index), so counts do not depend on how samples are
// split across workers.

#include "ctx/cyclic.hpp"
#include "ctx/polytope.hpp"
#include "ctx/rational.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace ctx {

/// SplitMix64 stream keyed by (seed, sample index, sub-stream).
class SampleRng {
public:
    using result_type = std::uint64_t;

    SampleRng(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

private:
    std::uint64_t state_;
};

struct SamplerConfig {
    std::uint64_t master_seed = 42;
    std::size_t workers = 1;
    bool fast_path = true;
    double confidence = 0.99;
    /// Normalized band around the demibox surface that is sent to the LP.
    double fast_path_tol = 1e-9;
    SolverConfig solver;
};

struct VerdictCounts {
    std::uint64_t contextual = 0;
    std::uint64_t noncontextual = 0;
    std::uint64_t marginal = 0;
    std::uint64_t degenerate = 0;

    std::uint64_t total() const { return contextual + noncontextual + marginal + degenerate; }
    bool operator==(const VerdictCounts&) const = default;
};

struct EpsilonEstimate {
    std::size_t n = 0;
    std::string marginals;  // description of the fixed spec or the prior
    std::uint64_t samples = 0;
    VerdictCounts counts;
    std::uint64_t fast_path_hits = 0;
    double estimate = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double confidence = 0.99;
    std::uint64_t seed = 0;
    ExactRational bound;
    /// 1 - vol(demibox)/vol(box): the value of the estimate if K were the demibox.
    double demibox_reference = 0.0;

    /// sqrt(p(1-p)/trials) of the point estimate.
    double standard_error() const;
};

/// Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t trials,
                                          double confidence);

/// Uniform point of the box for sample `index` (degenerate sides give lo).
std::vector<double> sample_b(const Hyperbox& box, std::uint64_t index, const SamplerConfig& cfg);

/// Throws DegenerateBox if some side of the box has length 0.
EpsilonEstimate estimate_epsilon(const MarginalSpec& marginals, std::uint64_t samples,
                                 const SamplerConfig& cfg);

/// Distribution of the 2n marginal probabilities for the 3n-dimensional estimate.
class MarginalPrior {
public:
    using Sampler = std::function<MarginalSpec(std::size_t n, SampleRng& rng)>;

    /// Each of the 2n probabilities iid uniform on [0, 1].
    static MarginalPrior uniform_unit_hypercube();
    /// All mass on one marginal spec.
    static MarginalPrior atomic(MarginalSpec marginals);
    static MarginalPrior custom(std::string name, Sampler sampler);

    const std::string& name() const noexcept { return name_; }
    MarginalSpec draw(std::size_t n, SampleRng& rng) const { return sampler_(n, rng); }

private:
    MarginalPrior(std::string name, Sampler sampler)
        : name_(std::move(name)), sampler_(std::move(sampler)) {}

    std::string name_;
    Sampler sampler_;
};

/// Per sample: draw marginals from the prior, then b uniformly in their box.
/// Degenerate boxes are counted and excluded from the estimate.
EpsilonEstimate estimate_epsilon_tilde(std::size_t n, std::uint64_t samples,
                                       const MarginalPrior& prior, const SamplerConfig& cfg);

}  // namespace ctx
