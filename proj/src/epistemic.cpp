#include "ctx/epistemic.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace ctx {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kMarginalStream = 0;
constexpr std::uint64_t kPointStream = 1;

enum class Outcome : std::uint8_t { Contextual, Noncontextual, FastNoncontextual, Marginal, Degenerate };

struct Tally {
    VerdictCounts counts;
    std::uint64_t fast = 0;

    void add(Outcome o)
    {
        switch (o) {
        case Outcome::Contextual: ++counts.contextual; break;
        case Outcome::Noncontextual: ++counts.noncontextual; break;
        case Outcome::FastNoncontextual:
            ++counts.noncontextual;
            ++fast;
            break;
        case Outcome::Marginal: ++counts.marginal; break;
        case Outcome::Degenerate: ++counts.degenerate; break;
        }
    }
};

Outcome classify(const MarginalSpec& marginals, const Hyperbox& box, std::vector<double> b,
                 const SamplerConfig& cfg)
{
    if (cfg.fast_path &&
        demibox_contains(box, b, cfg.fast_path_tol) == Membership::Inside) {
        return Outcome::FastNoncontextual;
    }
    const auto result = check_noncontextual(CyclicSystem(marginals, std::move(b)), cfg.solver);
    switch (result.verdict) {
    case Verdict::Noncontextual: return Outcome::Noncontextual;
    case Verdict::Contextual: return Outcome::Contextual;
    case Verdict::Marginal: break;
    }
    return Outcome::Marginal;
}

/// Runs `fn(index)` for every sample on `workers` threads. Errors are
/// rethrown for the lowest failing index, tagged with that index.
template <class Fn>
Tally run_samples(std::uint64_t samples, std::size_t workers, Fn fn)
{
    workers = std::max<std::size_t>(1, std::min<std::uint64_t>(workers, samples));
    std::vector<Tally> tallies(workers);
    std::mutex error_mutex;
    std::optional<std::uint64_t> failed_index;
    std::exception_ptr failure;

    auto work = [&](std::size_t w) {
        const std::uint64_t begin = samples * w / workers;
        const std::uint64_t end = samples * (w + 1) / workers;
        for (std::uint64_t i = begin; i < end; ++i) {
            try {
                tallies[w].add(fn(i));
            } catch (const Error& e) {
                std::lock_guard lock(error_mutex);
                if (!failed_index || i < *failed_index) {
                    failed_index = i;
                    failure = std::make_exception_ptr(
                        Error(e.code(), "sample " + std::to_string(i) + ": " + e.what(),
                              static_cast<std::size_t>(i)));
                }
                return;
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!failed_index || i < *failed_index) {
                    failed_index = i;
                    failure = std::current_exception();
                }
                return;
            }
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> threads;
        threads.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            threads.emplace_back(work, w);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    Tally total;
    for (const auto& t : tallies) {
        total.counts.contextual += t.counts.contextual;
        total.counts.noncontextual += t.counts.noncontextual;
        total.counts.marginal += t.counts.marginal;
        total.counts.degenerate += t.counts.degenerate;
        total.fast += t.fast;
    }
    return total;
}

EpsilonEstimate summarize(std::size_t n, std::string description, std::uint64_t samples,
                          const Tally& tally, const SamplerConfig& cfg)
{
    EpsilonEstimate est;
    est.n = n;
    est.marginals = std::move(description);
    est.samples = samples;
    est.counts = tally.counts;
    est.fast_path_hits = tally.fast;
    est.confidence = cfg.confidence;
    est.seed = cfg.master_seed;
    est.bound = epsilon_upper_bound(n);
    est.demibox_reference = n <= 2 ? 1.0 : corner_fraction<double>(n);
    const std::uint64_t trials = samples - tally.counts.marginal - tally.counts.degenerate;
    if (trials > 0) {
        est.estimate = static_cast<double>(tally.counts.contextual) / static_cast<double>(trials);
        std::tie(est.ci_lo, est.ci_hi) =
            wilson_interval(tally.counts.contextual, trials, cfg.confidence);
    } else {
        est.ci_lo = 0.0;
        est.ci_hi = 1.0;
    }
    return est;
}

void require_samples(std::uint64_t samples)
{
    if (samples == 0) {
        throw Error(Errc::InvalidArgument, "need at least one sample");
    }
}

std::string describe(const MarginalSpec& m)
{
    bool uniform_half = true;
    for (std::size_t i = 0; i < m.rank(); ++i) {
        uniform_half = uniform_half && m.first(i) == 0.5 && m.second(i) == 0.5;
    }
    return uniform_half ? std::string("uniform") : std::string("fixed");
}

}  // namespace

SampleRng::SampleRng(std::uint64_t seed, std::uint64_t index, std::uint64_t stream)
    : state_(mix64(seed + kGolden) ^ mix64(index * kGolden + (stream << 32) + 0x632BE59BD9B4E019ULL))
{
}

SampleRng::result_type SampleRng::operator()()
{
    state_ += kGolden;
    return mix64(state_);
}

double SampleRng::uniform()
{
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double EpsilonEstimate::standard_error() const
{
    const std::uint64_t trials = samples - counts.marginal - counts.degenerate;
    if (trials == 0) {
        return 0.0;
    }
    return std::sqrt(estimate * (1.0 - estimate) / static_cast<double>(trials));
}

std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t trials,
                                          double confidence)
{
    if (trials == 0 || hits > trials) {
        throw Error(Errc::InvalidArgument, "Wilson interval needs 0 <= hits <= trials, trials >= 1");
    }
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw Error(Errc::InvalidArgument, "confidence must lie in (0, 1)");
    }
    const boost::math::normal_distribution<double> normal;
    const double z = boost::math::quantile(normal, 1.0 - (1.0 - confidence) / 2.0);
    const double t = static_cast<double>(trials);
    const double p = static_cast<double>(hits) / t;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / t;
    const double center = (p + z2 / (2.0 * t)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / t + z2 / (4.0 * t * t)) / denom;
    double lo = hits == 0 ? 0.0 : std::max(0.0, center - half);
    double hi = hits == trials ? 1.0 : std::min(1.0, center + half);
    return {lo, hi};
}

std::vector<double> sample_b(const Hyperbox& box, std::uint64_t index, const SamplerConfig& cfg)
{
    SampleRng rng(cfg.master_seed, index, kPointStream);
    std::vector<double> b(box.rank());
    for (std::size_t i = 0; i < box.rank(); ++i) {
        const double len = box.length(i);
        const double u = rng.uniform();
        b[i] = len > 0.0 ? std::clamp(box.lo[i] + u * len, box.lo[i], box.hi[i]) : box.lo[i];
    }
    return b;
}

EpsilonEstimate estimate_epsilon(const MarginalSpec& marginals, std::uint64_t samples,
                                 const SamplerConfig& cfg)
{
    require_samples(samples);
    const Hyperbox box = hyperbox(marginals);
    for (std::size_t i = 0; i < box.rank(); ++i) {
        if (!(box.length(i) > 0.0)) {
            throw Error(Errc::DegenerateBox,
                        "box coordinate " + std::to_string(i + 1) +
                            " has zero length; the volume ratio is undefined (use a prior "
                            "estimate or drop the forced context)",
                        i);
        }
    }
    const Tally tally = run_samples(samples, cfg.workers, [&](std::uint64_t i) {
        return classify(marginals, box, sample_b(box, i, cfg), cfg);
    });
    return summarize(marginals.rank(), describe(marginals), samples, tally, cfg);
}

MarginalPrior MarginalPrior::uniform_unit_hypercube()
{
    return MarginalPrior("uniform-unit-hypercube", [](std::size_t n, SampleRng& rng) {
        std::vector<double> first(n);
        std::vector<double> second(n);
        for (std::size_t i = 0; i < n; ++i) {
            first[i] = rng.uniform();
            second[i] = rng.uniform();
        }
        return MarginalSpec(std::move(first), std::move(second));
    });
}

MarginalPrior MarginalPrior::atomic(MarginalSpec marginals)
{
    std::string name = "atomic:" + describe(marginals);
    return MarginalPrior(std::move(name), [m = std::move(marginals)](std::size_t n, SampleRng&) {
        if (m.rank() != n) {
            throw Error(Errc::InvalidArgument, "atomic prior has rank " + std::to_string(m.rank()) +
                                                   ", requested " + std::to_string(n));
        }
        return m;
    });
}

MarginalPrior MarginalPrior::custom(std::string name, Sampler sampler)
{
    return MarginalPrior(std::move(name), std::move(sampler));
}

EpsilonEstimate estimate_epsilon_tilde(std::size_t n, std::uint64_t samples,
                                       const MarginalPrior& prior, const SamplerConfig& cfg)
{
    require_samples(samples);
    if (n < 2) {
        throw Error(Errc::RankTooSmall, "cyclic systems need rank n >= 2");
    }
    const Tally tally = run_samples(samples, cfg.workers, [&](std::uint64_t i) {
        SampleRng rng(cfg.master_seed, i, kMarginalStream);
        const MarginalSpec marginals = prior.draw(n, rng);
        const Hyperbox box = hyperbox(marginals);
        if (box.degenerate()) {
            return Outcome::Degenerate;
        }
        return classify(marginals, box, sample_b(box, i, cfg), cfg);
    });
    return summarize(n, prior.name(), samples, tally, cfg);
}

}  // namespace ctx
