#include "ctx/epistemic.hpp"

#include "doctest.h"

#include <cmath>

using namespace ctx;

TEST_CASE("Wilson interval edge cases")
{
    auto [lo0, hi0] = wilson_interval(0, 100, 0.99);
    CHECK(lo0 == 0.0);
    CHECK(hi0 > 0.0);
    auto [lo1, hi1] = wilson_interval(100, 100, 0.99);
    CHECK(hi1 == 1.0);
    CHECK(lo1 < 1.0);
    auto [lo, hi] = wilson_interval(50, 100, 0.95);
    CHECK(lo == doctest::Approx(0.4038).epsilon(1e-3));
    CHECK(hi == doctest::Approx(0.5962).epsilon(1e-3));
    CHECK_THROWS_AS(wilson_interval(3, 2, 0.99), Error);
    CHECK_THROWS_AS(wilson_interval(0, 0, 0.99), Error);
    CHECK_THROWS_AS(wilson_interval(1, 2, 1.0), Error);
}

TEST_CASE("sample streams are reproducible and independent of order")
{
    const auto box = hyperbox(MarginalSpec::uniform(4, 0.5));
    SamplerConfig cfg;
    cfg.master_seed = 9;
    const auto a = sample_b(box, 123, cfg);
    const auto b = sample_b(box, 123, cfg);
    CHECK(a == b);
    CHECK(sample_b(box, 124, cfg) != a);
    cfg.master_seed = 10;
    CHECK(sample_b(box, 123, cfg) != a);

    SampleRng r1(1, 2, 0);
    SampleRng r2(1, 2, 1);
    CHECK(r1() != r2());
}

TEST_CASE("sampled points are uniform on the box")
{
    const auto box = hyperbox(MarginalSpec::uniform(3, 0.8));
    SamplerConfig cfg;
    const int count = 20000;
    std::vector<double> mean(3, 0.0);
    for (int i = 0; i < count; ++i) {
        const auto b = sample_b(box, static_cast<std::uint64_t>(i), cfg);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(b[k] >= box.lo[k]);
            CHECK(b[k] <= box.hi[k]);
            mean[k] += b[k] / count;
        }
    }
    // Standard error of the mean is 0.2 / sqrt(12 * 20000) ~ 4e-4.
    for (double m : mean) {
        CHECK(m == doctest::Approx(0.7).epsilon(0.003));
    }
}

TEST_CASE("estimates do not depend on the number of workers")
{
    const auto m = MarginalSpec::uniform(4, 0.5);
    SamplerConfig cfg;
    cfg.master_seed = 5;
    cfg.workers = 1;
    const auto one = estimate_epsilon(m, 3000, cfg);
    for (std::size_t w : {2U, 4U, 16U}) {
        cfg.workers = w;
        const auto many = estimate_epsilon(m, 3000, cfg);
        CHECK(many.counts == one.counts);
        CHECK(many.fast_path_hits == one.fast_path_hits);
        CHECK(many.estimate == one.estimate);
    }
}

TEST_CASE("fast path does not change verdicts")
{
    const auto m = MarginalSpec({0.3, 0.6, 0.8}, {0.7, 0.5, 0.9});
    SamplerConfig cfg;
    cfg.fast_path = true;
    const auto fast = estimate_epsilon(m, 2000, cfg);
    cfg.fast_path = false;
    const auto slow = estimate_epsilon(m, 2000, cfg);
    CHECK(fast.fast_path_hits > 0);
    CHECK(slow.fast_path_hits == 0);
    CHECK(fast.counts.contextual == slow.counts.contextual);
}

TEST_CASE("consistently connected rank 2 systems are almost surely contextual")
{
    SamplerConfig cfg;
    const auto est = estimate_epsilon(MarginalSpec({0.2, 0.7}, {0.7, 0.2}), 2000, cfg);
    CHECK(est.estimate == 1.0);
    CHECK(est.bound == 1);
}

TEST_CASE("uniform-marginal estimate brackets the bound")
{
    SamplerConfig cfg;
    const auto est = estimate_epsilon(MarginalSpec::uniform(3, 0.5), 20000, cfg);
    CHECK(est.ci_lo <= 2.0 / 3.0);
    CHECK(est.ci_hi >= 2.0 / 3.0);
    CHECK(est.demibox_reference == doctest::Approx(2.0 / 3.0));
    CHECK(est.standard_error() == doctest::Approx(std::sqrt(est.estimate * (1 - est.estimate) / 20000)));
}

TEST_CASE("degenerate boxes")
{
    SamplerConfig cfg;
    try {
        estimate_epsilon(MarginalSpec({1.0, 0.5, 0.5}, {0.4, 0.5, 0.5}), 10, cfg);
        FAIL("expected DegenerateBox");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::DegenerateBox);
    }
    const auto prior = MarginalPrior::custom("forced", [](std::size_t n, SampleRng& rng) {
        std::vector<double> f(n, 0.5), s(n, 0.5);
        f[0] = rng.uniform() < 0.5 ? 1.0 : 0.5;
        return MarginalSpec(f, s);
    });
    const auto est = estimate_epsilon_tilde(3, 1000, prior, cfg);
    CHECK(est.counts.degenerate > 300);
    CHECK(est.counts.degenerate < 700);
    CHECK(est.counts.total() == 1000);
}

TEST_CASE("an atomic prior reproduces the fixed-marginal estimate")
{
    const auto m = MarginalSpec({0.3, 0.6, 0.8, 0.5}, {0.7, 0.5, 0.9, 0.4});
    SamplerConfig cfg;
    cfg.master_seed = 77;
    const auto fixed = estimate_epsilon(m, 2000, cfg);
    const auto atomic = estimate_epsilon_tilde(4, 2000, MarginalPrior::atomic(m), cfg);
    CHECK(atomic.counts == fixed.counts);
    CHECK_THROWS_AS(estimate_epsilon_tilde(3, 10, MarginalPrior::atomic(m), cfg), Error);
}

TEST_CASE("prior-averaged estimate respects the bound")
{
    SamplerConfig cfg;
    const auto est = estimate_epsilon_tilde(4, 5000, MarginalPrior::uniform_unit_hypercube(), cfg);
    CHECK(est.marginals == "uniform-unit-hypercube");
    CHECK(est.estimate <= 1.0 / 3.0 + 3 * est.standard_error());
}

TEST_CASE("sample errors report the lowest failing index")
{
    const auto prior = MarginalPrior::custom("bad", [](std::size_t n, SampleRng&) -> MarginalSpec {
        (void)n;
        throw Error(Errc::InvalidArgument, "boom");
    });
    SamplerConfig cfg;
    cfg.workers = 4;
    try {
        estimate_epsilon_tilde(3, 100, prior, cfg);
        FAIL("expected an error");
    } catch (const Error& e) {
        REQUIRE(e.index().has_value());
        CHECK(*e.index() == 0);
    }
}
