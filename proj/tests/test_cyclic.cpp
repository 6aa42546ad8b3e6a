#include "ctx/cyclic.hpp"

#include "test_support.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace ctx;
using ctx::testing::in_convex_hull;

namespace {

std::vector<double> normalized_vertex(std::uint64_t pattern, std::size_t n)
{
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = static_cast<double>((pattern >> i) & 1U);
    }
    return v;
}

Hyperbox unit_box(std::size_t n)
{
    return Hyperbox{std::vector<double>(n, 0.0), std::vector<double>(n, 1.0)};
}

}  // namespace

TEST_CASE("new_system validates ranks, ranges and Frechet bounds")
{
    const auto half = MarginalSpec::uniform(4, 0.5);
    CHECK_NOTHROW(CyclicSystem(half, {0.5, 0.5, 0.5, 0.5}));

    try {
        CyclicSystem(half, {0.6, 0.0, 0.0, 0.0});
        FAIL("expected a Frechet violation");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::FrechetViolation);
        REQUIRE(e.index().has_value());
        CHECK(*e.index() == 0);
    }

    const auto m = MarginalSpec({0.8, 0.8, 0.8}, {0.8, 0.8, 0.8});
    CHECK_NOTHROW(CyclicSystem(m, {0.7, 0.7, 0.7}));
    // Lower Frechet endpoint is 0.6 here.
    CHECK_THROWS_AS(CyclicSystem(m, {0.7, 0.55, 0.7}), Error);

    CHECK_THROWS_AS(MarginalSpec({0.5}, {0.5}), Error);
    try {
        MarginalSpec({0.5}, {0.5});
    } catch (const Error& e) {
        CHECK(e.code() == Errc::RankTooSmall);
    }
    try {
        MarginalSpec({0.5, 1.2}, {0.5, 0.5});
    } catch (const Error& e) {
        CHECK(e.code() == Errc::OutOfRange);
        CHECK(*e.index() == 1);
    }
    CHECK_THROWS_AS(CyclicSystem(half, {0.5, 0.5}), Error);
    CHECK_THROWS_AS(CyclicSystem(half, {0.5, 0.5, NAN, 0.5}), Error);
}

TEST_CASE("exact systems judge Frechet bounds without slack")
{
    const auto m = ExactMarginalSpec::uniform(3, ExactRational(1, 2));
    CHECK_NOTHROW(ExactCyclicSystem(m, {ExactRational(1, 2), 0, ExactRational(1, 4)}));
    CHECK_THROWS_AS(
        ExactCyclicSystem(m, {ExactRational(1, 2) + ExactRational(1, 1000000000000LL), 0, 0}),
        Error);
}

TEST_CASE("c_vector pairs each content across its two contexts")
{
    CHECK(c_vector(MarginalSpec::uniform(5, 0.5)) == std::vector<double>(5, 0.5));

    // Content 0 is seen as 0.3 (context 0) and 0.7 (context 1); content 1 as 0.9 and 0.4.
    const MarginalSpec m({0.3, 0.9}, {0.4, 0.7});
    const auto c = c_vector(m);
    REQUIRE(c.size() == 2);
    CHECK(c[0] == doctest::Approx(0.3));
    CHECK(c[1] == doctest::Approx(0.4));

    // Oracle: scan all couplings of the two content variables and keep the
    // largest P(X = Y); the both-1 probability there is the c entry.
    for (std::size_t j = 0; j < 2; ++j) {
        auto [p, q] = m.content(j);
        double best_match = -1.0;
        double best_both = 0.0;
        const double lo = std::max(0.0, p + q - 1.0);
        const double hi = std::min(p, q);
        for (int k = 0; k <= 10000; ++k) {
            const double both = lo + (hi - lo) * k / 10000.0;
            const double match = 1.0 - p - q + 2.0 * both;
            if (match > best_match) {
                best_match = match;
                best_both = both;
            }
        }
        CHECK(c[j] == doctest::Approx(best_both).epsilon(1e-9));
    }

    const MarginalSpec with_zero({0.0, 0.4, 0.6}, {0.5, 0.5, 0.5});
    CHECK(c_vector(with_zero)[0] == 0.0);
}

TEST_CASE("consistent connectedness")
{
    CHECK(is_consistently_connected(MarginalSpec::uniform(4, 0.5), 0.0));
    CHECK_FALSE(is_consistently_connected(MarginalSpec({0.3, 0.9}, {0.4, 0.7}), 0.0));
    CHECK(is_consistently_connected(MarginalSpec({0.5, 0.5 + 1e-12}, {0.5, 0.5}), 1e-9));
}

TEST_CASE("hyperbox endpoints")
{
    const auto half = hyperbox(MarginalSpec::uniform(4, 0.5));
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(half.lo[i] == 0.0);
        CHECK(half.hi[i] == 0.5);
    }
    const auto box = hyperbox(MarginalSpec::uniform(3, 0.8));
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(box.lo[i] == doctest::Approx(0.6));
        CHECK(box.hi[i] == doctest::Approx(0.8));
    }
    const auto forced = hyperbox(MarginalSpec({1.0, 0.5}, {0.3, 0.5}));
    CHECK(forced.lo[0] == doctest::Approx(0.3));
    CHECK(forced.hi[0] == doctest::Approx(0.3));
    CHECK(forced.length(0) == doctest::Approx(0.0));
    CHECK(forced.degenerate());

    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        const auto b = hyperbox(ctx::testing::random_marginals(5, rng));
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(b.lo[i] >= 0.0);
            CHECK(b.lo[i] <= b.hi[i]);
            CHECK(b.hi[i] <= 1.0);
        }
    }
}

TEST_CASE("vertex enumeration and parity")
{
    const auto box = hyperbox(MarginalSpec::uniform(2, 0.5));
    const auto even = enumerate_vertices(box, ParityFilter::Even);
    REQUIRE(even.size() == 2);
    CHECK(even[0].pattern == 0b00);
    CHECK(even[0].coords == std::vector<double>{0.0, 0.0});
    CHECK(even[1].pattern == 0b11);
    CHECK(even[1].coords == std::vector<double>{0.5, 0.5});

    CHECK(enumerate_vertices(hyperbox(MarginalSpec::uniform(3, 0.5)), ParityFilter::Odd).size() == 4);

    const auto box4 = hyperbox(MarginalSpec::uniform(4, 0.5));
    const auto all = enumerate_vertices(box4, ParityFilter::All);
    CHECK(all.size() == 16);
    const auto& v = all[0b0111];  // RIGHT, RIGHT, RIGHT, LEFT
    CHECK(v.coords == std::vector<double>{0.5, 0.5, 0.5, 0.0});
    CHECK(v.parity == Parity::Odd);
    CHECK(v.endpoint(3) == Endpoint::Left);

    for (std::size_t n = 2; n <= 10; ++n) {
        const auto b = hyperbox(MarginalSpec::uniform(n, 0.5));
        CHECK(enumerate_vertices(b, ParityFilter::Even).size() == (std::size_t{1} << (n - 1)));
        CHECK(enumerate_vertices(b, ParityFilter::Odd).size() == (std::size_t{1} << (n - 1)));
    }
    CHECK_THROWS_AS(enumerate_vertices(hyperbox(MarginalSpec::uniform(21, 0.5)), ParityFilter::All),
                    Error);
}

TEST_CASE("demibox classification of known points")
{
    const auto box3 = hyperbox(MarginalSpec::uniform(3, 0.5));
    CHECK(demibox_contains(box3, std::vector<double>{0.25, 0.25, 0.25}) == Membership::Inside);

    const auto box4 = hyperbox(MarginalSpec::uniform(4, 0.5));
    CHECK(demibox_contains(box4, std::vector<double>{0.5, 0.5, 0.5, 0.0}) == Membership::Outside);

    const double hi = ctx::testing::tsirelson_high();
    const double lo = ctx::testing::tsirelson_low();
    CHECK(demibox_contains(box4, std::vector<double>{hi, hi, hi, lo}) == Membership::Outside);
    // Its corner sum at (1,1,1,0) in normalized units is 2 - sqrt 2.
    std::vector<double> u{2 * hi, 2 * hi, 2 * hi, 2 * lo};
    CHECK(min_odd_corner_distance(u) == doctest::Approx(2.0 - std::sqrt(2.0)));

    CHECK_THROWS_AS(demibox_contains(hyperbox(MarginalSpec({1.0, 0.5, 0.5}, {0.3, 0.5, 0.5})),
                                     std::vector<double>{0.3, 0.2, 0.2}),
                    Error);
}

TEST_CASE("demibox: every even vertex inside, every odd vertex outside")
{
    for (std::size_t n = 2; n <= 10; ++n) {
        std::mt19937_64 rng(n);
        const auto m = ctx::testing::random_marginals(n, rng);
        const auto box = hyperbox(m);
        for (const auto& v : enumerate_vertices(box, ParityFilter::All)) {
            const auto expected = v.parity == Parity::Even ? Membership::Inside : Membership::Outside;
            CHECK(demibox_contains(box, v.coords, 0.0) == expected);
        }
    }
}

TEST_CASE("corner-cut description equals the convex hull of even vertices")
{
    // Brute-force hull membership (Caratheodory) against the O(n) corner test,
    // points drawn in the unit cube and kept away from the surface.
    for (std::size_t n : {3U, 4U, 5U}) {
        const auto box = unit_box(n);
        std::vector<std::vector<double>> even;
        for (std::uint64_t p = 0; p < (std::uint64_t{1} << n); ++p) {
            if (vertex_parity(p, n) == Parity::Even) {
                even.push_back(normalized_vertex(p, n));
            }
        }
        std::mt19937_64 rng(100 + n);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        int checked = 0;
        const int points = n == 5 ? 120 : 400;
        for (int t = 0; t < points; ++t) {
            std::vector<double> x(n);
            for (auto& xi : x) {
                xi = u(rng);
            }
            const auto m = demibox_contains(box, x, 1e-6);
            if (m == Membership::Boundary) {
                continue;
            }
            ++checked;
            CHECK(in_convex_hull(even, x) == (m == Membership::Inside));
        }
        CHECK(checked > points / 2);
    }
}

TEST_CASE("demibox classification is invariant under cyclic rotation")
{
    std::mt19937_64 rng(99);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 3 + static_cast<std::size_t>(t % 5);
        const auto box = hyperbox(ctx::testing::random_marginals(n, rng));
        const auto x = ctx::testing::random_point(box, rng);
        Hyperbox rotated{std::vector<double>(n), std::vector<double>(n)};
        std::vector<double> rx(n);
        for (std::size_t i = 0; i < n; ++i) {
            rotated.lo[i] = box.lo[(i + 1) % n];
            rotated.hi[i] = box.hi[(i + 1) % n];
            rx[i] = x[(i + 1) % n];
        }
        CHECK(demibox_contains(box, x) == demibox_contains(rotated, rx));
    }
}

TEST_CASE("box and demibox volumes")
{
    CHECK(vol_box(hyperbox(MarginalSpec::uniform(4, 0.5))) == doctest::Approx(1.0 / 16));
    CHECK(vol_box(hyperbox(MarginalSpec::uniform(3, 0.8))) == doctest::Approx(0.008));
    CHECK(vol_box(hyperbox(MarginalSpec({1.0, 0.5}, {0.3, 0.5}))) == 0.0);

    CHECK(vol_demibox(hyperbox(MarginalSpec::uniform(2, 0.5))) == 0.0);
    CHECK(vol_demibox(hyperbox(MarginalSpec::uniform(4, 0.5))) == doctest::Approx(1.0 / 24));
    CHECK(vol_demibox(hyperbox(MarginalSpec::uniform(3, 0.8))) == doctest::Approx(0.008 / 3));
}

TEST_CASE("demibox volume formula is exact in rationals")
{
    for (std::size_t n = 2; n <= 12; ++n) {
        std::vector<ExactRational> first(n);
        std::vector<ExactRational> second(n);
        for (std::size_t i = 0; i < n; ++i) {
            first[i] = ExactRational(static_cast<long>(i % 5 + 3), 11);
            second[i] = ExactRational(static_cast<long>((2 * i) % 7 + 2), 9);
        }
        const auto box = hyperbox(ExactMarginalSpec(first, second));
        const ExactRational expected = vol_box(box) * (1 - epsilon_upper_bound(n));
        CHECK(vol_demibox(box) == expected);
    }
}

TEST_CASE("Monte Carlo integration of the demibox matches the volume formula")
{
    // 99% Wilson interval of the inside fraction must cover vol_demibox / vol_box.
    const double z = 2.5758293035489004;
    for (std::size_t n = 3; n <= 8; ++n) {
        std::mt19937_64 rng(1000 + n);
        const auto m = ctx::testing::random_marginals(n, rng);
        const auto box = hyperbox(m);
        if (box.degenerate()) {
            continue;
        }
        const int trials = 100000;
        int inside = 0;
        for (int t = 0; t < trials; ++t) {
            if (demibox_contains(box, ctx::testing::random_point(box, rng), 0.0) == Membership::Inside) {
                ++inside;
            }
        }
        const double p = static_cast<double>(inside) / trials;
        const double denom = 1 + z * z / trials;
        const double center = (p + z * z / (2.0 * trials)) / denom;
        const double half = z * std::sqrt(p * (1 - p) / trials + z * z / (4.0 * trials * trials)) / denom;
        const double target = vol_demibox(box) / vol_box(box);
        CHECK(target >= center - half);
        CHECK(target <= center + half);
    }
}

TEST_CASE("epsilon upper bound")
{
    CHECK(epsilon_upper_bound(2) == 1);
    CHECK(epsilon_upper_bound(5) == ExactRational(2, 15));
    CHECK(to_double(epsilon_upper_bound(50)) == doctest::Approx(1.8509e-50).epsilon(1e-4));
    CHECK_THROWS_AS(epsilon_upper_bound(1), Error);
    for (std::size_t n = 2; n < 60; ++n) {
        CHECK(epsilon_upper_bound(n + 1) / epsilon_upper_bound(n) ==
              ExactRational(2, static_cast<long>(n + 1)));
    }
}

TEST_CASE("bound table display rounds the third significant digit up")
{
    const std::vector<std::size_t> ranks{3, 10, 20};
    const auto rows = bound_table(ranks);
    CHECK(rows[0].exact == ExactRational(2, 3));
    CHECK(rows[0].display.text() == "6.67e-01");
    CHECK(rows[1].exact == ExactRational(512, 3628800));
    CHECK(rows[1].decimal == doctest::Approx(1.4109e-4).epsilon(1e-4));
    CHECK(rows[1].display.text() == "1.42e-04");
    CHECK(rows[2].display.text() == "2.16e-13");

    CHECK(ceiling_display(ExactRational(1)).text() == "1.00e+00");
    CHECK(ceiling_display(ExactRational(999001, 1000000)).text() == "1.00e+00");
    CHECK(ceiling_display(ExactRational(123, 1000)).text() == "1.23e-01");
}
