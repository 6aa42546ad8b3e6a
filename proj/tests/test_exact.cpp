#include "ctx/exact.hpp"
#include "ctx/incidence.hpp"

#include "test_support.hpp"

#include "doctest.h"

#include <Eigen/Dense>

#include <random>

using namespace ctx;

namespace {

using Q = ExactRational;

ExactCyclicSystem half_exact(std::vector<Q> b)
{
    const std::size_t n = b.size();
    return ExactCyclicSystem(ExactMarginalSpec::uniform(n, Q(1, 2)), std::move(b));
}

std::vector<Q> exact_column(std::size_t n, std::uint64_t c)
{
    std::vector<Q> out;
    for (double v : ctx::testing::naive_column(n, c)) {
        out.emplace_back(static_cast<int>(v));
    }
    return out;
}

/// Solves A x = rhs exactly; false if A is singular.
bool solve_exact(std::vector<std::vector<Q>> a, std::vector<Q> rhs, std::vector<Q>& x)
{
    const std::size_t m = rhs.size();
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t p = c;
        while (p < m && a[p][c] == 0) {
            ++p;
        }
        if (p == m) {
            return false;
        }
        std::swap(a[p], a[c]);
        std::swap(rhs[p], rhs[c]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == c || a[r][c] == 0) {
                continue;
            }
            const Q f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < m; ++k) {
                a[r][k] -= f * a[c][k];
            }
            rhs[r] -= f * rhs[c];
        }
    }
    x.resize(m);
    for (std::size_t r = 0; r < m; ++r) {
        x[r] = rhs[r] / a[r][r];
    }
    return true;
}

/// Feasibility by enumerating every basis of the 9 x 16 rank-2 system:
/// a feasible LP has a basic feasible solution.
bool feasible_by_bases(const ExactCyclicSystem& s)
{
    const std::size_t n = 2;
    const std::size_t m = incidence_row_count(n);
    const std::size_t cols = 16;
    const auto rhs = incidence_rhs(s.marginals(), s.b());
    Eigen::VectorXd rhs_d(static_cast<Eigen::Index>(m));
    for (std::size_t r = 0; r < m; ++r) {
        rhs_d[static_cast<Eigen::Index>(r)] = to_double(rhs[r]);
    }
    std::vector<std::size_t> pick(m);
    for (std::size_t i = 0; i < m; ++i) {
        pick[i] = i;
    }
    for (;;) {
        Eigen::MatrixXd a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
        for (std::size_t c = 0; c < m; ++c) {
            const auto col = ctx::testing::naive_column(n, pick[c]);
            for (std::size_t r = 0; r < m; ++r) {
                a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = col[r];
            }
        }
        const auto lu = a.fullPivLu();
        if (lu.isInvertible()) {
            const Eigen::VectorXd x = lu.solve(rhs_d);
            if (x.minCoeff() >= -1e-7) {
                std::vector<std::vector<Q>> aq(m, std::vector<Q>(m));
                for (std::size_t c = 0; c < m; ++c) {
                    const auto col = exact_column(n, pick[c]);
                    for (std::size_t r = 0; r < m; ++r) {
                        aq[r][c] = col[r];
                    }
                }
                std::vector<Q> xq;
                if (solve_exact(aq, rhs, xq) &&
                    std::all_of(xq.begin(), xq.end(), [](const Q& v) { return v >= 0; })) {
                    return true;
                }
            }
        }
        std::size_t i = m;
        while (i > 0 && pick[i - 1] == cols - m + (i - 1)) {
            --i;
        }
        if (i == 0) {
            return false;
        }
        ++pick[i - 1];
        for (std::size_t j = i; j < m; ++j) {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

void check_exact_result(const ExactCyclicSystem& s, const ExactFeasibilityResult& r)
{
    const std::size_t n = s.rank();
    const auto rhs = incidence_rhs(s.marginals(), s.b());
    if (r.verdict == Verdict::Noncontextual) {
        std::vector<Q> mh(rhs.size());
        for (const auto& w : r.witness) {
            CHECK(w.mass >= 0);
            const auto col = exact_column(n, w.column);
            for (std::size_t k = 0; k < col.size(); ++k) {
                mh[k] += w.mass * col[k];
            }
        }
        CHECK(mh == rhs);
    } else {
        REQUIRE(r.certificate.size() == rhs.size());
        for (std::uint64_t c = 0; c < CouplingIndex(n).column_count(); ++c) {
            const auto col = exact_column(n, c);
            Q v = 0;
            for (std::size_t k = 0; k < col.size(); ++k) {
                v += r.certificate[k] * col[k];
            }
            REQUIRE(v <= 0);
        }
        Q y_rhs = 0;
        for (std::size_t k = 0; k < rhs.size(); ++k) {
            y_rhs += r.certificate[k] * rhs[k];
        }
        CHECK(y_rhs > 0);
        CHECK(r.infeasibility > 0);
    }
}

}  // namespace

TEST_CASE("exact verdicts at known points")
{
    const auto pr = half_exact({Q(1, 2), Q(1, 2), Q(1, 2), Q(0)});
    const auto r = check_noncontextual_exact(pr);
    CHECK(r.verdict == Verdict::Contextual);
    CHECK(r.infeasibility == Q(1, 2));
    check_exact_result(pr, r);

    const auto even = half_exact({Q(0), Q(0), Q(1, 2)});
    const auto e = check_noncontextual_exact(even);
    CHECK(e.verdict == Verdict::Noncontextual);
    check_exact_result(even, e);

    // At n = 2 the demibox is the diagonal segment of the box.
    CHECK(check_noncontextual_exact(half_exact({Q(1, 4), Q(1, 4)})).verdict ==
          Verdict::Noncontextual);
    CHECK(check_noncontextual_exact(half_exact({Q(1, 4), Q(1, 8)})).verdict ==
          Verdict::Contextual);
    const auto mid = half_exact({Q(1, 4), Q(1, 4), Q(1, 4)});
    CHECK(check_noncontextual_exact(mid).verdict == Verdict::Noncontextual);
}

TEST_CASE("exact LP agrees with basis enumeration at rank 2")
{
    std::mt19937_64 rng(2718);
    std::uniform_int_distribution<int> grid(0, 12);
    int contextual = 0;
    int noncontextual = 0;
    for (int t = 0; t < 120; ++t) {
        std::vector<Q> f(2), s(2), b(2);
        for (std::size_t i = 0; i < 2; ++i) {
            f[i] = Q(grid(rng), 12);
            s[i] = Q(grid(rng), 12);
        }
        const ExactMarginalSpec m(f, s);
        const auto box = hyperbox(m);
        std::uniform_int_distribution<int> step(0, 6);
        for (std::size_t i = 0; i < 2; ++i) {
            b[i] = box.lo[i] + box.length(i) * Q(step(rng), 6);
        }
        const ExactCyclicSystem sys(m, b);
        const auto r = check_noncontextual_exact(sys);
        const bool oracle = feasible_by_bases(sys);
        CHECK((r.verdict == Verdict::Noncontextual) == oracle);
        check_exact_result(sys, r);
        (oracle ? noncontextual : contextual) += 1;
    }
    CHECK(contextual > 5);
    CHECK(noncontextual > 5);
}

TEST_CASE("exact witnesses and certificates are valid up to rank 4")
{
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> grid(0, 8);
    for (std::size_t n = 3; n <= 4; ++n) {
        for (int t = 0; t < 10; ++t) {
            std::vector<Q> f(n), s(n), b(n);
            for (std::size_t i = 0; i < n; ++i) {
                f[i] = Q(grid(rng), 8);
                s[i] = Q(grid(rng), 8);
            }
            const ExactMarginalSpec m(f, s);
            const auto box = hyperbox(m);
            std::uniform_int_distribution<int> step(0, 4);
            for (std::size_t i = 0; i < n; ++i) {
                b[i] = box.lo[i] + box.length(i) * Q(step(rng), 4);
            }
            const ExactCyclicSystem sys(m, b);
            check_exact_result(sys, check_noncontextual_exact(sys));
        }
    }
}

TEST_CASE("exact LP refuses ranks above the cap")
{
    const auto big = half_exact(std::vector<Q>(6, Q(1, 4)));
    try {
        check_noncontextual_exact(big);
        FAIL("expected DimensionCap");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::DimensionCap);
    }
}

TEST_CASE("to_floating keeps the nearest doubles")
{
    const auto s = half_exact({Q(1, 3), Q(1, 4), Q(1, 5)});
    const auto f = to_floating(s);
    CHECK(f.b()[0] == 1.0 / 3.0);
    CHECK(f.b()[2] == 0.2);
    CHECK(f.marginals().first(1) == 0.5);
}
