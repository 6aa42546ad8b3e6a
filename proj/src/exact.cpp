#include "ctx/exact.hpp"

#include "ctx/incidence.hpp"

namespace ctx {

namespace {

/// Column entries as row lists; every entry of M is 0 or 1.
std::vector<std::vector<std::uint32_t>> sparse_columns(std::size_t n)
{
    const auto rows = incidence_rows(n);
    const std::uint64_t count = CouplingIndex(n).column_count();
    std::vector<std::vector<std::uint32_t>> cols(count);
    for (std::uint64_t j = 0; j < count; ++j) {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].entry(j)) {
                cols[j].push_back(static_cast<std::uint32_t>(r));
            }
        }
    }
    return cols;
}

}  // namespace

ExactFeasibilityResult check_noncontextual_exact(const ExactCyclicSystem& system,
                                                 std::size_t max_rank)
{
    const std::size_t n = system.rank();
    if (n > max_rank) {
        throw Error(Errc::DimensionCap, "exact LP is capped at rank " + std::to_string(max_rank));
    }
    const std::vector<ExactRational> rhs = incidence_rhs(system.marginals(), system.b());
    const std::size_t m = rhs.size();
    const auto cols = sparse_columns(n);
    const std::uint64_t structural = cols.size();

    // Phase one from the all-artificial basis (rhs >= 0, so B = I).
    std::vector<std::uint64_t> basis(m);
    std::vector<std::vector<ExactRational>> binv(m, std::vector<ExactRational>(m));
    std::vector<ExactRational> xb(rhs);
    for (std::size_t i = 0; i < m; ++i) {
        basis[i] = structural + i;
        binv[i][i] = 1;
    }
    auto artificial = [&](std::uint64_t id) { return id >= structural; };

    ExactFeasibilityResult result;
    std::vector<ExactRational> y(m);
    std::vector<ExactRational> direction(m);
    for (;;) {
        // y' = c_B' B^{-1} with unit cost on artificials.
        for (std::size_t r = 0; r < m; ++r) {
            y[r] = 0;
            for (std::size_t i = 0; i < m; ++i) {
                if (artificial(basis[i]) && binv[i][r] != 0) {
                    y[r] += binv[i][r];
                }
            }
        }
        // Bland: lowest-index column with negative reduced cost -y'A_j.
        std::uint64_t entering = structural;
        for (std::uint64_t j = 0; j < structural; ++j) {
            ExactRational dot = 0;
            for (auto r : cols[j]) {
                dot += y[r];
            }
            if (dot > 0) {
                entering = j;
                break;
            }
        }
        if (entering == structural) {
            break;
        }
        for (std::size_t i = 0; i < m; ++i) {
            direction[i] = 0;
            for (auto r : cols[entering]) {
                direction[i] += binv[i][r];
            }
        }
        std::size_t leave = m;
        ExactRational step;
        for (std::size_t i = 0; i < m; ++i) {
            if (direction[i] <= 0) {
                continue;
            }
            ExactRational ratio = xb[i] / direction[i];
            if (leave == m || ratio < step || (ratio == step && basis[i] < basis[leave])) {
                leave = i;
                step = ratio;
            }
        }
        if (leave == m) {
            throw Error(Errc::SolverStall, "exact phase one is unbounded (cannot happen)");
        }
        const ExactRational pivot = direction[leave];
        for (std::size_t i = 0; i < m; ++i) {
            if (i != leave && direction[i] != 0) {
                xb[i] -= step * direction[i];
            }
        }
        xb[leave] = step;
        for (auto& v : binv[leave]) {
            if (v != 0) {
                v /= pivot;
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || direction[i] == 0) {
                continue;
            }
            const ExactRational factor = direction[i];
            for (std::size_t r = 0; r < m; ++r) {
                if (binv[leave][r] != 0) {
                    binv[i][r] -= factor * binv[leave][r];
                }
            }
        }
        basis[leave] = entering;
        ++result.iterations;
    }

    ExactRational mass = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (artificial(basis[i])) {
            mass += xb[i];
        }
    }
    result.infeasibility = mass;
    if (mass == 0) {
        result.verdict = Verdict::Noncontextual;
        for (std::size_t i = 0; i < m; ++i) {
            if (!artificial(basis[i]) && xb[i] != 0) {
                result.witness.push_back({basis[i], xb[i]});
            }
        }
    } else {
        result.verdict = Verdict::Contextual;
        result.certificate = y;
    }
    return result;
}

CyclicSystem to_floating(const ExactCyclicSystem& system)
{
    const std::size_t n = system.rank();
    std::vector<double> first(n);
    std::vector<double> second(n);
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) {
        first[i] = to_double(system.marginals().first(i));
        second[i] = to_double(system.marginals().second(i));
        b[i] = to_double(system.b()[i]);
    }
    return CyclicSystem(MarginalSpec(std::move(first), std::move(second)), std::move(b));
}

}  // namespace ctx
