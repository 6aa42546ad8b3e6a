#include "ctx/incidence.hpp"

#include <array>
#include <limits>

namespace ctx {

CouplingIndex::CouplingIndex(std::size_t n) : n_(n)
{
    if (n < 2) {
        throw Error(Errc::RankTooSmall, "cyclic systems need rank n >= 2");
    }
    if (n > 31) {
        throw Error(Errc::DimensionCap, "coupling columns are indexed by 64-bit integers (n <= 31)");
    }
}

std::uint64_t CouplingIndex::column_count() const noexcept
{
    return std::uint64_t{1} << (2 * n_);
}

std::string CouplingIndex::variable_name(std::size_t k) const
{
    const std::size_t context = k / 2;
    const std::size_t content = (k % 2 == 0) ? context : (context + 1) % n_;
    return "S_" + std::to_string(content + 1) + "^" + std::to_string(context + 1);
}

std::vector<IncidenceRow> incidence_rows(std::size_t n)
{
    const CouplingIndex index(n);
    std::vector<IncidenceRow> rows;
    rows.reserve(incidence_row_count(n));
    rows.push_back({RowKind::Normalization, -1, -1});
    for (std::size_t k = 0; k < 2 * n; ++k) {
        rows.push_back({RowKind::Single, static_cast<int>(k), -1});
    }
    for (std::size_t i = 0; i < n; ++i) {
        rows.push_back({RowKind::ContextProduct,
                        static_cast<int>(CouplingIndex::first_of_context(i)),
                        static_cast<int>(CouplingIndex::second_of_context(i))});
    }
    for (std::size_t j = 0; j < n; ++j) {
        auto [x, y] = index.content_variables(j);
        rows.push_back({RowKind::ContentProduct, static_cast<int>(x), static_cast<int>(y)});
    }
    return rows;
}

void incidence_column(std::size_t n, std::uint64_t index, std::span<double> out)
{
    const std::size_t vars = 2 * n;
    out[0] = 1.0;
    for (std::size_t k = 0; k < vars; ++k) {
        out[1 + k] = CouplingIndex::value(index, k) ? 1.0 : 0.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[context_row(n, i)] = out[1 + 2 * i] * out[2 + 2 * i];
        const std::size_t prev = (2 * i + vars - 1) % vars;
        out[content_row(n, i)] = out[1 + 2 * i] * out[1 + prev];
    }
}

IncidenceSystem::IncidenceSystem(std::size_t n, std::vector<double> rhs)
    : n_(n), rows_(incidence_rows(n)), rhs_(std::move(rhs))
{
    if (rhs_.size() != rows_.size()) {
        throw Error(Errc::InvalidArgument, "right-hand side must have 4n+1 entries");
    }
}

void IncidenceSystem::column(std::uint64_t index, std::span<double> out) const
{
    incidence_column(n_, index, out);
}

IncidenceSystem build_incidence(const CyclicSystem& system)
{
    return IncidenceSystem(system.rank(), incidence_rhs(system.marginals(), system.b()));
}

PricedColumn price_column(std::span<const double> weights, std::size_t n)
{
    const CouplingIndex index(n);
    if (weights.size() != incidence_row_count(n)) {
        throw Error(Errc::InvalidArgument, "pricing needs 4n+1 weights");
    }
    const std::size_t vars = 2 * n;
    auto node = [&](std::size_t k) { return weights[1 + k]; };
    // Edge k joins variables k and k+1 mod 2n.
    auto edge = [&](std::size_t k) {
        return (k % 2 == 0) ? weights[context_row(n, k / 2)]
                            : weights[content_row(n, ((k + 1) / 2) % n)];
    };

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<std::array<double, 2>> cost(vars);
    std::vector<std::array<std::uint8_t, 2>> from(vars);

    PricedColumn best{0, inf};
    for (int x0 = 0; x0 <= 1; ++x0) {
        cost[0] = {x0 == 0 ? 0.0 : inf, x0 == 1 ? node(0) : inf};
        for (std::size_t k = 1; k < vars; ++k) {
            const double e = edge(k - 1);
            for (int s = 0; s <= 1; ++s) {
                const double via0 = cost[k - 1][0];
                const double via1 = cost[k - 1][1] + e * s;
                const bool take1 = via1 < via0;
                from[k][s] = take1 ? 1 : 0;
                cost[k][s] = (take1 ? via1 : via0) + node(k) * s;
            }
        }
        const double close = edge(vars - 1) * x0;
        const double end0 = cost[vars - 1][0];
        const double end1 = cost[vars - 1][1] + close;
        int s = end1 < end0 ? 1 : 0;
        const double total = weights[0] + (s ? end1 : end0);

        std::uint64_t column = 0;
        for (std::size_t k = vars - 1; k > 0; --k) {
            if (s) {
                column |= std::uint64_t{1} << k;
            }
            s = from[k][s];
        }
        if (x0) {
            column |= 1U;
        }
        if (total < best.value || (total == best.value && column < best.column)) {
            best = {column, total};
        }
    }
    return best;
}

}  // namespace ctx
