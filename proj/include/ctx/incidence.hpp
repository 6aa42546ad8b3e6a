#pragma once

// The 0/1 incidence system M h = (1, a, b, c) over couplings of a cyclic
// system.
//
// Coupling variables are ordered S_1^1, S_2^1, S_2^2, S_3^2, ..., S_n^n, S_1^n,
// i.e. variable 2i is the first and variable 2i+1 the second variable of
// context i (0-based). A column index is the integer whose bit k is the value
// of variable k, so columns range over 0 .. 4^n - 1.
//
// Rows: normalization, 2n single variables (in variable order), n context
// products (variables 2i, 2i+1), n content products (variables 2j and
// 2j-1 mod 2n). Read around the 2n-cycle of variables, row "edge k" joins
// variables k and k+1 mod 2n; even edges are contexts, odd edges contents.

#include "ctx/cyclic.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ctx {

class CouplingIndex {
public:
    explicit CouplingIndex(std::size_t n);

    std::size_t rank() const noexcept { return n_; }
    std::size_t variable_count() const noexcept { return 2 * n_; }
    std::uint64_t column_count() const noexcept;

    static std::size_t first_of_context(std::size_t i) noexcept { return 2 * i; }
    static std::size_t second_of_context(std::size_t i) noexcept { return 2 * i + 1; }

    /// The two variables measuring content j: (first of context j, second of context j-1).
    std::pair<std::size_t, std::size_t> content_variables(std::size_t j) const noexcept
    {
        return {2 * j, (2 * j + 2 * n_ - 1) % (2 * n_)};
    }

    /// "S_2^1" style name, 1-based like the usual notation.
    std::string variable_name(std::size_t k) const;

    static bool value(std::uint64_t column, std::size_t k) noexcept { return (column >> k) & 1U; }

private:
    std::size_t n_;
};

enum class RowKind : std::uint8_t { Normalization, Single, ContextProduct, ContentProduct };

struct IncidenceRow {
    RowKind kind = RowKind::Normalization;
    int first = -1;   // variable index, -1 if unused
    int second = -1;  // second variable of a product row

    int entry(std::uint64_t column) const noexcept
    {
        switch (kind) {
        case RowKind::Normalization:
            return 1;
        case RowKind::Single:
            return CouplingIndex::value(column, static_cast<std::size_t>(first)) ? 1 : 0;
        default:
            return (CouplingIndex::value(column, static_cast<std::size_t>(first)) &&
                    CouplingIndex::value(column, static_cast<std::size_t>(second)))
                       ? 1
                       : 0;
        }
    }
};

/// 4n+1 row descriptors in the canonical order.
std::vector<IncidenceRow> incidence_rows(std::size_t n);

inline std::size_t incidence_row_count(std::size_t n) noexcept { return 4 * n + 1; }
inline std::size_t context_row(std::size_t n, std::size_t i) noexcept { return 1 + 2 * n + i; }
inline std::size_t content_row(std::size_t n, std::size_t j) noexcept { return 1 + 3 * n + j; }

/// (1, a-tail, b, c) for the given marginals and context products.
template <class T>
std::vector<T> incidence_rhs(const BasicMarginalSpec<T>& m, std::span<const T> b)
{
    const std::size_t n = m.rank();
    std::vector<T> rhs;
    rhs.reserve(incidence_row_count(n));
    rhs.push_back(T(1));
    for (std::size_t i = 0; i < n; ++i) {
        rhs.push_back(m.first(i));
        rhs.push_back(m.second(i));
    }
    for (std::size_t i = 0; i < n; ++i) {
        rhs.push_back(b[i]);
    }
    for (const T& c : c_vector(m)) {
        rhs.push_back(c);
    }
    return rhs;
}

/// Implicit incidence matrix plus right-hand side; columns are generated on
/// demand from the coupling index.
class IncidenceSystem {
public:
    IncidenceSystem(std::size_t n, std::vector<double> rhs);

    std::size_t rank() const noexcept { return n_; }
    std::size_t row_count() const noexcept { return rows_.size(); }
    std::uint64_t column_count() const noexcept { return CouplingIndex(n_).column_count(); }
    std::span<const IncidenceRow> rows() const noexcept { return rows_; }
    std::span<const double> rhs() const noexcept { return rhs_; }

    int entry(std::size_t row, std::uint64_t column) const { return rows_[row].entry(column); }
    void column(std::uint64_t index, std::span<double> out) const;

private:
    std::size_t n_;
    std::vector<IncidenceRow> rows_;
    std::vector<double> rhs_;
};

IncidenceSystem build_incidence(const CyclicSystem& system);

/// Writes column `index` of the rank-n incidence matrix into `out` (4n+1 entries).
void incidence_column(std::size_t n, std::uint64_t index, std::span<double> out);

struct PricedColumn {
    std::uint64_t column = 0;
    double value = 0.0;
};

/// Column minimizing sum_r weights[r] * M[r][column] over all 4^n columns,
/// by dynamic programming around the variable cycle in O(n). Ties go to the
/// lowest column index.
PricedColumn price_column(std::span<const double> weights, std::size_t n);

}  // namespace ctx
