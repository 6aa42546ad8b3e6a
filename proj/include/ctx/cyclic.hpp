#pragma once

// Cyclic systems of dichotomous (0/1) random variables and the closed-form
// geometry of their Frechet hyperbox.
//
// Indexing is 0-based throughout: context i jointly records content i
// (its "first" variable) and content i+1 mod n (its "second" variable).
// Content i is therefore shared by the first variable of context i and the
// second variable of context i-1 mod n.

#include "ctx/error.hpp"
#include "ctx/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace ctx {

namespace detail {

template <class T>
bool is_probability(const T& x)
{
    if constexpr (std::is_floating_point_v<T>) {
        return std::isfinite(x) && x >= T(0) && x <= T(1);
    } else {
        return x >= T(0) && x <= T(1);
    }
}

template <class T>
T frechet_slack()
{
    if constexpr (std::is_floating_point_v<T>) {
        return T(1e-12);
    } else {
        return T(0);
    }
}

inline std::string context_label(std::size_t i)
{
    return "context " + std::to_string(i + 1);
}

}  // namespace detail

/// The 2n one-variable probabilities of a cyclic system of rank n.
template <class T>
class BasicMarginalSpec {
public:
    BasicMarginalSpec(std::vector<T> p_first, std::vector<T> p_second)
        : first_(std::move(p_first)), second_(std::move(p_second))
    {
        if (first_.size() != second_.size()) {
            throw Error(Errc::InvalidArgument, "p_first and p_second differ in length");
        }
        if (first_.size() < 2) {
            throw Error(Errc::RankTooSmall, "cyclic systems need rank n >= 2");
        }
        for (std::size_t i = 0; i < first_.size(); ++i) {
            if (!detail::is_probability(first_[i]) || !detail::is_probability(second_[i])) {
                throw Error(Errc::OutOfRange,
                            detail::context_label(i) + ": marginal probability outside [0,1]", i);
            }
        }
    }

    /// Every one of the 2n probabilities equal to `p`.
    static BasicMarginalSpec uniform(std::size_t n, const T& p)
    {
        return BasicMarginalSpec(std::vector<T>(n, p), std::vector<T>(n, p));
    }

    std::size_t rank() const noexcept { return first_.size(); }

    /// P(R_i^i = 1)
    const T& first(std::size_t context) const { return first_[context]; }
    /// P(R_{i+1}^i = 1)
    const T& second(std::size_t context) const { return second_[context]; }

    std::span<const T> firsts() const noexcept { return first_; }
    std::span<const T> seconds() const noexcept { return second_; }

    /// The two probabilities of content j: in context j and in context j-1.
    std::pair<T, T> content(std::size_t j) const
    {
        return {first_[j], second_[(j + rank() - 1) % rank()]};
    }

    bool operator==(const BasicMarginalSpec&) const = default;

private:
    std::vector<T> first_;
    std::vector<T> second_;
};

using MarginalSpec = BasicMarginalSpec<double>;
using ExactMarginalSpec = BasicMarginalSpec<ExactRational>;

/// Per-coordinate Frechet intervals of the context products b.
template <class T>
struct BasicHyperbox {
    std::vector<T> lo;
    std::vector<T> hi;

    std::size_t rank() const noexcept { return lo.size(); }
    T length(std::size_t i) const { return hi[i] - lo[i]; }
    std::vector<T> lengths() const
    {
        std::vector<T> out(rank());
        for (std::size_t i = 0; i < rank(); ++i) {
            out[i] = length(i);
        }
        return out;
    }
    bool degenerate() const
    {
        for (std::size_t i = 0; i < rank(); ++i) {
            if (!(hi[i] > lo[i])) {
                return true;
            }
        }
        return false;
    }
};

using Hyperbox = BasicHyperbox<double>;
using ExactHyperbox = BasicHyperbox<ExactRational>;

template <class T>
BasicHyperbox<T> hyperbox(const BasicMarginalSpec<T>& m)
{
    BasicHyperbox<T> box;
    box.lo.resize(m.rank());
    box.hi.resize(m.rank());
    for (std::size_t i = 0; i < m.rank(); ++i) {
        const T& x = m.first(i);
        const T& y = m.second(i);
        T sum = x + y - T(1);
        box.hi[i] = std::min(x, y);
        if (x == T(1) || y == T(1)) {
            box.lo[i] = box.hi[i];
        } else {
            box.lo[i] = sum > T(0) ? std::min(sum, box.hi[i]) : T(0);
        }
    }
    return box;
}

/// Maximal coincidence probabilities, content order (c[0] pairs context 0
/// with context n-1, c[j] pairs context j with context j-1).
template <class T>
std::vector<T> c_vector(const BasicMarginalSpec<T>& m)
{
    std::vector<T> c(m.rank());
    for (std::size_t j = 0; j < m.rank(); ++j) {
        auto [x, y] = m.content(j);
        c[j] = std::min(x, y);
    }
    return c;
}

bool is_consistently_connected(const MarginalSpec& m, double tol);

/// Marginals plus the context products b[i] = P(R_i^i = 1, R_{i+1}^i = 1).
template <class T>
class BasicCyclicSystem {
public:
    BasicCyclicSystem(BasicMarginalSpec<T> marginals, std::vector<T> b)
        : marginals_(std::move(marginals)), b_(std::move(b))
    {
        const std::size_t n = marginals_.rank();
        if (b_.size() != n) {
            throw Error(Errc::InvalidArgument,
                        "expected " + std::to_string(n) + " context products, got " +
                            std::to_string(b_.size()));
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!detail::is_probability(b_[i])) {
                throw Error(Errc::OutOfRange,
                            detail::context_label(i) + ": p_both outside [0,1]", i);
            }
        }
        const auto box = hyperbox(marginals_);
        const T slack = detail::frechet_slack<T>();
        for (std::size_t i = 0; i < n; ++i) {
            if (b_[i] < box.lo[i] - slack || b_[i] > box.hi[i] + slack) {
                throw Error(Errc::FrechetViolation,
                            detail::context_label(i) +
                                ": p_both violates the Frechet bounds of its marginals",
                            i);
            }
        }
    }

    std::size_t rank() const noexcept { return marginals_.rank(); }
    const BasicMarginalSpec<T>& marginals() const noexcept { return marginals_; }
    std::span<const T> b() const noexcept { return b_; }

    bool operator==(const BasicCyclicSystem&) const = default;

private:
    BasicMarginalSpec<T> marginals_;
    std::vector<T> b_;
};

using CyclicSystem = BasicCyclicSystem<double>;
using ExactCyclicSystem = BasicCyclicSystem<ExactRational>;

template <class T>
BasicCyclicSystem<T> new_system(BasicMarginalSpec<T> marginals, std::vector<T> b)
{
    return BasicCyclicSystem<T>(std::move(marginals), std::move(b));
}

enum class Endpoint : std::uint8_t { Left, Right };
enum class Parity : std::uint8_t { Even, Odd };
enum class ParityFilter : std::uint8_t { Even, Odd, All };

/// Bit i of `pattern` is set iff coordinate i sits at its right endpoint.
struct BoxVertex {
    std::uint64_t pattern = 0;
    std::vector<double> coords;
    Parity parity = Parity::Even;

    Endpoint endpoint(std::size_t i) const
    {
        return ((pattern >> i) & 1U) ? Endpoint::Right : Endpoint::Left;
    }
};

Parity vertex_parity(std::uint64_t pattern, std::size_t n);

inline constexpr std::size_t kDefaultVertexCap = 20;

std::vector<BoxVertex> enumerate_vertices(const Hyperbox& box, ParityFilter which,
                                          std::size_t cap = kDefaultVertexCap);

enum class Membership : std::uint8_t { Inside, Outside, Boundary };

/// Classifies a point against the demibox (convex hull of the even box
/// vertices) using the box and the 2^{n-1} odd-corner cuts
/// sum_i |u_i - v_i| >= 1 in normalized coordinates u = (x - lo) / L.
/// `tol` is measured in normalized units; with tol = 0 the closed demibox
/// is reported as Inside.
Membership demibox_contains(const Hyperbox& box, std::span<const double> point,
                            double tol = 1e-9);

/// min over odd vertices v of sum_i |u_i - v_i| (O(n), no enumeration).
double min_odd_corner_distance(std::span<const double> normalized);

template <class T>
T vol_box(const BasicHyperbox<T>& box)
{
    T v(1);
    for (std::size_t i = 0; i < box.rank(); ++i) {
        v *= box.length(i);
    }
    return v;
}

/// 2^{n-1}/n! in the scalar type of the caller.
template <class T>
T corner_fraction(std::size_t n)
{
    T f(1);
    for (std::size_t k = 2; k <= n; ++k) {
        f = f * T(2) / T(static_cast<long>(k));
    }
    return f;
}

/// Box volume minus the 2^{n-1} odd corners of volume prod(L)/n! each.
template <class T>
T vol_demibox(const BasicHyperbox<T>& box)
{
    const T vb = vol_box(box);
    if (box.rank() <= 2) {
        return T(0);
    }
    T v = vb - vb * corner_fraction<T>(box.rank());
    return v > T(0) ? v : T(0);
}

/// 2^{n-1}/n!
ExactRational epsilon_upper_bound(std::size_t n);

/// Three significant digits with the last one rounded up (ceiling).
struct CeilingDisplay {
    int digits = 0;  // 100..999
    int exponent = 0;

    double value() const;
    /// "6.67e-01"
    std::string text() const;
    bool operator==(const CeilingDisplay&) const = default;
};

CeilingDisplay ceiling_display(const ExactRational& positive);

struct BoundRow {
    std::size_t n = 0;
    ExactRational exact;
    double decimal = 0.0;
    CeilingDisplay display;
};

std::vector<BoundRow> bound_table(std::span<const std::size_t> ranks);

}  // namespace ctx
