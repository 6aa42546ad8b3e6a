#include "ctx/cyclic.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>

namespace ctx {

bool is_consistently_connected(const MarginalSpec& m, double tol)
{
    for (std::size_t j = 0; j < m.rank(); ++j) {
        auto [x, y] = m.content(j);
        if (std::abs(x - y) > tol) {
            return false;
        }
    }
    return true;
}

Parity vertex_parity(std::uint64_t pattern, std::size_t n)
{
    const std::uint64_t mask = n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
    const auto lefts = static_cast<std::size_t>(n - std::popcount(pattern & mask));
    return (lefts % 2 == 0) ? Parity::Even : Parity::Odd;
}

std::vector<BoxVertex> enumerate_vertices(const Hyperbox& box, ParityFilter which, std::size_t cap)
{
    const std::size_t n = box.rank();
    if (n > cap || n >= 63) {
        throw Error(Errc::CapExceeded, "vertex enumeration capped at n = " + std::to_string(cap));
    }
    std::vector<BoxVertex> out;
    const std::uint64_t count = std::uint64_t{1} << n;
    out.reserve(which == ParityFilter::All ? count : count / 2);
    for (std::uint64_t pattern = 0; pattern < count; ++pattern) {
        const Parity parity = vertex_parity(pattern, n);
        if ((which == ParityFilter::Even && parity != Parity::Even) ||
            (which == ParityFilter::Odd && parity != Parity::Odd)) {
            continue;
        }
        BoxVertex v;
        v.pattern = pattern;
        v.parity = parity;
        v.coords.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            v.coords[i] = ((pattern >> i) & 1U) ? box.hi[i] : box.lo[i];
        }
        out.push_back(std::move(v));
    }
    return out;
}

double min_odd_corner_distance(std::span<const double> u)
{
    // Round each coordinate to its nearest corner value; if that corner has an
    // even number of zeros, flip the cheapest coordinate.
    double sum = 0.0;
    std::size_t zeros = 0;
    double cheapest_flip = std::numeric_limits<double>::infinity();
    for (double x : u) {
        const bool to_one = x >= 0.5;
        const double near = to_one ? std::abs(x - 1.0) : std::abs(x);
        const double far = to_one ? std::abs(x) : std::abs(x - 1.0);
        sum += near;
        zeros += to_one ? 0 : 1;
        cheapest_flip = std::min(cheapest_flip, far - near);
    }
    if (zeros % 2 == 0) {
        sum += cheapest_flip;
    }
    return sum;
}

Membership demibox_contains(const Hyperbox& box, std::span<const double> point, double tol)
{
    const std::size_t n = box.rank();
    if (n < 2) {
        throw Error(Errc::RankTooSmall, "cyclic systems need rank n >= 2");
    }
    if (point.size() != n) {
        throw Error(Errc::InvalidArgument, "point dimension does not match the box");
    }
    std::vector<double> u(n);
    bool interior = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double len = box.length(i);
        if (!(len > 0.0)) {
            throw Error(Errc::DegenerateBox, "box coordinate " + std::to_string(i + 1) +
                                                 " has zero length",
                        i);
        }
        u[i] = (point[i] - box.lo[i]) / len;
        if (u[i] < -tol || u[i] > 1.0 + tol) {
            return Membership::Outside;
        }
        if (u[i] < tol || u[i] > 1.0 - tol) {
            interior = false;
        }
    }
    const double corner = min_odd_corner_distance(u);
    if (corner < 1.0 - tol) {
        return Membership::Outside;
    }
    if (corner >= 1.0 + tol && interior) {
        return Membership::Inside;
    }
    return Membership::Boundary;
}

ExactRational epsilon_upper_bound(std::size_t n)
{
    if (n < 2) {
        throw Error(Errc::RankTooSmall, "the bound is defined for n >= 2");
    }
    BigInt num = 1;
    BigInt den = 1;
    for (std::size_t k = 2; k <= n; ++k) {
        num *= 2;
        den *= static_cast<unsigned long>(k);
    }
    return ExactRational(num, den);
}

namespace {

BigInt pow10(int e)
{
    BigInt r = 1;
    for (int i = 0; i < e; ++i) {
        r *= 10;
    }
    return r;
}

ExactRational scale10(const ExactRational& q, int e)
{
    return e >= 0 ? ExactRational(q * pow10(e)) : ExactRational(q / ExactRational(pow10(-e)));
}

BigInt ceil_of(const ExactRational& q)
{
    const BigInt num = boost::multiprecision::numerator(q);
    const BigInt den = boost::multiprecision::denominator(q);
    BigInt quot = num / den;
    if (quot * den != num && num > 0) {
        quot += 1;
    }
    return quot;
}

}  // namespace

double CeilingDisplay::value() const
{
    return digits / 100.0 * std::pow(10.0, exponent);
}

std::string CeilingDisplay::text() const
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%d.%02de%c%02d", digits / 100, digits % 100,
                  exponent < 0 ? '-' : '+', std::abs(exponent));
    return buf;
}

CeilingDisplay ceiling_display(const ExactRational& q)
{
    if (q <= 0) {
        throw Error(Errc::InvalidArgument, "ceiling display needs a positive value");
    }
    const auto num_digits = static_cast<int>(boost::multiprecision::numerator(q).str().size());
    const auto den_digits = static_cast<int>(boost::multiprecision::denominator(q).str().size());
    int e = num_digits - den_digits;
    // Settle e so that 10^e <= q < 10^{e+1}.
    while (scale10(q, -e) < 1) {
        --e;
    }
    while (scale10(q, -e) >= 10) {
        ++e;
    }
    BigInt digits = ceil_of(scale10(q, 2 - e));
    if (digits >= 1000) {
        digits = 100;
        ++e;
    }
    return CeilingDisplay{digits.convert_to<int>(), e};
}

std::vector<BoundRow> bound_table(std::span<const std::size_t> ranks)
{
    std::vector<BoundRow> rows;
    rows.reserve(ranks.size());
    for (std::size_t n : ranks) {
        BoundRow row;
        row.n = n;
        row.exact = epsilon_upper_bound(n);
        row.decimal = to_double(row.exact);
        row.display = ceiling_display(row.exact);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace ctx
