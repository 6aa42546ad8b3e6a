#include "ctx/rational.hpp"

#include "ctx/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

namespace ctx {

const char* errc_name(Errc code) noexcept
{
    switch (code) {
    case Errc::RankTooSmall: return "RankTooSmall";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::FrechetViolation: return "FrechetViolation";
    case Errc::DegenerateBox: return "DegenerateBox";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::SolverStall: return "SolverStall";
    case Errc::DimensionCap: return "DimensionCap";
    case Errc::NotContextual: return "NotContextual";
    case Errc::NotNoncontextual: return "NotNoncontextual";
    case Errc::Parse: return "Parse";
    case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

std::string to_fraction_string(const ExactRational& value)
{
    return boost::multiprecision::numerator(value).str() + "/" +
           boost::multiprecision::denominator(value).str();
}

namespace {

[[noreturn]] void bad_number(std::string_view text)
{
    throw Error(Errc::Parse, "not a rational or decimal number: '" + std::string(text) + "'");
}

bool all_digits(std::string_view s)
{
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

// cpp_int reads a leading 0 as an octal prefix.
BigInt decimal_integer(std::string_view digits)
{
    const auto first = digits.find_first_not_of('0');
    if (first == std::string_view::npos) {
        return 0;
    }
    return BigInt{std::string(digits.substr(first))};
}

BigInt parse_integer(std::string_view s, std::string_view whole)
{
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) {
        bad_number(whole);
    }
    BigInt v = decimal_integer(s);
    return negative ? BigInt(-v) : v;
}

BigInt pow10(long e)
{
    BigInt r = 1;
    for (long i = 0; i < e; ++i) {
        r *= 10;
    }
    return r;
}

}  // namespace

ExactRational parse_rational(std::string_view text)
{
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    if (s.empty()) {
        bad_number(text);
    }

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        BigInt num = parse_integer(s.substr(0, slash), text);
        BigInt den = parse_integer(s.substr(slash + 1), text);
        if (den == 0) {
            throw Error(Errc::Parse, "zero denominator in '" + std::string(text) + "'");
        }
        return ExactRational(num, den);
    }

    // Decimal: [sign] digits [. digits] [(e|E) [sign] digits]
    bool negative = false;
    if (s.front() == '-' || s.front() == '+') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_part = s.substr(e + 1);
        s = s.substr(0, e);
        bool exp_neg = false;
        if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
            exp_neg = exp_part.front() == '-';
            exp_part.remove_prefix(1);
        }
        if (!all_digits(exp_part) || exp_part.size() > 6) {
            bad_number(text);
        }
        std::from_chars(exp_part.data(), exp_part.data() + exp_part.size(), exponent);
        if (exp_neg) {
            exponent = -exponent;
        }
    }
    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view int_part = s.substr(0, dot);
        std::string_view frac_part = s.substr(dot + 1);
        if ((int_part.empty() && frac_part.empty()) ||
            (!int_part.empty() && !all_digits(int_part)) ||
            (!frac_part.empty() && !all_digits(frac_part))) {
            bad_number(text);
        }
        digits = std::string(int_part) + std::string(frac_part);
        exponent -= static_cast<long>(frac_part.size());
    } else {
        if (!all_digits(s)) {
            bad_number(text);
        }
        digits = std::string(s);
    }
    BigInt mantissa = decimal_integer(digits);
    if (negative) {
        mantissa = -mantissa;
    }
    if (exponent >= 0) {
        return ExactRational(mantissa * pow10(exponent));
    }
    return ExactRational(mantissa, pow10(-exponent));
}

ExactRational rational_from_double(double value)
{
    if (!std::isfinite(value)) {
        throw Error(Errc::OutOfRange, "non-finite value cannot be made exact");
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return parse_rational(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
}

double to_double(const ExactRational& value)
{
    return value.convert_to<double>();
}

}  // namespace ctx
