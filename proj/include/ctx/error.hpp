#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ctx {

enum class Errc {
    RankTooSmall,
    OutOfRange,
    FrechetViolation,
    DegenerateBox,
    CapExceeded,
    SolverStall,
    DimensionCap,
    NotContextual,
    NotNoncontextual,
    Parse,
    InvalidArgument,
};

const char* errc_name(Errc code) noexcept;

/// Single exception type for the library. `index()` carries the offending
/// context / coordinate / sample when one is meaningful (0-based).
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what, std::optional<std::size_t> index = std::nullopt)
        : std::runtime_error(what), code_(code), index_(index) {}

    Errc code() const noexcept { return code_; }
    std::optional<std::size_t> index() const noexcept { return index_; }

private:
    Errc code_;
    std::optional<std::size_t> index_;
};

}  // namespace ctx
