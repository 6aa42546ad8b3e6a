#pragma once

// Exact-arithmetic feasibility of M h = (1, a, b, c), h >= 0. Used as the
// oracle for the floating-point solver; cost grows as 4^n so the rank is capped.

#include "ctx/cyclic.hpp"
#include "ctx/polytope.hpp"
#include "ctx/rational.hpp"

#include <cstdint>
#include <vector>

namespace ctx {

inline constexpr std::size_t kExactRankCap = 5;

struct ExactWitnessEntry {
    std::uint64_t column = 0;
    ExactRational mass;
};

struct ExactFeasibilityResult {
    Verdict verdict = Verdict::Noncontextual;  // never Marginal
    std::vector<ExactWitnessEntry> witness;
    std::vector<ExactRational> certificate;
    ExactRational infeasibility;
    std::uint64_t iterations = 0;
};

ExactFeasibilityResult check_noncontextual_exact(const ExactCyclicSystem& system,
                                                 std::size_t max_rank = kExactRankCap);

/// Nearest-double image of an exact system.
CyclicSystem to_floating(const ExactCyclicSystem& system);

}  // namespace ctx
