#pragma once

// Randomized verification suites for the LP formulation:
//   lemma1 - every even vertex of the box is noncontextual;
//   lemma2 - at uniform marginals the LP verdict equals demicube membership;
//   oracle - floating and exact-rational LPs agree on rational systems.

#include "ctx/polytope.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ctx {

struct VerifyOptions {
    /// Inclusive; each suite has its own default when unset.
    std::optional<std::pair<std::size_t, std::size_t>> ranks;
    std::uint64_t seed = 2020;
    std::size_t specs_per_rank = 50;
    std::size_t points_per_rank = 2000;
    std::size_t systems_per_rank = 500;
    /// Normalized band around the demicube surface excluded from lemma2.
    double band = 1e-6;
    std::size_t max_counterexamples = 5;
    SolverConfig solver;
};

struct SuiteReport {
    std::string name;
    bool passed = true;
    std::size_t rank_lo = 0;
    std::size_t rank_hi = 0;
    std::uint64_t checked = 0;
    std::uint64_t failures = 0;
    std::uint64_t skipped = 0;   // lemma2: points inside the boundary band
    std::uint64_t marginal = 0;  // oracle: float verdicts left undecided
    std::vector<nlohmann::json> counterexamples;

    nlohmann::json to_json() const;
};

SuiteReport verify_lemma1(const VerifyOptions& opts);
SuiteReport verify_lemma2(const VerifyOptions& opts);
SuiteReport verify_oracle(const VerifyOptions& opts);

/// "lemma1", "lemma2", "oracle" or "all".
std::vector<SuiteReport> run_suites(const std::string& which, const VerifyOptions& opts);

}  // namespace ctx
