#pragma once

// Implementations of the `ctx` subcommands. Each returns a RunReport JSON
// object, a human-readable rendering and the process exit code, so the CLI
// binary only parses flags and prints.
//
// Exit codes: 0 noncontextual / success, 3 contextual, 4 marginal,
// 2 verification failure, 1 error.

#include "ctx/epistemic.hpp"
#include "ctx/polytope.hpp"
#include "ctx/verify.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ctx {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchema = "ctx-run-report/1";

inline constexpr int kExitNoncontextual = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitVerifyFailed = 2;
inline constexpr int kExitContextual = 3;
inline constexpr int kExitMarginal = 4;

int exit_code_for(Verdict v) noexcept;

struct CommandResult {
    int exit_code = 0;
    nlohmann::json report;
    std::string text;
};

struct CheckOptions {
    std::string path;
    double tol = default_tolerance();
    bool exact = false;
};
CommandResult cmd_check(const CheckOptions& opts);

struct MeasureOptions {
    std::string path;
    double tol = default_tolerance();
    double bisect_tol = 1e-6;
};
CommandResult cmd_measure(const MeasureOptions& opts);

struct EpsilonOptions {
    std::size_t rank = 0;
    /// "uniform" or the path of a SystemDocument (p_both ignored).
    std::string marginals = "uniform";
    std::uint64_t samples = 100'000;
    std::uint64_t seed = 42;
    std::size_t workers = 1;
    bool fast_path = true;
    double tol = default_tolerance();
};
CommandResult cmd_epsilon(const EpsilonOptions& opts);

struct EpsilonTildeOptions {
    std::size_t rank = 0;
    std::uint64_t samples = 100'000;
    std::uint64_t seed = 42;
    std::size_t workers = 1;
    /// "uniform" (iid uniform marginals) or "atomic:<uniform|path>".
    std::string prior = "uniform";
    bool fast_path = true;
    double tol = default_tolerance();
};
CommandResult cmd_epsilon_tilde(const EpsilonTildeOptions& opts);

enum class TableFormat { Text, Csv, Json };

struct BoundTableOptions {
    std::vector<std::size_t> ranks;
    TableFormat format = TableFormat::Text;
};
CommandResult cmd_bound_table(const BoundTableOptions& opts);

struct VerifyCommandOptions {
    std::string suite = "all";
    VerifyOptions verify;
};
CommandResult cmd_verify(const VerifyCommandOptions& opts);

/// "2..50", "2,3,4,5,10" or mixtures such as "2..5,10".
std::vector<std::size_t> parse_rank_list(std::string_view text);

/// 64-bit FNV-1a, hex.
std::string fnv1a_digest(std::string_view data);

nlohmann::json estimate_to_json(const EpsilonEstimate& est);
nlohmann::json feasibility_to_json(const FeasibilityResult& result);

}  // namespace ctx
