#pragma once

// Two-phase revised simplex over an implicit column set, for equality
// systems A x = r, x >= 0 with few rows and possibly very many columns.

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace ctx::detail {

enum class PriceRule : std::uint8_t { Dantzig, Bland };

struct PriceResult {
    bool found = false;
    std::uint64_t id = 0;
    double reduced_cost = 0.0;
};

class ColumnSource {
public:
    virtual ~ColumnSource() = default;

    virtual std::uint64_t size() const = 0;
    virtual void column(std::uint64_t id, std::span<double> out) const = 0;
    /// Phase-two cost; phase one treats every structural cost as zero.
    virtual double cost(std::uint64_t id) const = 0;
    /// Entering candidate with reduced cost below -tol, or found = false.
    /// Sources that cannot scan in index order may ignore Bland and return
    /// their best column.
    virtual PriceResult price(std::span<const double> duals, bool phase_one, PriceRule rule,
                              double tol) const = 0;
};

struct SimplexOptions {
    double pricing_tol = 1e-11;
    double pivot_tol = 1e-9;
    /// Proceed to phase two only if the phase-one objective is at most this.
    double feasibility_tol = 1e-9;
    std::uint64_t iteration_cap = 1'000'000;
    std::uint64_t refactor_period = 50;
    /// Consecutive degenerate pivots before switching to Bland's rule.
    std::uint64_t degenerate_switch = 20;
    bool phase_two = false;
};

struct BasicEntry {
    std::uint64_t id = 0;
    double value = 0.0;
};

struct SimplexOutcome {
    double phase_one_objective = 0.0;
    double objective = 0.0;            // phase-two objective when run
    bool reached_phase_two = false;
    std::vector<BasicEntry> basic;     // structural basic variables only
    Eigen::VectorXd phase_one_duals;   // y with y'A <= 0 at a phase-one optimum
    std::uint64_t iterations = 0;
    std::uint64_t pricing_calls = 0;
};

/// Throws Error(SolverStall) past the iteration cap.
SimplexOutcome run_simplex(const ColumnSource& source, std::span<const double> rhs,
                           const SimplexOptions& options);

}  // namespace ctx::detail
