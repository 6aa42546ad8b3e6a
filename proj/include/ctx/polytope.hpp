#pragma once

// Membership of b in the noncontextuality polytope K (phase-one simplex on
// M h = (1, a, b, c), h >= 0) and the L1 (non)contextuality measures.

#include "ctx/cyclic.hpp"
#include "ctx/incidence.hpp"

#include <cstdint>
#include <vector>

namespace ctx {

/// 1e-9 unless the CTX_DEFAULT_TOL environment variable holds a positive number.
double default_tolerance();

enum class PricingMode : std::uint8_t {
    Auto,               // dense columns up to dense_cap, dynamic programming above
    Dense,
    DynamicProgramming,
};

struct SolverConfig {
    double tol = default_tolerance();
    std::size_t dense_cap = 8;
    PricingMode pricing = PricingMode::Auto;
    std::size_t max_rank = 24;
    std::uint64_t iteration_cap = 1'000'000;
    double bisect_tol = 1e-6;
};

enum class Verdict : std::uint8_t { Noncontextual, Contextual, Marginal };

const char* verdict_name(Verdict v) noexcept;

struct WitnessEntry {
    std::uint64_t column = 0;
    double mass = 0.0;
};

struct SolverStats {
    std::uint64_t iterations = 0;
    std::uint64_t pricing_calls = 0;
    bool dense = true;
};

struct FeasibilityResult {
    Verdict verdict = Verdict::Marginal;
    /// Sparse coupling distribution; non-empty iff Noncontextual.
    std::vector<WitnessEntry> witness;
    /// Farkas vector y (4n+1 entries) with y'M <= 0 and y'rhs > 0; non-empty iff Contextual.
    std::vector<double> certificate;
    /// Phase-one optimum: the least total artificial mass.
    double infeasibility = 0.0;
    double tol = 0.0;
    SolverStats stats;
};

FeasibilityResult check_noncontextual(const CyclicSystem& system, const SolverConfig& cfg = {});

/// max_r |(M h - rhs)_r| for a sparse witness, computed from scratch.
double witness_residual(const IncidenceSystem& incidence, std::span<const WitnessEntry> witness);

enum class MeasureKind : std::uint8_t { Contextuality, Noncontextuality };

struct MeasureResult {
    MeasureKind kind = MeasureKind::Contextuality;
    double value = 0.0;
    /// b' on the surface of K attaining the distance.
    std::vector<double> attaining_point;
    SolverStats stats;
};

/// min over b' in K of ||b - b'||_1, by LP over (h, split displacements).
/// Throws NotContextual when b is in K.
MeasureResult contextuality_measure(const CyclicSystem& system, const SolverConfig& cfg = {});

/// Largest r with every b +- r e_i in K (the inscribed L1 ball radius), by
/// per-direction bisection on the feasibility check. Throws NotNoncontextual
/// when b is not in K and DegenerateBox when some box side has length 0.
MeasureResult noncontextuality_measure(const CyclicSystem& system, const SolverConfig& cfg = {});

}  // namespace ctx
