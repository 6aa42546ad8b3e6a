#include "ctx/polytope.hpp"

#include "simplex.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

namespace ctx {

double default_tolerance()
{
    if (const char* env = std::getenv("CTX_DEFAULT_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && std::isfinite(v) && v > 0.0) {
            return v;
        }
    }
    return 1e-9;
}

const char* verdict_name(Verdict v) noexcept
{
    switch (v) {
    case Verdict::Noncontextual: return "NONCONTEXTUAL";
    case Verdict::Contextual: return "CONTEXTUAL";
    case Verdict::Marginal: return "MARGINAL";
    }
    return "UNKNOWN";
}

namespace {

/// Column-major (4n+1) x 4^n incidence matrix, shared per rank.
struct DenseColumns {
    std::size_t rows = 0;
    std::uint64_t cols = 0;
    std::vector<double> data;
};

std::shared_ptr<const DenseColumns> dense_columns(std::size_t n)
{
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const DenseColumns>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) {
        auto store = std::make_shared<DenseColumns>();
        store->rows = incidence_row_count(n);
        store->cols = CouplingIndex(n).column_count();
        store->data.resize(store->rows * store->cols);
        for (std::uint64_t j = 0; j < store->cols; ++j) {
            incidence_column(n, j, std::span<double>(store->data.data() + j * store->rows, store->rows));
        }
        slot = std::move(store);
    }
    return slot;
}

bool use_dense(std::size_t n, const SolverConfig& cfg)
{
    switch (cfg.pricing) {
    case PricingMode::Dense: return true;
    case PricingMode::DynamicProgramming: return false;
    case PricingMode::Auto: break;
    }
    return n <= cfg.dense_cap;
}

/// A single-entry column appended after the coupling columns.
struct ExtraColumn {
    std::size_t row = 0;
    double coef = 0.0;
    double cost = 0.0;
};

class CouplingColumns final : public detail::ColumnSource {
public:
    CouplingColumns(std::size_t n, bool dense, std::vector<ExtraColumn> extras)
        : n_(n),
          rows_(incidence_row_count(n)),
          couplings_(CouplingIndex(n).column_count()),
          extras_(std::move(extras))
    {
        if (dense) {
            dense_ = dense_columns(n);
            reduced_.resize(static_cast<Eigen::Index>(couplings_));
        }
    }

    std::uint64_t size() const override { return couplings_ + extras_.size(); }

    void column(std::uint64_t id, std::span<double> out) const override
    {
        if (id < couplings_) {
            if (dense_) {
                const double* src = dense_->data.data() + id * rows_;
                std::copy(src, src + rows_, out.begin());
            } else {
                incidence_column(n_, id, out);
            }
            return;
        }
        const auto& extra = extras_[id - couplings_];
        std::fill(out.begin(), out.end(), 0.0);
        out[extra.row] = extra.coef;
    }

    double cost(std::uint64_t id) const override
    {
        return id < couplings_ ? 0.0 : extras_[id - couplings_].cost;
    }

    detail::PriceResult price(std::span<const double> duals, bool phase_one,
                              detail::PriceRule rule, double tol) const override
    {
        detail::PriceResult best = price_couplings(duals, rule, tol);
        if (best.found && rule == detail::PriceRule::Bland) {
            return best;
        }
        for (std::size_t k = 0; k < extras_.size(); ++k) {
            const auto& extra = extras_[k];
            const double d = (phase_one ? 0.0 : extra.cost) - duals[extra.row] * extra.coef;
            if (d < -tol && (!best.found || d < best.reduced_cost)) {
                best = {true, couplings_ + k, d};
                if (rule == detail::PriceRule::Bland) {
                    break;
                }
            }
        }
        return best;
    }

private:
    detail::PriceResult price_couplings(std::span<const double> duals, detail::PriceRule rule,
                                        double tol) const
    {
        if (!dense_) {
            std::vector<double> weights(duals.size());
            for (std::size_t r = 0; r < duals.size(); ++r) {
                weights[r] = -duals[r];
            }
            const PricedColumn priced = price_column(weights, n_);
            if (priced.value < -tol) {
                return {true, priced.column, priced.value};
            }
            return {};
        }
        const Eigen::Map<const Eigen::MatrixXd> matrix(
            dense_->data.data(), static_cast<Eigen::Index>(rows_),
            static_cast<Eigen::Index>(couplings_));
        const Eigen::Map<const Eigen::VectorXd> y(duals.data(), static_cast<Eigen::Index>(rows_));
        // Reduced cost of a coupling column is -y'A_j; track the largest y'A_j.
        reduced_.noalias() = matrix.transpose() * y;
        if (rule == detail::PriceRule::Bland) {
            for (Eigen::Index j = 0; j < reduced_.size(); ++j) {
                if (-reduced_[j] < -tol) {
                    return {true, static_cast<std::uint64_t>(j), -reduced_[j]};
                }
            }
            return {};
        }
        Eigen::Index arg = 0;
        const double top = reduced_.maxCoeff(&arg);
        if (-top < -tol) {
            return {true, static_cast<std::uint64_t>(arg), -top};
        }
        return {};
    }

    std::size_t n_;
    std::size_t rows_;
    std::uint64_t couplings_;
    std::vector<ExtraColumn> extras_;
    std::shared_ptr<const DenseColumns> dense_;
    mutable Eigen::VectorXd reduced_;
};

detail::SimplexOptions simplex_options(const SolverConfig& cfg)
{
    detail::SimplexOptions opts;
    opts.iteration_cap = cfg.iteration_cap;
    opts.feasibility_tol = cfg.tol;
    return opts;
}

void check_rank(std::size_t n, const SolverConfig& cfg)
{
    if (n > cfg.max_rank) {
        throw Error(Errc::DimensionCap, "rank " + std::to_string(n) +
                                            " exceeds the configured maximum " +
                                            std::to_string(cfg.max_rank));
    }
}

}  // namespace

double witness_residual(const IncidenceSystem& incidence, std::span<const WitnessEntry> witness)
{
    std::vector<double> lhs(incidence.row_count(), 0.0);
    std::vector<double> col(incidence.row_count());
    for (const auto& w : witness) {
        incidence.column(w.column, col);
        for (std::size_t r = 0; r < col.size(); ++r) {
            lhs[r] += col[r] * w.mass;
        }
    }
    double worst = 0.0;
    for (std::size_t r = 0; r < lhs.size(); ++r) {
        worst = std::max(worst, std::abs(lhs[r] - incidence.rhs()[r]));
    }
    return worst;
}

FeasibilityResult check_noncontextual(const CyclicSystem& system, const SolverConfig& cfg)
{
    const std::size_t n = system.rank();
    check_rank(n, cfg);
    const IncidenceSystem incidence = build_incidence(system);
    const bool dense = use_dense(n, cfg);
    const CouplingColumns source(n, dense, {});
    const auto outcome = detail::run_simplex(source, incidence.rhs(), simplex_options(cfg));

    FeasibilityResult result;
    result.tol = cfg.tol;
    result.infeasibility = std::max(outcome.phase_one_objective, 0.0);
    result.stats = {outcome.iterations, outcome.pricing_calls, dense};

    if (result.infeasibility <= cfg.tol) {
        for (const auto& entry : outcome.basic) {
            if (entry.value > 0.0) {
                result.witness.push_back({entry.id, entry.value});
            }
        }
        result.verdict = witness_residual(incidence, result.witness) <= cfg.tol
                             ? Verdict::Noncontextual
                             : Verdict::Marginal;
        if (result.verdict != Verdict::Noncontextual) {
            result.witness.clear();
        }
    } else if (result.infeasibility >= 10.0 * cfg.tol) {
        result.verdict = Verdict::Contextual;
        result.certificate.assign(outcome.phase_one_duals.data(),
                                  outcome.phase_one_duals.data() + outcome.phase_one_duals.size());
    } else {
        result.verdict = Verdict::Marginal;
    }
    return result;
}

MeasureResult contextuality_measure(const CyclicSystem& system, const SolverConfig& cfg)
{
    const std::size_t n = system.rank();
    const FeasibilityResult feasibility = check_noncontextual(system, cfg);
    if (feasibility.verdict == Verdict::Noncontextual) {
        throw Error(Errc::NotContextual, "the system is noncontextual; use the noncontextuality measure");
    }
    const IncidenceSystem incidence = build_incidence(system);
    // Context row i:  M_i h - s+_i + s-_i = b_i, so b'_i = b_i + s+_i - s-_i.
    std::vector<ExtraColumn> extras;
    for (std::size_t i = 0; i < n; ++i) {
        extras.push_back({context_row(n, i), -1.0, 1.0});
        extras.push_back({context_row(n, i), +1.0, 1.0});
    }
    const bool dense = use_dense(n, cfg);
    const CouplingColumns source(n, dense, extras);
    auto opts = simplex_options(cfg);
    opts.phase_two = true;
    const auto outcome = detail::run_simplex(source, incidence.rhs(), opts);
    if (!outcome.reached_phase_two) {
        throw Error(Errc::SolverStall, "measure LP failed to find a feasible start");
    }

    MeasureResult result;
    result.kind = MeasureKind::Contextuality;
    result.attaining_point.assign(system.b().begin(), system.b().end());
    const std::uint64_t couplings = CouplingIndex(n).column_count();
    double value = 0.0;
    for (const auto& entry : outcome.basic) {
        if (entry.id < couplings) {
            continue;
        }
        const std::uint64_t k = entry.id - couplings;
        const double shift = std::max(entry.value, 0.0);
        result.attaining_point[k / 2] += (k % 2 == 0) ? shift : -shift;
        value += shift;
    }
    result.value = value;
    result.stats = {outcome.iterations + feasibility.stats.iterations,
                    outcome.pricing_calls + feasibility.stats.pricing_calls, dense};
    return result;
}

MeasureResult noncontextuality_measure(const CyclicSystem& system, const SolverConfig& cfg)
{
    const std::size_t n = system.rank();
    const FeasibilityResult feasibility = check_noncontextual(system, cfg);
    if (feasibility.verdict != Verdict::Noncontextual) {
        throw Error(Errc::NotNoncontextual, std::string("the system is not noncontextual (") +
                                                verdict_name(feasibility.verdict) + ")");
    }
    const Hyperbox box = hyperbox(system.marginals());
    for (std::size_t i = 0; i < n; ++i) {
        if (!(box.length(i) > 0.0)) {
            throw Error(Errc::DegenerateBox, "box coordinate " + std::to_string(i + 1) +
                                                 " has zero length",
                        i);
        }
    }

    MeasureResult result;
    result.kind = MeasureKind::Noncontextuality;
    result.stats = feasibility.stats;
    const std::vector<double> origin(system.b().begin(), system.b().end());

    auto inside = [&](std::size_t i, double offset) {
        std::vector<double> probe = origin;
        probe[i] = std::clamp(origin[i] + offset, box.lo[i], box.hi[i]);
        const auto r = check_noncontextual(CyclicSystem(system.marginals(), std::move(probe)), cfg);
        result.stats.iterations += r.stats.iterations;
        result.stats.pricing_calls += r.stats.pricing_calls;
        return r.verdict == Verdict::Noncontextual;
    };

    double best = std::numeric_limits<double>::infinity();
    std::size_t best_coord = 0;
    double best_offset = 0.0;
    for (std::size_t i = 0; i < n && best > 0.0; ++i) {
        for (const double sign : {+1.0, -1.0}) {
            const double edge = sign > 0 ? box.hi[i] - origin[i] : origin[i] - box.lo[i];
            const double limit = std::min(edge, best);
            if (limit <= 0.0) {
                best = 0.0;
                best_coord = i;
                best_offset = 0.0;
                break;
            }
            if (inside(i, sign * limit)) {
                if (limit < best) {
                    best = limit;
                    best_coord = i;
                    best_offset = sign * limit;
                }
                continue;
            }
            double lo = 0.0;
            double hi = limit;
            while (hi - lo > cfg.bisect_tol) {
                const double mid = 0.5 * (lo + hi);
                (inside(i, sign * mid) ? lo : hi) = mid;
            }
            if (lo < best) {
                best = lo;
                best_coord = i;
                best_offset = sign * lo;
            }
        }
    }
    result.value = best;
    result.attaining_point = origin;
    result.attaining_point[best_coord] += best_offset;
    return result;
}

}  // namespace ctx
