#include "simplex.hpp"

#include "ctx/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ctx::detail {

namespace {

class Engine {
public:
    Engine(const ColumnSource& source, std::span<const double> rhs, const SimplexOptions& options)
        : source_(source),
          options_(options),
          m_(static_cast<Eigen::Index>(rhs.size())),
          n_(source.size()),
          rhs_(Eigen::Map<const Eigen::VectorXd>(rhs.data(), m_)),
          sign_(m_),
          basis_(static_cast<std::size_t>(m_)),
          binv_(Eigen::MatrixXd::Zero(m_, m_)),
          xb_(m_),
          scratch_(m_)
    {
        for (Eigen::Index i = 0; i < m_; ++i) {
            sign_[i] = rhs_[i] < 0 ? -1.0 : 1.0;
            basis_[static_cast<std::size_t>(i)] = n_ + static_cast<std::uint64_t>(i);
            binv_(i, i) = sign_[i];
            xb_[i] = std::abs(rhs_[i]);
        }
    }

    SimplexOutcome run()
    {
        SimplexOutcome out;
        iterate(true);
        out.phase_one_objective = artificial_mass();
        out.phase_one_duals = duals(true);
        if (options_.phase_two && out.phase_one_objective <= options_.feasibility_tol) {
            iterate(false);
            out.reached_phase_two = true;
            double obj = 0.0;
            for (Eigen::Index i = 0; i < m_; ++i) {
                obj += cost(basis_[static_cast<std::size_t>(i)], false) * xb_[i];
            }
            out.objective = obj;
        }
        for (Eigen::Index i = 0; i < m_; ++i) {
            const auto id = basis_[static_cast<std::size_t>(i)];
            if (!artificial(id)) {
                out.basic.push_back({id, xb_[i]});
            }
        }
        out.iterations = iterations_;
        out.pricing_calls = pricing_calls_;
        return out;
    }

private:
    bool artificial(std::uint64_t id) const { return id >= n_; }

    double cost(std::uint64_t id, bool phase_one) const
    {
        if (artificial(id)) {
            return phase_one ? 1.0 : 0.0;
        }
        return phase_one ? 0.0 : source_.cost(id);
    }

    void load(std::uint64_t id, Eigen::VectorXd& out) const
    {
        if (artificial(id)) {
            out.setZero();
            const auto row = static_cast<Eigen::Index>(id - n_);
            out[row] = sign_[row];
        } else {
            source_.column(id, std::span<double>(out.data(), static_cast<std::size_t>(m_)));
        }
    }

    double artificial_mass() const
    {
        double mass = 0.0;
        for (Eigen::Index i = 0; i < m_; ++i) {
            if (artificial(basis_[static_cast<std::size_t>(i)])) {
                mass += xb_[i];
            }
        }
        return mass;
    }

    Eigen::VectorXd duals(bool phase_one) const
    {
        Eigen::VectorXd cb(m_);
        for (Eigen::Index i = 0; i < m_; ++i) {
            cb[i] = cost(basis_[static_cast<std::size_t>(i)], phase_one);
        }
        return binv_.transpose() * cb;
    }

    void refactor()
    {
        Eigen::MatrixXd basis_matrix(m_, m_);
        for (Eigen::Index i = 0; i < m_; ++i) {
            load(basis_[static_cast<std::size_t>(i)], scratch_);
            basis_matrix.col(i) = scratch_;
        }
        binv_ = basis_matrix.partialPivLu().inverse();
        xb_ = binv_ * rhs_;
        for (Eigen::Index i = 0; i < m_; ++i) {
            if (xb_[i] < 0.0 && xb_[i] > -1e-10) {
                xb_[i] = 0.0;
            }
        }
    }

    void iterate(bool phase_one)
    {
        PriceRule rule = PriceRule::Dantzig;
        std::uint64_t degenerate_run = 0;
        Eigen::VectorXd entering(m_);
        Eigen::VectorXd direction(m_);
        for (;;) {
            if (iterations_ >= options_.iteration_cap) {
                throw Error(Errc::SolverStall, "simplex exceeded the iteration cap of " +
                                                   std::to_string(options_.iteration_cap));
            }
            const Eigen::VectorXd y = duals(phase_one);
            ++pricing_calls_;
            const PriceResult price = source_.price(
                std::span<const double>(y.data(), static_cast<std::size_t>(m_)), phase_one, rule,
                options_.pricing_tol);
            if (!price.found) {
                return;
            }
            load(price.id, entering);
            direction.noalias() = binv_ * entering;

            Eigen::Index leave = -1;
            double step = std::numeric_limits<double>::infinity();
            if (!phase_one) {
                // Artificials left in the basis sit at zero and must stay there.
                for (Eigen::Index i = 0; i < m_; ++i) {
                    if (artificial(basis_[static_cast<std::size_t>(i)]) &&
                        std::abs(direction[i]) > options_.pivot_tol) {
                        leave = i;
                        step = 0.0;
                        break;
                    }
                }
            }
            if (leave < 0) {
                for (Eigen::Index i = 0; i < m_; ++i) {
                    if (direction[i] <= options_.pivot_tol) {
                        continue;
                    }
                    const double ratio = std::max(xb_[i], 0.0) / direction[i];
                    if (leave < 0 || ratio < step - 1e-12) {
                        leave = i;
                        step = ratio;
                    } else if (ratio <= step + 1e-12 && prefer(i, leave, rule)) {
                        leave = i;
                        step = std::min(step, ratio);
                    }
                }
            }
            if (leave < 0) {
                throw Error(Errc::SolverStall, "simplex found an unbounded direction");
            }

            const double pivot = direction[leave];
            xb_.noalias() -= step * direction;
            xb_[leave] = step;
            const Eigen::RowVectorXd pivot_row = binv_.row(leave) / pivot;
            binv_.noalias() -= direction * pivot_row;
            binv_.row(leave) = pivot_row;
            basis_[static_cast<std::size_t>(leave)] = price.id;

            ++iterations_;
            if (step <= 1e-13) {
                if (++degenerate_run >= options_.degenerate_switch) {
                    rule = PriceRule::Bland;
                }
            } else {
                degenerate_run = 0;
                rule = PriceRule::Dantzig;
            }
            if (iterations_ % options_.refactor_period == 0) {
                refactor();
            }
        }
    }

    /// Tie-break among equal ratios: lowest id under Bland, otherwise push
    /// artificials out first.
    bool prefer(Eigen::Index candidate, Eigen::Index current, PriceRule rule) const
    {
        const auto a = basis_[static_cast<std::size_t>(candidate)];
        const auto b = basis_[static_cast<std::size_t>(current)];
        if (rule == PriceRule::Dantzig && artificial(a) != artificial(b)) {
            return artificial(a);
        }
        return a < b;
    }

    const ColumnSource& source_;
    SimplexOptions options_;
    Eigen::Index m_;
    std::uint64_t n_;
    Eigen::VectorXd rhs_;
    Eigen::VectorXd sign_;
    std::vector<std::uint64_t> basis_;
    Eigen::MatrixXd binv_;
    Eigen::VectorXd xb_;
    Eigen::VectorXd scratch_;
    std::uint64_t iterations_ = 0;
    std::uint64_t pricing_calls_ = 0;
};

}  // namespace

SimplexOutcome run_simplex(const ColumnSource& source, std::span<const double> rhs,
                           const SimplexOptions& options)
{
    Engine engine(source, rhs, options);
    return engine.run();
}

}  // namespace ctx::detail
