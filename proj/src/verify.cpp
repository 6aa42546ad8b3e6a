#include "ctx/verify.hpp"

#include "ctx/document.hpp"
#include "ctx/epistemic.hpp"
#include "ctx/exact.hpp"

namespace ctx {

namespace {

std::pair<std::size_t, std::size_t> ranks_or(const VerifyOptions& opts, std::size_t lo,
                                             std::size_t hi)
{
    return opts.ranks.value_or(std::pair{lo, hi});
}

void record(SuiteReport& report, const VerifyOptions& opts, nlohmann::json example)
{
    ++report.failures;
    report.passed = false;
    if (report.counterexamples.size() < opts.max_counterexamples) {
        report.counterexamples.push_back(std::move(example));
    }
}

nlohmann::json float_system_json(const CyclicSystem& s)
{
    nlohmann::json contexts = nlohmann::json::array();
    for (std::size_t i = 0; i < s.rank(); ++i) {
        contexts.push_back({{"p_first", s.marginals().first(i)},
                            {"p_second", s.marginals().second(i)},
                            {"p_both", s.b()[i]}});
    }
    return {{"rank", s.rank()}, {"contexts", contexts}};
}

/// Stream ids keep the suites' random draws apart.
constexpr std::uint64_t kLemma1Stream = 11;
constexpr std::uint64_t kLemma2Stream = 12;
constexpr std::uint64_t kOracleStream = 13;

}  // namespace

nlohmann::json SuiteReport::to_json() const
{
    return {{"suite", name},
            {"passed", passed},
            {"ranks", {rank_lo, rank_hi}},
            {"checked", checked},
            {"failures", failures},
            {"skipped", skipped},
            {"marginal", marginal},
            {"counterexamples", counterexamples}};
}

SuiteReport verify_lemma1(const VerifyOptions& opts)
{
    SuiteReport report;
    report.name = "lemma1";
    std::tie(report.rank_lo, report.rank_hi) = ranks_or(opts, 2, 6);
    for (std::size_t n = report.rank_lo; n <= report.rank_hi; ++n) {
        for (std::size_t s = 0; s < opts.specs_per_rank; ++s) {
            SampleRng rng(opts.seed + n, s, kLemma1Stream);
            std::vector<double> first(n);
            std::vector<double> second(n);
            for (std::size_t i = 0; i < n; ++i) {
                first[i] = rng.uniform();
                second[i] = rng.uniform();
            }
            const MarginalSpec marginals(std::move(first), std::move(second));
            for (const auto& vertex : enumerate_vertices(hyperbox(marginals), ParityFilter::Even)) {
                const CyclicSystem system(marginals, vertex.coords);
                const auto result = check_noncontextual(system, opts.solver);
                ++report.checked;
                const bool ok = result.verdict == Verdict::Noncontextual &&
                                witness_residual(build_incidence(system), result.witness) <=
                                    opts.solver.tol;
                if (!ok) {
                    record(report, opts,
                           {{"system", float_system_json(system)},
                            {"vertex_pattern", vertex.pattern},
                            {"verdict", verdict_name(result.verdict)},
                            {"infeasibility", result.infeasibility}});
                }
            }
        }
    }
    return report;
}

SuiteReport verify_lemma2(const VerifyOptions& opts)
{
    SuiteReport report;
    report.name = "lemma2";
    std::tie(report.rank_lo, report.rank_hi) = ranks_or(opts, 3, 6);
    for (std::size_t n = report.rank_lo; n <= report.rank_hi; ++n) {
        const MarginalSpec marginals = MarginalSpec::uniform(n, 0.5);
        const Hyperbox box = hyperbox(marginals);
        for (std::size_t k = 0; k < opts.points_per_rank; ++k) {
            SampleRng rng(opts.seed + n, k, kLemma2Stream);
            std::vector<double> b(n);
            for (auto& x : b) {
                x = 0.5 * rng.uniform();
            }
            const Membership membership = demibox_contains(box, b, opts.band);
            if (membership == Membership::Boundary) {
                ++report.skipped;
                continue;
            }
            const CyclicSystem system(marginals, b);
            const auto result = check_noncontextual(system, opts.solver);
            ++report.checked;
            const bool agree =
                (membership == Membership::Inside && result.verdict == Verdict::Noncontextual) ||
                (membership == Membership::Outside && result.verdict == Verdict::Contextual);
            if (!agree) {
                record(report, opts,
                       {{"system", float_system_json(system)},
                        {"demibox", membership == Membership::Inside ? "INSIDE" : "OUTSIDE"},
                        {"verdict", verdict_name(result.verdict)},
                        {"infeasibility", result.infeasibility}});
            }
        }
    }
    return report;
}

SuiteReport verify_oracle(const VerifyOptions& opts)
{
    SuiteReport report;
    report.name = "oracle";
    std::tie(report.rank_lo, report.rank_hi) = ranks_or(opts, 2, 3);
    // Marginals on a grid of twelfths, products on a grid of sixths of each box side.
    constexpr int kMarginalGrid = 12;
    constexpr int kProductGrid = 6;
    for (std::size_t n = report.rank_lo; n <= report.rank_hi; ++n) {
        for (std::size_t s = 0; s < opts.systems_per_rank; ++s) {
            SampleRng rng(opts.seed + n, s, kOracleStream);
            auto grid = [&](int steps) { return static_cast<int>(rng() % (steps + 1)); };
            std::vector<ExactRational> first(n);
            std::vector<ExactRational> second(n);
            for (std::size_t i = 0; i < n; ++i) {
                first[i] = ExactRational(grid(kMarginalGrid), kMarginalGrid);
                second[i] = ExactRational(grid(kMarginalGrid), kMarginalGrid);
            }
            const ExactMarginalSpec marginals(first, second);
            const ExactHyperbox box = hyperbox(marginals);
            std::vector<ExactRational> b(n);
            for (std::size_t i = 0; i < n; ++i) {
                b[i] = box.lo[i] + box.length(i) * ExactRational(grid(kProductGrid), kProductGrid);
            }
            const ExactCyclicSystem exact(marginals, b);
            const auto oracle = check_noncontextual_exact(exact);
            const auto floating = check_noncontextual(to_floating(exact), opts.solver);
            ++report.checked;
            if (floating.verdict == Verdict::Marginal) {
                ++report.marginal;
                continue;
            }
            if (floating.verdict != oracle.verdict) {
                record(report, opts,
                       {{"system", to_json(SystemDocument::from(exact))},
                        {"float", verdict_name(floating.verdict)},
                        {"exact", verdict_name(oracle.verdict)}});
            }
        }
    }
    // Undecided float verdicts must stay rare.
    if (report.checked > 0 && report.marginal * 100 >= report.checked) {
        report.passed = false;
    }
    return report;
}

std::vector<SuiteReport> run_suites(const std::string& which, const VerifyOptions& opts)
{
    std::vector<SuiteReport> out;
    if (which == "lemma1" || which == "all") {
        out.push_back(verify_lemma1(opts));
    }
    if (which == "lemma2" || which == "all") {
        out.push_back(verify_lemma2(opts));
    }
    if (which == "oracle" || which == "all") {
        out.push_back(verify_oracle(opts));
    }
    if (out.empty()) {
        throw Error(Errc::InvalidArgument, "unknown suite '" + which +
                                               "' (expected lemma1, lemma2, oracle or all)");
    }
    return out;
}

}  // namespace ctx
