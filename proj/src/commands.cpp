#include "ctx/commands.hpp"

#include "ctx/document.hpp"
#include "ctx/exact.hpp"

#include <chrono>
#include <charconv>
#include <cstdio>
#include <sstream>

namespace ctx {

namespace {

using Clock = std::chrono::steady_clock;

std::string sig6(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string full(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json make_report(const std::string& command, const std::string& digest,
                           std::optional<std::uint64_t> seed, nlohmann::json stats,
                           nlohmann::json result, Clock::time_point start)
{
    const double wall = std::chrono::duration<double>(Clock::now() - start).count();
    return {{"schema", kReportSchema},
            {"command", command},
            {"inputs_digest", digest},
            {"tool_version", kToolVersion},
            {"seed", seed ? nlohmann::json(*seed) : nlohmann::json(nullptr)},
            {"wall_time_s", wall},
            {"solver_stats", std::move(stats)},
            {"result", std::move(result)}};
}

nlohmann::json stats_json(const SolverStats& s)
{
    return {{"iterations", s.iterations},
            {"pricing_calls", s.pricing_calls},
            {"pricing", s.dense ? "dense" : "dynamic-programming"}};
}

SolverConfig solver_with_tol(double tol)
{
    if (!(tol > 0.0)) {
        throw Error(Errc::InvalidArgument, "tolerance must be positive");
    }
    SolverConfig cfg;
    cfg.tol = tol;
    return cfg;
}

std::string vector_text(std::span<const double> v)
{
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? ", " : "") + sig6(v[i]);
    }
    return s + ")";
}

std::string estimate_text(const EpsilonEstimate& est)
{
    std::ostringstream out;
    out << "rank: " << est.n << "\n"
        << "marginals: " << est.marginals << "\n"
        << "samples: " << est.samples << " (contextual " << est.counts.contextual
        << ", noncontextual " << est.counts.noncontextual << ", marginal " << est.counts.marginal
        << ", degenerate " << est.counts.degenerate << ")\n"
        << "fast-path hits: " << est.fast_path_hits << "\n"
        << "estimate: " << sig6(est.estimate) << "  " << sig6(est.confidence * 100) << "% CI ["
        << sig6(est.ci_lo) << ", " << sig6(est.ci_hi) << "]\n"
        << "bound 2^(n-1)/n!: " << to_fraction_string(est.bound) << " = "
        << sig6(to_double(est.bound)) << "\n"
        << "seed: " << est.seed << "\n";
    return out.str();
}

std::size_t parse_size(std::string_view token, std::string_view whole)
{
    std::size_t value = 0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
        throw Error(Errc::Parse, "bad rank list '" + std::string(whole) + "'");
    }
    return value;
}

}  // namespace

int exit_code_for(Verdict v) noexcept
{
    switch (v) {
    case Verdict::Noncontextual: return kExitNoncontextual;
    case Verdict::Contextual: return kExitContextual;
    case Verdict::Marginal: return kExitMarginal;
    }
    return kExitError;
}

std::string fnv1a_digest(std::string_view data)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::size_t> parse_rank_list(std::string_view text)
{
    std::vector<std::size_t> ranks;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        std::string_view token = text.substr(pos, comma - pos);
        while (!token.empty() && token.front() == ' ') {
            token.remove_prefix(1);
        }
        while (!token.empty() && token.back() == ' ') {
            token.remove_suffix(1);
        }
        if (auto dots = token.find(".."); dots != std::string_view::npos) {
            const std::size_t lo = parse_size(token.substr(0, dots), text);
            const std::size_t hi = parse_size(token.substr(dots + 2), text);
            if (hi < lo) {
                throw Error(Errc::Parse, "empty rank range '" + std::string(token) + "'");
            }
            for (std::size_t n = lo; n <= hi; ++n) {
                ranks.push_back(n);
            }
        } else {
            ranks.push_back(parse_size(token, text));
        }
        pos = comma + 1;
    }
    for (std::size_t n : ranks) {
        if (n < 2) {
            throw Error(Errc::RankTooSmall, "ranks must be >= 2");
        }
    }
    return ranks;
}

nlohmann::json feasibility_to_json(const FeasibilityResult& r)
{
    nlohmann::json witness = nlohmann::json::array();
    for (const auto& w : r.witness) {
        witness.push_back({w.column, w.mass});
    }
    return {{"verdict", verdict_name(r.verdict)},
            {"exact", false},
            {"infeasibility", r.infeasibility},
            {"tol", r.tol},
            {"witness", witness},
            {"certificate", r.certificate}};
}

nlohmann::json estimate_to_json(const EpsilonEstimate& est)
{
    return {{"rank", est.n},
            {"marginals", est.marginals},
            {"samples", est.samples},
            {"counts",
             {{"contextual", est.counts.contextual},
              {"noncontextual", est.counts.noncontextual},
              {"marginal", est.counts.marginal},
              {"degenerate", est.counts.degenerate}}},
            {"fast_path_hits", est.fast_path_hits},
            {"estimate", est.estimate},
            {"ci", {est.ci_lo, est.ci_hi}},
            {"confidence", est.confidence},
            {"standard_error", est.standard_error()},
            {"bound", to_fraction_string(est.bound)},
            {"bound_decimal", to_double(est.bound)},
            {"demibox_reference", est.demibox_reference}};
}

CommandResult cmd_check(const CheckOptions& opts)
{
    const auto start = Clock::now();
    const SystemDocument doc = load_system_document(opts.path);
    const std::string digest = fnv1a_digest(to_json(doc).dump());
    CommandResult out;
    std::ostringstream text;
    if (opts.exact) {
        const auto r = check_noncontextual_exact(doc.exact_system());
        nlohmann::json witness = nlohmann::json::array();
        for (const auto& w : r.witness) {
            witness.push_back({w.column, to_fraction_string(w.mass)});
        }
        nlohmann::json certificate = nlohmann::json::array();
        for (const auto& y : r.certificate) {
            certificate.push_back(to_fraction_string(y));
        }
        nlohmann::json result = {{"verdict", verdict_name(r.verdict)},
                                 {"exact", true},
                                 {"infeasibility", to_fraction_string(r.infeasibility)},
                                 {"witness", witness},
                                 {"certificate", certificate}};
        out.report = make_report("check", digest, std::nullopt,
                                 {{"iterations", r.iterations}, {"pricing", "exact-bland"}},
                                 std::move(result), start);
        out.exit_code = exit_code_for(r.verdict);
        text << "verdict: " << verdict_name(r.verdict) << " (exact)\n"
             << "infeasibility: " << to_fraction_string(r.infeasibility) << "\n";
        if (!r.witness.empty()) {
            text << "witness: " << r.witness.size() << " coupling columns\n";
        }
    } else {
        const auto r = check_noncontextual(doc.system(), solver_with_tol(opts.tol));
        out.report = make_report("check", digest, std::nullopt, stats_json(r.stats),
                                 feasibility_to_json(r), start);
        out.exit_code = exit_code_for(r.verdict);
        text << "verdict: " << verdict_name(r.verdict) << "\n"
             << "infeasibility: " << sig6(r.infeasibility) << " (tol " << sig6(r.tol) << ")\n";
        if (!r.witness.empty()) {
            text << "witness: " << r.witness.size() << " coupling columns\n";
        }
    }
    out.text = text.str();
    return out;
}

CommandResult cmd_measure(const MeasureOptions& opts)
{
    const auto start = Clock::now();
    const SystemDocument doc = load_system_document(opts.path);
    const CyclicSystem system = doc.system();
    SolverConfig cfg = solver_with_tol(opts.tol);
    cfg.bisect_tol = opts.bisect_tol;
    const auto feasibility = check_noncontextual(system, cfg);
    const MeasureResult m = feasibility.verdict == Verdict::Noncontextual
                                ? noncontextuality_measure(system, cfg)
                                : contextuality_measure(system, cfg);
    const char* kind = m.kind == MeasureKind::Contextuality ? "contextuality" : "noncontextuality";
    nlohmann::json result = {{"verdict", verdict_name(feasibility.verdict)},
                             {"kind", kind},
                             {"value", m.value},
                             {"attaining_point", m.attaining_point}};
    CommandResult out;
    out.report = make_report("measure", fnv1a_digest(to_json(doc).dump()), std::nullopt,
                             stats_json(m.stats), std::move(result), start);
    out.exit_code = exit_code_for(feasibility.verdict);
    out.text = std::string("verdict: ") + verdict_name(feasibility.verdict) + "\n" + kind +
               " measure: " + sig6(m.value) + "\n" +
               "attaining point: " + vector_text(m.attaining_point) + "\n";
    return out;
}

CommandResult cmd_epsilon(const EpsilonOptions& opts)
{
    const auto start = Clock::now();
    std::optional<MarginalSpec> marginals;
    if (opts.marginals == "uniform") {
        if (opts.rank < 2) {
            throw Error(Errc::RankTooSmall, "--rank must be >= 2");
        }
        marginals = MarginalSpec::uniform(opts.rank, 0.5);
    } else {
        const SystemDocument doc = load_system_document(opts.marginals);
        if (opts.rank != 0 && opts.rank != doc.rank) {
            throw Error(Errc::InvalidArgument, "--rank " + std::to_string(opts.rank) +
                                                   " does not match the marginals file (rank " +
                                                   std::to_string(doc.rank) + ")");
        }
        marginals = doc.marginals();
    }
    SamplerConfig cfg;
    cfg.master_seed = opts.seed;
    cfg.workers = opts.workers;
    cfg.fast_path = opts.fast_path;
    cfg.solver = solver_with_tol(opts.tol);
    const EpsilonEstimate est = estimate_epsilon(*marginals, opts.samples, cfg);

    nlohmann::json result = estimate_to_json(est);
    result["workers"] = opts.workers;
    result["fast_path"] = opts.fast_path;
    const std::string inputs = "epsilon rank=" + std::to_string(est.n) +
                               " marginals=" + opts.marginals +
                               " samples=" + std::to_string(opts.samples);
    CommandResult out;
    out.report = make_report("epsilon", fnv1a_digest(inputs), opts.seed, nullptr,
                             std::move(result), start);
    out.text = estimate_text(est);
    return out;
}

CommandResult cmd_epsilon_tilde(const EpsilonTildeOptions& opts)
{
    const auto start = Clock::now();
    if (opts.rank < 2) {
        throw Error(Errc::RankTooSmall, "--rank must be >= 2");
    }
    std::optional<MarginalPrior> prior;
    if (opts.prior == "uniform") {
        prior = MarginalPrior::uniform_unit_hypercube();
    } else if (opts.prior.starts_with("atomic:")) {
        const std::string target = opts.prior.substr(7);
        prior = MarginalPrior::atomic(target == "uniform"
                                          ? MarginalSpec::uniform(opts.rank, 0.5)
                                          : load_system_document(target).marginals());
    } else {
        throw Error(Errc::InvalidArgument,
                    "--prior must be 'uniform' or 'atomic:<uniform|path>'");
    }
    SamplerConfig cfg;
    cfg.master_seed = opts.seed;
    cfg.workers = opts.workers;
    cfg.fast_path = opts.fast_path;
    cfg.solver = solver_with_tol(opts.tol);
    const EpsilonEstimate est = estimate_epsilon_tilde(opts.rank, opts.samples, *prior, cfg);

    nlohmann::json result = estimate_to_json(est);
    result["workers"] = opts.workers;
    result["fast_path"] = opts.fast_path;
    const std::string inputs = "epsilon-tilde rank=" + std::to_string(opts.rank) +
                               " prior=" + opts.prior + " samples=" + std::to_string(opts.samples);
    CommandResult out;
    out.report = make_report("epsilon-tilde", fnv1a_digest(inputs), opts.seed, nullptr,
                             std::move(result), start);
    out.text = estimate_text(est);
    return out;
}

CommandResult cmd_bound_table(const BoundTableOptions& opts)
{
    const auto start = Clock::now();
    const auto rows = bound_table(opts.ranks);
    nlohmann::json json_rows = nlohmann::json::array();
    std::ostringstream csv;
    std::ostringstream text;
    csv << "n,exact,decimal,display\r\n";
    char line[256];
    std::snprintf(line, sizeof line, "%4s  %-14s  %-12s  %s\n", "n", "decimal", "display", "exact");
    text << line;
    for (const auto& row : rows) {
        const std::string exact = to_fraction_string(row.exact);
        json_rows.push_back({{"n", row.n},
                             {"exact", exact},
                             {"decimal", row.decimal},
                             {"display", row.display.text()}});
        csv << row.n << "," << exact << "," << full(row.decimal) << "," << row.display.text()
            << "\r\n";
        std::snprintf(line, sizeof line, "%4zu  %-14s  %-12s  %s\n", row.n,
                      sig6(row.decimal).c_str(), row.display.text().c_str(), exact.c_str());
        text << line;
    }
    std::string inputs = "bound-table";
    for (std::size_t n : opts.ranks) {
        inputs += " " + std::to_string(n);
    }
    CommandResult out;
    out.report = make_report("bound-table", fnv1a_digest(inputs), std::nullopt, nullptr,
                             {{"rows", json_rows}}, start);
    switch (opts.format) {
    case TableFormat::Text: out.text = text.str(); break;
    case TableFormat::Csv: out.text = csv.str(); break;
    case TableFormat::Json: out.text = out.report.dump(2) + "\n"; break;
    }
    return out;
}

CommandResult cmd_verify(const VerifyCommandOptions& opts)
{
    const auto start = Clock::now();
    const auto reports = run_suites(opts.suite, opts.verify);
    nlohmann::json suites = nlohmann::json::array();
    std::ostringstream text;
    bool all_passed = true;
    for (const auto& r : reports) {
        suites.push_back(r.to_json());
        all_passed = all_passed && r.passed;
        text << r.name << ": " << (r.passed ? "PASS" : "FAIL") << "  ranks " << r.rank_lo << ".."
             << r.rank_hi << "  checked " << r.checked << "  failures " << r.failures;
        if (r.skipped) {
            text << "  skipped(band) " << r.skipped;
        }
        if (r.name == "oracle") {
            text << "  marginal " << r.marginal;
        }
        text << "\n";
        for (const auto& ce : r.counterexamples) {
            text << "  counterexample: " << ce.dump() << "\n";
        }
    }
    const std::string inputs = "verify " + opts.suite + " seed=" + std::to_string(opts.verify.seed);
    CommandResult out;
    out.report = make_report("verify", fnv1a_digest(inputs), opts.verify.seed, nullptr,
                             {{"passed", all_passed}, {"suites", suites}}, start);
    out.exit_code = all_passed ? 0 : kExitVerifyFailed;
    out.text = text.str();
    return out;
}

}  // namespace ctx
