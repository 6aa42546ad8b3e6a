// ctx: contextuality checks, measures and epistemic-probability estimates
// for cyclic systems of dichotomous random variables.

#include "ctx/commands.hpp"
#include "ctx/error.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <map>

namespace {

constexpr const char* kFooter = R"(
Exit codes:
  0  noncontextual (check/measure) or success
  3  contextual
  4  marginal: the LP residual fell between tol and 10*tol
  2  a verification suite failed
  1  error (bad input, Frechet violation, solver failure)

Environment:
  CTX_DEFAULT_TOL  default LP tolerance (1e-9 when unset)
)";

int emit(const ctx::CommandResult& result, bool json)
{
    if (json) {
        std::cout << result.report.dump(2) << "\n";
    } else {
        std::cout << result.text;
    }
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Contextuality of cyclic systems of dichotomous random variables"};
    app.footer(kFooter);
    app.require_subcommand(1);
    app.set_version_flag("--version", ctx::kToolVersion);

    bool json = false;

    ctx::CheckOptions check;
    auto* check_cmd = app.add_subcommand("check", "Decide whether a system is contextual");
    check_cmd->add_option("path", check.path, "SystemDocument JSON file")->required();
    check_cmd->add_option("--tol", check.tol, "LP residual tolerance");
    check_cmd->add_flag("--exact", check.exact, "Exact rational LP (rank <= 5)");
    check_cmd->add_flag("--json", json, "Print the JSON run report");

    ctx::MeasureOptions measure;
    auto* measure_cmd = app.add_subcommand("measure", "L1 (non)contextuality measure");
    measure_cmd->add_option("path", measure.path, "SystemDocument JSON file")->required();
    measure_cmd->add_option("--tol", measure.tol, "LP residual tolerance");
    measure_cmd->add_option("--bisect-tol", measure.bisect_tol,
                            "Bisection width for the noncontextuality measure");
    measure_cmd->add_flag("--json", json, "Print the JSON run report");

    ctx::EpsilonOptions eps;
    auto* eps_cmd = app.add_subcommand("epsilon", "Monte Carlo estimate at fixed marginals");
    eps_cmd->add_option("--rank", eps.rank, "Rank n (optional with a marginals file)");
    eps_cmd->add_option("--marginals", eps.marginals, "'uniform' or a SystemDocument path")
        ->capture_default_str();
    eps_cmd->add_option("--samples", eps.samples, "Number of samples")->capture_default_str();
    eps_cmd->add_option("--seed", eps.seed, "Master seed")->capture_default_str();
    eps_cmd->add_option("--workers", eps.workers, "Worker threads")->capture_default_str();
    bool eps_no_fast = false;
    eps_cmd->add_flag("--no-fast-path", eps_no_fast, "Send every sample to the LP");
    eps_cmd->add_option("--tol", eps.tol, "LP residual tolerance");
    eps_cmd->add_flag("--json", json, "Print the JSON run report");

    ctx::EpsilonTildeOptions tilde;
    auto* tilde_cmd =
        app.add_subcommand("epsilon-tilde", "Monte Carlo estimate with marginals drawn from a prior");
    tilde_cmd->add_option("--rank", tilde.rank, "Rank n")->required();
    tilde_cmd->add_option("--samples", tilde.samples, "Number of samples")->capture_default_str();
    tilde_cmd->add_option("--seed", tilde.seed, "Master seed")->capture_default_str();
    tilde_cmd->add_option("--workers", tilde.workers, "Worker threads")->capture_default_str();
    tilde_cmd->add_option("--prior", tilde.prior, "'uniform' or 'atomic:<uniform|path>'")
        ->capture_default_str();
    bool tilde_no_fast = false;
    tilde_cmd->add_flag("--no-fast-path", tilde_no_fast, "Send every sample to the LP");
    tilde_cmd->add_option("--tol", tilde.tol, "LP residual tolerance");
    tilde_cmd->add_flag("--json", json, "Print the JSON run report");

    std::string ranks_text = "2..50";
    std::string format = "text";
    auto* table_cmd = app.add_subcommand("bound-table", "Table of the bound 2^(n-1)/n!");
    table_cmd->add_option("--ranks", ranks_text, "e.g. 2..50 or 2,3,4,5,10")->capture_default_str();
    table_cmd->add_option("--format", format, "csv, json or text")
        ->check(CLI::IsMember({"csv", "json", "text"}))
        ->capture_default_str();

    ctx::VerifyCommandOptions verify;
    std::string rank_range;
    auto* verify_cmd = app.add_subcommand("verify", "Run the LP verification suites");
    verify_cmd->add_option("--suite", verify.suite, "lemma1, lemma2, oracle or all")
        ->check(CLI::IsMember({"lemma1", "lemma2", "oracle", "all"}))
        ->capture_default_str();
    verify_cmd->add_option("--rank-range", rank_range, "Inclusive range a..b (suite default if unset)");
    verify_cmd->add_option("--seed", verify.verify.seed, "Seed")->capture_default_str();
    verify_cmd->add_option("--specs", verify.verify.specs_per_rank, "lemma1 marginal specs per rank")
        ->capture_default_str();
    verify_cmd->add_option("--points", verify.verify.points_per_rank, "lemma2 points per rank")
        ->capture_default_str();
    verify_cmd->add_option("--systems", verify.verify.systems_per_rank, "oracle systems per rank")
        ->capture_default_str();
    verify_cmd->add_flag("--json", json, "Print the JSON run report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : ctx::kExitError;
    }

    try {
        if (*check_cmd) {
            return emit(ctx::cmd_check(check), json);
        }
        if (*measure_cmd) {
            return emit(ctx::cmd_measure(measure), json);
        }
        if (*eps_cmd) {
            eps.fast_path = !eps_no_fast;
            return emit(ctx::cmd_epsilon(eps), json);
        }
        if (*tilde_cmd) {
            tilde.fast_path = !tilde_no_fast;
            return emit(ctx::cmd_epsilon_tilde(tilde), json);
        }
        if (*table_cmd) {
            static const std::map<std::string, ctx::TableFormat> formats{
                {"text", ctx::TableFormat::Text},
                {"csv", ctx::TableFormat::Csv},
                {"json", ctx::TableFormat::Json}};
            const auto result =
                ctx::cmd_bound_table({ctx::parse_rank_list(ranks_text), formats.at(format)});
            std::cout << result.text;
            return result.exit_code;
        }
        if (*verify_cmd) {
            if (!rank_range.empty()) {
                const auto ranks = ctx::parse_rank_list(rank_range);
                verify.verify.ranks = std::pair{ranks.front(), ranks.back()};
            }
            return emit(ctx::cmd_verify(verify), json);
        }
    } catch (const ctx::Error& e) {
        std::cerr << "error [" << ctx::errc_name(e.code()) << "]: " << e.what() << "\n";
        return ctx::kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ctx::kExitError;
    }
    return ctx::kExitError;
}
