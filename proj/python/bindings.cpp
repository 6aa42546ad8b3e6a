#include "ctx/commands.hpp"
#include "ctx/cyclic.hpp"
#include "ctx/document.hpp"
#include "ctx/epistemic.hpp"
#include "ctx/exact.hpp"
#include "ctx/polytope.hpp"
#include "ctx/verify.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

namespace py = pybind11;

namespace {

// JSON payloads cross the boundary as Python dicts via the json module.
py::object to_python(const nlohmann::json& j)
{
    static auto* loads = new py::object(py::module_::import("json").attr("loads"));
    return (*loads)(j.dump());
}

const char* membership_name(ctx::Membership m)
{
    switch (m) {
    case ctx::Membership::Inside: return "inside";
    case ctx::Membership::Outside: return "outside";
    case ctx::Membership::Boundary: return "boundary";
    }
    return "unknown";
}

ctx::SolverConfig solver(std::optional<double> tol, const std::string& pricing)
{
    ctx::SolverConfig cfg;
    if (tol) {
        cfg.tol = *tol;
    }
    if (pricing == "dense") {
        cfg.pricing = ctx::PricingMode::Dense;
    } else if (pricing == "dp") {
        cfg.pricing = ctx::PricingMode::DynamicProgramming;
    } else if (pricing != "auto") {
        throw ctx::Error(ctx::Errc::InvalidArgument, "pricing must be 'auto', 'dense' or 'dp'");
    }
    return cfg;
}

ctx::SamplerConfig sampler(std::uint64_t seed, std::size_t workers, bool fast_path,
                           double confidence, std::optional<double> tol)
{
    ctx::SamplerConfig cfg;
    cfg.master_seed = seed;
    cfg.workers = workers;
    cfg.fast_path = fast_path;
    cfg.confidence = confidence;
    cfg.solver = solver(tol, "auto");
    return cfg;
}

py::dict measure_dict(const ctx::MeasureResult& m)
{
    py::dict d;
    d["kind"] = m.kind == ctx::MeasureKind::Contextuality ? "contextuality" : "noncontextuality";
    d["value"] = m.value;
    d["attaining_point"] = m.attaining_point;
    d["iterations"] = m.stats.iterations;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Contextuality of cyclic systems of 0/1 random variables";
    m.attr("__version__") = ctx::kToolVersion;

    static py::exception<ctx::Error> error(m, "CtxError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const ctx::Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(py::str(e.what()));
            exc.attr("code") = ctx::errc_name(e.code());
            exc.attr("index") = e.index() ? py::cast(*e.index()) : py::none();
            PyErr_SetObject(error.ptr(), exc.ptr());
        }
    });

    py::class_<ctx::MarginalSpec>(m, "MarginalSpec")
        .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("p_first"),
             py::arg("p_second"))
        .def_static("uniform", &ctx::MarginalSpec::uniform, py::arg("n"), py::arg("p") = 0.5)
        .def_property_readonly("rank", &ctx::MarginalSpec::rank)
        .def_property_readonly("p_first",
                               [](const ctx::MarginalSpec& s) {
                                   return std::vector<double>(s.firsts().begin(), s.firsts().end());
                               })
        .def_property_readonly("p_second",
                               [](const ctx::MarginalSpec& s) {
                                   return std::vector<double>(s.seconds().begin(),
                                                              s.seconds().end());
                               })
        .def("hyperbox",
             [](const ctx::MarginalSpec& s) {
                 const auto box = ctx::hyperbox(s);
                 return py::make_tuple(box.lo, box.hi);
             })
        .def("c_vector", [](const ctx::MarginalSpec& s) { return ctx::c_vector(s); })
        .def("__repr__", [](const ctx::MarginalSpec& s) {
            return "MarginalSpec(rank=" + std::to_string(s.rank()) + ")";
        });

    py::class_<ctx::CyclicSystem>(m, "CyclicSystem")
        .def(py::init<ctx::MarginalSpec, std::vector<double>>(), py::arg("marginals"), py::arg("b"))
        .def_property_readonly("rank", &ctx::CyclicSystem::rank)
        .def_property_readonly("marginals", &ctx::CyclicSystem::marginals)
        .def_property_readonly("b", [](const ctx::CyclicSystem& s) {
            return std::vector<double>(s.b().begin(), s.b().end());
        });

    m.def(
        "demibox_contains",
        [](const ctx::MarginalSpec& marginals, const std::vector<double>& point, double tol) {
            return membership_name(ctx::demibox_contains(ctx::hyperbox(marginals), point, tol));
        },
        py::arg("marginals"), py::arg("point"), py::arg("tol") = 1e-9,
        "'inside', 'outside' or 'boundary' for the convex hull of the even box vertices");

    m.def(
        "epsilon_upper_bound",
        [](std::size_t n) {
            return py::module_::import("fractions").attr("Fraction")(ctx::to_fraction_string(ctx::epsilon_upper_bound(n)));
        },
        py::arg("n"), "2^(n-1)/n! as a fractions.Fraction");

    m.def(
        "bound_table",
        [](const std::vector<std::size_t>& ranks) {
            return to_python(ctx::cmd_bound_table({ranks, ctx::TableFormat::Json})
                                 .report["result"]["rows"]);
        },
        py::arg("ranks"));

    m.def(
        "check",
        [](const ctx::CyclicSystem& s, std::optional<double> tol, const std::string& pricing) {
            return to_python(ctx::feasibility_to_json(ctx::check_noncontextual(s, solver(tol, pricing))));
        },
        py::arg("system"), py::arg("tol") = py::none(), py::arg("pricing") = "auto");

    m.def(
        "check_exact",
        [](const std::string& document_json) {
            const auto doc = ctx::parse_system_document(std::string_view(document_json));
            const auto r = ctx::check_noncontextual_exact(doc.exact_system());
            py::dict d;
            d["verdict"] = ctx::verdict_name(r.verdict);
            d["infeasibility"] = ctx::to_fraction_string(r.infeasibility);
            py::list witness;
            for (const auto& w : r.witness) {
                witness.append(py::make_tuple(w.column, ctx::to_fraction_string(w.mass)));
            }
            d["witness"] = witness;
            py::list certificate;
            for (const auto& y : r.certificate) {
                certificate.append(ctx::to_fraction_string(y));
            }
            d["certificate"] = certificate;
            return d;
        },
        py::arg("document_json"), "Exact rational check of a SystemDocument (rank <= 5)");

    m.def(
        "contextuality_measure",
        [](const ctx::CyclicSystem& s, std::optional<double> tol) {
            return measure_dict(ctx::contextuality_measure(s, solver(tol, "auto")));
        },
        py::arg("system"), py::arg("tol") = py::none());

    m.def(
        "noncontextuality_measure",
        [](const ctx::CyclicSystem& s, std::optional<double> tol, double bisect_tol) {
            auto cfg = solver(tol, "auto");
            cfg.bisect_tol = bisect_tol;
            return measure_dict(ctx::noncontextuality_measure(s, cfg));
        },
        py::arg("system"), py::arg("tol") = py::none(), py::arg("bisect_tol") = 1e-6);

    m.def(
        "estimate_epsilon",
        [](const ctx::MarginalSpec& marginals, std::uint64_t samples, std::uint64_t seed,
           std::size_t workers, bool fast_path, double confidence, std::optional<double> tol) {
            ctx::EpsilonEstimate est;
            {
                py::gil_scoped_release release;
                est = ctx::estimate_epsilon(marginals, samples,
                                            sampler(seed, workers, fast_path, confidence, tol));
            }
            return to_python(ctx::estimate_to_json(est));
        },
        py::arg("marginals"), py::arg("samples") = 100'000, py::arg("seed") = 42,
        py::arg("workers") = 1, py::arg("fast_path") = true, py::arg("confidence") = 0.99,
        py::arg("tol") = py::none());

    m.def(
        "estimate_epsilon_tilde",
        [](std::size_t n, std::uint64_t samples, std::uint64_t seed, std::size_t workers,
           std::optional<ctx::MarginalSpec> atomic, bool fast_path, double confidence,
           std::optional<double> tol) {
            const auto prior = atomic ? ctx::MarginalPrior::atomic(*atomic)
                                      : ctx::MarginalPrior::uniform_unit_hypercube();
            ctx::EpsilonEstimate est;
            {
                py::gil_scoped_release release;
                est = ctx::estimate_epsilon_tilde(
                    n, samples, prior, sampler(seed, workers, fast_path, confidence, tol));
            }
            return to_python(ctx::estimate_to_json(est));
        },
        py::arg("n"), py::arg("samples") = 100'000, py::arg("seed") = 42, py::arg("workers") = 1,
        py::arg("atomic") = py::none(), py::arg("fast_path") = true, py::arg("confidence") = 0.99,
        py::arg("tol") = py::none(),
        "Marginals iid uniform on [0,1], or fixed at `atomic` when given");

    m.def(
        "verify",
        [](const std::string& suite, std::optional<std::pair<std::size_t, std::size_t>> ranks,
           std::uint64_t seed) {
            ctx::VerifyOptions opts;
            opts.ranks = ranks;
            opts.seed = seed;
            std::vector<ctx::SuiteReport> reports;
            {
                py::gil_scoped_release release;
                reports = ctx::run_suites(suite, opts);
            }
            py::list out;
            for (const auto& r : reports) {
                out.append(to_python(r.to_json()));
            }
            return out;
        },
        py::arg("suite") = "all", py::arg("ranks") = py::none(), py::arg("seed") = 2020);

    m.def(
        "parse_document",
        [](const std::string& text) {
            return to_python(ctx::to_json(ctx::parse_system_document(std::string_view(text))));
        },
        py::arg("text"), "Validates a SystemDocument and returns its canonical p/q form");

    m.def(
        "load_system",
        [](const std::string& path) { return ctx::load_system_document(path).system(); },
        py::arg("path"));
}
