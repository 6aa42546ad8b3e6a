#include "ctx/document.hpp"

#include <fstream>
#include <sstream>

namespace ctx {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& message)
{
    throw Error(Errc::Parse, field + ": " + message);
}

ExactRational parse_value(const nlohmann::json& v, const std::string& field)
{
    try {
        if (v.is_string()) {
            return parse_rational(v.get<std::string>());
        }
        if (v.is_number_integer()) {
            return ExactRational(v.get<long long>());
        }
        if (v.is_number()) {
            return rational_from_double(v.get<double>());
        }
    } catch (const Error& e) {
        field_error(field, e.what());
    }
    field_error(field, "expected a number or a \"p/q\" string");
}

}  // namespace

bool SystemDocument::has_products() const
{
    for (const auto& c : contexts) {
        if (!c.p_both) {
            return false;
        }
    }
    return true;
}

ExactMarginalSpec SystemDocument::exact_marginals() const
{
    std::vector<ExactRational> first;
    std::vector<ExactRational> second;
    for (const auto& c : contexts) {
        first.push_back(c.p_first);
        second.push_back(c.p_second);
    }
    return ExactMarginalSpec(std::move(first), std::move(second));
}

MarginalSpec SystemDocument::marginals() const
{
    std::vector<double> first;
    std::vector<double> second;
    for (const auto& c : contexts) {
        first.push_back(to_double(c.p_first));
        second.push_back(to_double(c.p_second));
    }
    return MarginalSpec(std::move(first), std::move(second));
}

ExactCyclicSystem SystemDocument::exact_system() const
{
    std::vector<ExactRational> b;
    for (std::size_t i = 0; i < contexts.size(); ++i) {
        if (!contexts[i].p_both) {
            field_error("contexts[" + std::to_string(i) + "].p_both", "required for this command");
        }
        b.push_back(*contexts[i].p_both);
    }
    const ExactMarginalSpec marginals = exact_marginals();
    try {
        return ExactCyclicSystem(marginals, std::move(b));
    } catch (const Error& e) {
        if (e.code() != Errc::FrechetViolation || !e.index()) {
            throw;
        }
        const std::size_t i = *e.index();
        throw Error(e.code(),
                    "contexts[" + std::to_string(i) + "].p_both: " +
                        to_fraction_string(*contexts[i].p_both) +
                        " is outside the Frechet interval of its marginals",
                    i);
    }
}

CyclicSystem SystemDocument::system() const
{
    std::vector<double> b;
    for (std::size_t i = 0; i < contexts.size(); ++i) {
        if (!contexts[i].p_both) {
            field_error("contexts[" + std::to_string(i) + "].p_both", "required for this command");
        }
        b.push_back(to_double(*contexts[i].p_both));
    }
    // Validate the exact values first so Frechet violations are judged exactly.
    (void)exact_system();
    return CyclicSystem(marginals(), std::move(b));
}

SystemDocument SystemDocument::from(const ExactMarginalSpec& marginals)
{
    SystemDocument doc;
    doc.rank = marginals.rank();
    for (std::size_t i = 0; i < marginals.rank(); ++i) {
        doc.contexts.push_back({marginals.first(i), marginals.second(i), std::nullopt});
    }
    return doc;
}

SystemDocument SystemDocument::from(const ExactCyclicSystem& system)
{
    SystemDocument doc = from(system.marginals());
    for (std::size_t i = 0; i < system.rank(); ++i) {
        doc.contexts[i].p_both = system.b()[i];
    }
    return doc;
}

SystemDocument parse_system_document(const nlohmann::json& j)
{
    if (!j.is_object()) {
        field_error("<root>", "expected a JSON object");
    }
    SystemDocument doc;
    if (!j.contains("rank") || !j["rank"].is_number_integer()) {
        field_error("rank", "required integer");
    }
    const auto rank = j["rank"].get<long long>();
    if (rank < 2) {
        throw Error(Errc::RankTooSmall, "rank: cyclic systems need rank n >= 2");
    }
    doc.rank = static_cast<std::size_t>(rank);
    if (j.contains("encoding")) {
        if (!j["encoding"].is_string() || j["encoding"].get<std::string>() != "01") {
            field_error("encoding", "only the \"01\" encoding is supported");
        }
    }
    if (!j.contains("contexts") || !j["contexts"].is_array()) {
        field_error("contexts", "required array");
    }
    const auto& contexts = j["contexts"];
    if (contexts.size() != doc.rank) {
        field_error("contexts", "expected " + std::to_string(doc.rank) + " entries, found " +
                                    std::to_string(contexts.size()));
    }
    for (std::size_t i = 0; i < contexts.size(); ++i) {
        const std::string base = "contexts[" + std::to_string(i) + "]";
        const auto& c = contexts[i];
        if (!c.is_object()) {
            field_error(base, "expected an object");
        }
        ContextEntry entry;
        for (const char* key : {"p_first", "p_second"}) {
            if (!c.contains(key)) {
                field_error(base + "." + key, "required");
            }
        }
        entry.p_first = parse_value(c["p_first"], base + ".p_first");
        entry.p_second = parse_value(c["p_second"], base + ".p_second");
        if (c.contains("p_both") && !c["p_both"].is_null()) {
            entry.p_both = parse_value(c["p_both"], base + ".p_both");
        }
        doc.contexts.push_back(std::move(entry));
    }
    // Range checks on the marginals; products are validated when a system is built.
    (void)doc.exact_marginals();
    return doc;
}

SystemDocument parse_system_document(std::string_view text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::Parse, std::string("invalid JSON: ") + e.what());
    }
    return parse_system_document(j);
}

SystemDocument load_system_document(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::Parse, "cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        const std::string text = buffer.str();
        return parse_system_document(std::string_view(text));
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.what(), e.index());
    }
}

nlohmann::json to_json(const SystemDocument& doc)
{
    nlohmann::json contexts = nlohmann::json::array();
    for (const auto& c : doc.contexts) {
        nlohmann::json entry = {{"p_first", to_fraction_string(c.p_first)},
                                {"p_second", to_fraction_string(c.p_second)}};
        if (c.p_both) {
            entry["p_both"] = to_fraction_string(*c.p_both);
        }
        contexts.push_back(std::move(entry));
    }
    return {{"rank", doc.rank}, {"encoding", doc.encoding}, {"contexts", std::move(contexts)}};
}

}  // namespace ctx
