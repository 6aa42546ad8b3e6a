#pragma once

// SystemDocument: the JSON form of a cyclic system.
//
//   {"rank": n, "encoding": "01",
//    "contexts": [{"p_first": x, "p_second": y, "p_both": z}, ...]}
//
// Entry i describes context i: p_first = P(R_i^i = 1), p_second =
// P(R_{i+1}^i = 1), p_both = P(both are 1). Values are JSON numbers or
// strings holding "p/q" rationals or decimal literals; they are kept exact.

#include "ctx/cyclic.hpp"
#include "ctx/rational.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ctx {

struct ContextEntry {
    ExactRational p_first;
    ExactRational p_second;
    std::optional<ExactRational> p_both;

    bool operator==(const ContextEntry&) const = default;
};

struct SystemDocument {
    std::size_t rank = 0;
    std::vector<ContextEntry> contexts;
    std::string encoding = "01";

    bool has_products() const;

    ExactMarginalSpec exact_marginals() const;
    MarginalSpec marginals() const;
    /// Both throw Error(Parse) when some p_both is missing.
    ExactCyclicSystem exact_system() const;
    CyclicSystem system() const;

    static SystemDocument from(const ExactMarginalSpec& marginals);
    static SystemDocument from(const ExactCyclicSystem& system);

    bool operator==(const SystemDocument&) const = default;
};

SystemDocument parse_system_document(const nlohmann::json& doc);
/// JSON syntax errors report the byte offset; field errors the field path.
SystemDocument parse_system_document(std::string_view text);
SystemDocument load_system_document(const std::filesystem::path& path);

/// Values are written as "p/q" strings.
nlohmann::json to_json(const SystemDocument& doc);

}  // namespace ctx
