#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqguard/detail/json_strict.hpp"
#include "seqguard/errors.hpp"
#include "seqguard/policy.hpp"

namespace seqguard {

struct RuleSpec {
    std::string id;
    std::string category; // "msg" | "act"
    int severity = 1;
    std::string formula;
    std::string source_text;
};

struct ToolSpec {
    std::string name;
    std::string description;
    // Explicit rule bindings. An empty list means "governed by nothing";
    // absence enables the keyword-overlap fallback.
    std::optional<std::vector<std::string>> governs;
};

// Source form of a policy book, prior to validation and compilation.
// This file is part of the trusted computing base: parsing is strict and
// unknown keys are rejected.
struct PolicyBook {
    std::vector<PredicateSchema> predicates;
    std::vector<RuleSpec> rules;
    std::vector<ToolSpec> tools;
};

inline PolicyBook parse_policy_book(const nlohmann::json& j) {
    using detail::fail;
    using detail::get_array;
    using detail::get_int;
    using detail::get_string;
    using detail::require_keys;
    using E = ValidationError;

    require_keys<E>(j, "policy book", {"predicates", "rules", "tools"});

    PolicyBook book;

    const auto& predicates = get_array<E>(j, "predicates", "policy book");
    for (std::size_t i = 0; i < predicates.size(); ++i) {
        std::string where = "predicates[" + std::to_string(i) + "]";
        const auto& p = predicates[i];
        require_keys<E>(p, where, {"name", "description", "keywords", "severity_hint"});
        PredicateSchema schema;
        schema.name = get_string<E>(p, "name", where);
        schema.description = get_string<E>(p, "description", where);
        const auto& keywords = get_array<E>(p, "keywords", where);
        for (std::size_t k = 0; k < keywords.size(); ++k) {
            if (!keywords[k].is_string())
                fail<E>(where + ".keywords[" + std::to_string(k) + "]", "expected a string");
            schema.keywords.push_back(keywords[k].get<std::string>());
        }
        schema.severity_hint = static_cast<int>(get_int<E>(p, "severity_hint", where));
        book.predicates.push_back(std::move(schema));
    }

    const auto& rules = get_array<E>(j, "rules", "policy book");
    for (std::size_t i = 0; i < rules.size(); ++i) {
        std::string where = "rules[" + std::to_string(i) + "]";
        const auto& r = rules[i];
        require_keys<E>(r, where, {"id", "category", "severity", "formula", "source_text"});
        RuleSpec spec;
        spec.id = get_string<E>(r, "id", where);
        spec.category = get_string<E>(r, "category", where);
        spec.severity = static_cast<int>(get_int<E>(r, "severity", where));
        spec.formula = get_string<E>(r, "formula", where);
        spec.source_text = get_string<E>(r, "source_text", where);
        book.rules.push_back(std::move(spec));
    }

    const auto& tools = get_array<E>(j, "tools", "policy book");
    for (std::size_t i = 0; i < tools.size(); ++i) {
        std::string where = "tools[" + std::to_string(i) + "]";
        const auto& t = tools[i];
        require_keys<E>(t, where, {"name", "description"}, {"governs"});
        ToolSpec spec;
        spec.name = get_string<E>(t, "name", where);
        spec.description = get_string<E>(t, "description", where);
        if (t.contains("governs")) {
            const auto& governs = get_array<E>(t, "governs", where);
            std::vector<std::string> ids;
            for (std::size_t g = 0; g < governs.size(); ++g) {
                if (!governs[g].is_string())
                    fail<E>(where + ".governs[" + std::to_string(g) + "]", "expected a string");
                ids.push_back(governs[g].get<std::string>());
            }
            spec.governs = std::move(ids);
        }
        book.tools.push_back(std::move(spec));
    }

    return book;
}

inline PolicyBook load_policy_book(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
    if (j.is_discarded()) throw ValidationError("policy book: invalid JSON");
    return parse_policy_book(j);
}

// Canonical JSON form of a validated book; the digest is computed over its
// compact dump so the same content always hashes identically.
inline nlohmann::json book_to_json(const PolicyBook& book) {
    nlohmann::json j;
    j["predicates"] = nlohmann::json::array();
    for (const auto& p : book.predicates) {
        nlohmann::json jp;
        jp["name"] = p.name;
        jp["description"] = p.description;
        jp["keywords"] = p.keywords;
        jp["severity_hint"] = p.severity_hint;
        j["predicates"].push_back(std::move(jp));
    }
    j["rules"] = nlohmann::json::array();
    for (const auto& r : book.rules) {
        nlohmann::json jr;
        jr["id"] = r.id;
        jr["category"] = r.category;
        jr["severity"] = r.severity;
        jr["formula"] = r.formula;
        jr["source_text"] = r.source_text;
        j["rules"].push_back(std::move(jr));
    }
    j["tools"] = nlohmann::json::array();
    for (const auto& t : book.tools) {
        nlohmann::json jt;
        jt["name"] = t.name;
        jt["description"] = t.description;
        if (t.governs) jt["governs"] = *t.governs;
        j["tools"].push_back(std::move(jt));
    }
    return j;
}

} // namespace seqguard
