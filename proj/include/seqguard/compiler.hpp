#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "seqguard/book.hpp"
#include "seqguard/detail/sha256.hpp"
#include "seqguard/detail/text.hpp"
#include "seqguard/embedding.hpp"
#include "seqguard/errors.hpp"
#include "seqguard/index.hpp"
#include "seqguard/policy.hpp"

namespace seqguard {

// tool name -> predicates that must be checked whenever the tool is invoked
// (the atoms of every rule governing that tool).
using DependencyGraph = std::map<std::string, std::set<std::string>>;

namespace detail {

inline bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    if (!(s[0] >= 'a' && s[0] <= 'z')) return false;
    for (char c : s) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
        if (!ok) return false;
    }
    return true;
}

inline bool is_reserved_word(std::string_view s) {
    std::string lower = to_lower_copy(s);
    return lower == "not" || lower == "and" || lower == "or" || lower == "implies";
}

// Fallback binding signal when a tool carries no explicit `governs` list:
// the tool's name/description and the rule's source_text share a meaningful
// token (length >= 4, not a filler word).
inline bool keyword_overlap(const std::string& tool_text, const std::string& rule_text) {
    static const std::set<std::string> stopwords = {"that", "this", "with", "from", "when",
                                                    "your", "will", "does", "into", "have"};
    std::set<std::string> tool_tokens;
    for (auto& t : tokenize(tool_text)) {
        if (t.size() >= 4 && stopwords.find(t) == stopwords.end()) tool_tokens.insert(t);
    }
    for (auto& t : tokenize(rule_text)) {
        if (t.size() >= 4 && tool_tokens.find(t) != tool_tokens.end()) return true;
    }
    return false;
}

} // namespace detail

inline DependencyGraph build_dependency_graph(const std::vector<Rule>& rules,
                                              const std::vector<ToolSpec>& tools) {
    std::map<std::string, const Rule*> by_id;
    for (const auto& r : rules) by_id.emplace(r.id, &r);

    DependencyGraph graph;
    for (const auto& tool : tools) {
        std::set<std::string> required;
        if (tool.governs) {
            for (const auto& id : *tool.governs) {
                auto it = by_id.find(id);
                if (it == by_id.end())
                    throw ValidationError("tool \"" + tool.name +
                                          "\" governs unknown rule \"" + id + "\"");
                for (const auto& atom : atoms(it->second->formula)) required.insert(atom);
            }
        } else {
            std::string tool_text = tool.name + " " + tool.description;
            for (const auto& r : rules) {
                // only action rules can govern a tool invocation
                if (r.category != RuleCategory::action) continue;
                if (detail::keyword_overlap(tool_text, r.source_text)) {
                    for (const auto& atom : atoms(r.formula)) required.insert(atom);
                }
            }
        }
        graph.emplace(tool.name, std::move(required));
    }
    return graph;
}

// The offline artifact: validated predicate table, rules partitioned by
// category, tool dependency graph, retrieval index, and a content digest
// verified again at engine startup.
class CompiledPolicy {
public:
    CompiledPolicy(std::shared_ptr<const PredicateTable> table,
                   std::vector<Rule> message_rules, std::vector<Rule> action_rules,
                   DependencyGraph graph, PredicateIndex index, std::string canonical_source,
                   std::string digest)
        : table_(std::move(table)),
          message_rules_(std::move(message_rules)),
          action_rules_(std::move(action_rules)),
          graph_(std::move(graph)),
          index_(std::move(index)),
          canonical_source_(std::move(canonical_source)),
          digest_(std::move(digest)) {}

    const PredicateTable& predicates() const { return *table_; }
    std::shared_ptr<const PredicateTable> table_ptr() const { return table_; }
    const std::vector<Rule>& message_rules() const { return message_rules_; }
    const std::vector<Rule>& action_rules() const { return action_rules_; }
    const std::vector<Rule>& rules_for(RuleCategory category) const {
        return category == RuleCategory::message ? message_rules_ : action_rules_;
    }
    const DependencyGraph& dependency_graph() const { return graph_; }
    const PredicateIndex& index() const { return index_; }
    const std::string& canonical_source() const { return canonical_source_; }
    const std::string& digest() const { return digest_; }

    std::size_t rule_count() const { return message_rules_.size() + action_rules_.size(); }

    const Rule* find_rule(std::string_view id) const {
        for (const auto& r : message_rules_)
            if (r.id == id) return &r;
        for (const auto& r : action_rules_)
            if (r.id == id) return &r;
        return nullptr;
    }

    // Recomputes the content digest; throws if the loaded artifact was
    // tampered with after compilation.
    void verify_integrity() const {
        if (detail::sha256_hex(canonical_source_) != digest_)
            throw ValidationError("compiled policy digest mismatch");
    }

private:
    std::shared_ptr<const PredicateTable> table_;
    std::vector<Rule> message_rules_;
    std::vector<Rule> action_rules_;
    DependencyGraph graph_;
    PredicateIndex index_;
    std::string canonical_source_;
    std::string digest_;
};

inline CompiledPolicy compile(const PolicyBook& book,
                              std::shared_ptr<const Embedder> embedder = nullptr) {
    if (book.predicates.empty()) throw ValidationError("no predicates declared");

    for (std::size_t i = 0; i < book.predicates.size(); ++i) {
        const auto& p = book.predicates[i];
        std::string where = "predicates[" + std::to_string(i) + "]";
        if (!detail::is_identifier(p.name))
            throw ValidationError(where + ".name: \"" + p.name +
                                  "\" must match [a-z][a-z0-9_]*");
        if (detail::is_reserved_word(p.name))
            throw ValidationError(where + ".name: \"" + p.name + "\" is a reserved word");
        if (p.keywords.empty())
            throw ValidationError(where + ".keywords: must be non-empty (the deterministic "
                                          "evaluator depends on it)");
        for (std::size_t k = 0; k < p.keywords.size(); ++k) {
            const auto& kw = p.keywords[k];
            std::string kwhere = where + ".keywords[" + std::to_string(k) + "]";
            if (kw.empty() || detail::tokenize(kw).empty())
                throw ValidationError(kwhere + ": must contain at least one token");
            if (!detail::is_ascii_lowercase(kw))
                throw ValidationError(kwhere + ": must be lowercase");
        }
        if (p.severity_hint < 1 || p.severity_hint > 4)
            throw ValidationError(where + ".severity_hint: must be in 1..4");
    }

    auto table = std::make_shared<const PredicateTable>(book.predicates);

    std::vector<Rule> message_rules;
    std::vector<Rule> action_rules;
    std::set<std::string> rule_ids;
    for (std::size_t i = 0; i < book.rules.size(); ++i) {
        const auto& spec = book.rules[i];
        std::string where = "rules[" + std::to_string(i) + "]";
        if (!detail::is_identifier(spec.id))
            throw ValidationError(where + ".id: \"" + spec.id + "\" must match [a-z][a-z0-9_]*");
        if (!rule_ids.insert(spec.id).second)
            throw ValidationError(where + ".id: duplicate rule id \"" + spec.id + "\"");
        RuleCategory category;
        if (spec.category == "msg") {
            category = RuleCategory::message;
        } else if (spec.category == "act") {
            category = RuleCategory::action;
        } else {
            throw ValidationError(where + ".category: must be \"msg\" or \"act\"");
        }
        if (spec.severity < 1 || spec.severity > 4)
            throw ValidationError(where + ".severity: must be in 1..4");
        Formula formula = [&] {
            try {
                return parse_formula(spec.formula);
            } catch (const ParseError& e) {
                throw ValidationError(where + ".formula: " + e.what());
            }
        }();
        for (const auto& atom : atoms(formula)) {
            if (!table->contains(atom))
                throw ValidationError(where + ".formula: undeclared predicate \"" + atom + "\"");
        }
        Rule rule{spec.id, category, spec.severity, std::move(formula), spec.source_text};
        (category == RuleCategory::message ? message_rules : action_rules)
            .push_back(std::move(rule));
    }

    std::set<std::string> tool_names;
    for (std::size_t i = 0; i < book.tools.size(); ++i) {
        const auto& t = book.tools[i];
        std::string where = "tools[" + std::to_string(i) + "]";
        if (t.name.empty()) throw ValidationError(where + ".name: must be non-empty");
        if (!tool_names.insert(t.name).second)
            throw ValidationError(where + ".name: duplicate tool name \"" + t.name + "\"");
    }

    std::vector<Rule> all_rules = message_rules;
    all_rules.insert(all_rules.end(), action_rules.begin(), action_rules.end());
    DependencyGraph graph = build_dependency_graph(all_rules, book.tools);

    if (!embedder) embedder = std::make_shared<const TokenHashEmbedder>();
    PredicateIndex index(table, embedder);

    std::string canonical = book_to_json(book).dump();
    std::string digest = detail::sha256_hex(canonical);

    return CompiledPolicy(table, std::move(message_rules), std::move(action_rules),
                          std::move(graph), std::move(index), std::move(canonical),
                          std::move(digest));
}

inline CompiledPolicy compile_text(const std::string& json_text,
                                   std::shared_ptr<const Embedder> embedder = nullptr) {
    return compile(load_policy_book(json_text), std::move(embedder));
}

// --- compiled artifact file ---------------------------------------------

inline std::string serialize_compiled(const CompiledPolicy& policy) {
    nlohmann::ordered_json j;
    j["format"] = "compiled-policy/1";
    j["digest"] = policy.digest();
    j["book"] = nlohmann::json::parse(policy.canonical_source());
    j["summary"] = {{"predicates", policy.predicates().size()},
                    {"message_rules", policy.message_rules().size()},
                    {"action_rules", policy.action_rules().size()},
                    {"tools", policy.dependency_graph().size()}};
    return j.dump(2) + "\n";
}

inline CompiledPolicy load_compiled(const std::string& text,
                                    std::shared_ptr<const Embedder> embedder = nullptr) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ValidationError("compiled policy: invalid JSON");
    detail::require_keys<ValidationError>(j, "compiled policy",
                                          {"format", "digest", "book", "summary"});
    if (detail::get_string<ValidationError>(j, "format", "compiled policy") !=
        "compiled-policy/1")
        throw ValidationError("compiled policy: unsupported format");
    std::string recorded = detail::get_string<ValidationError>(j, "digest", "compiled policy");

    CompiledPolicy policy = compile(parse_policy_book(j.at("book")), std::move(embedder));
    if (policy.digest() != recorded)
        throw ValidationError("compiled policy: digest mismatch (artifact was modified)");
    return policy;
}

} // namespace seqguard
