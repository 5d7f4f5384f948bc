#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seqguard/errors.hpp"
#include "seqguard/formula.hpp"

namespace seqguard {

// An atomic, safety-relevant Boolean fact about observable state.
struct PredicateSchema {
    std::string name;                  // unique, [a-z][a-z0-9_]*
    std::string description;
    std::vector<std::string> keywords; // non-empty; lowercase tokens or phrases
    int severity_hint = 1;             // 1..4
};

// Text indexed for semantic retrieval of a predicate.
inline std::string schema_text(const PredicateSchema& p) {
    std::string out = p.name + " " + p.description;
    for (const auto& kw : p.keywords) {
        out.push_back(' ');
        out += kw;
    }
    return out;
}

enum class RuleCategory { message, action };

inline std::string_view to_string(RuleCategory c) {
    return c == RuleCategory::message ? "msg" : "act";
}

struct Rule {
    std::string id;
    RuleCategory category;
    int severity = 1; // 1..4
    Formula formula;
    std::string source_text; // original natural-language policy line
};

// The must-hold form of a rule; violated when it evaluates false.
struct Obligation {
    Formula formula;
};

// Rules are already stated as conditions that must hold, so the rewrite is
// the identity on the rule formula.
inline Obligation rule_to_obligation(const Rule& r) {
    return Obligation{r.formula};
}

// Declared predicates in declaration order. Declaration order is the
// tie-break for retrieval and witness selection, so it is part of the
// policy's observable contract.
class PredicateTable {
public:
    explicit PredicateTable(std::vector<PredicateSchema> schemas)
        : schemas_(std::move(schemas)) {
        for (std::size_t i = 0; i < schemas_.size(); ++i) {
            auto [it, inserted] = index_.emplace(schemas_[i].name, i);
            if (!inserted)
                throw ValidationError("duplicate predicate name \"" + schemas_[i].name + "\"");
        }
    }

    std::size_t size() const { return schemas_.size(); }
    const PredicateSchema& at(std::size_t i) const { return schemas_.at(i); }
    const std::vector<PredicateSchema>& schemas() const { return schemas_; }

    std::optional<std::size_t> index_of(std::string_view name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    bool contains(std::string_view name) const { return index_.find(name) != index_.end(); }

private:
    std::vector<PredicateSchema> schemas_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

// Gamma: the set of predicates currently proven true, over a fixed table.
// Closed world: any declared predicate not set is false.
class TruthAssignment {
public:
    explicit TruthAssignment(std::shared_ptr<const PredicateTable> table)
        : table_(std::move(table)), truth_(table_->size(), false) {
        if (!table_) throw Error("TruthAssignment requires a predicate table");
    }

    const PredicateTable& table() const { return *table_; }
    std::shared_ptr<const PredicateTable> table_ptr() const { return table_; }

    bool holds(std::string_view name) const {
        auto idx = table_->index_of(name);
        if (!idx) throw EvaluationError("undeclared predicate \"" + std::string(name) + "\"");
        return truth_[*idx];
    }

    void assign(std::string_view name, bool value) {
        auto idx = table_->index_of(name);
        if (!idx) throw EvaluationError("undeclared predicate \"" + std::string(name) + "\"");
        truth_[*idx] = value;
    }

    std::size_t true_count() const {
        std::size_t n = 0;
        for (bool b : truth_) n += b ? 1 : 0;
        return n;
    }

    // Declaration order.
    std::vector<std::string> true_names() const {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < truth_.size(); ++i) {
            if (truth_[i]) out.push_back(table_->at(i).name);
        }
        return out;
    }

    friend bool operator==(const TruthAssignment& a, const TruthAssignment& b) {
        return a.table_ == b.table_ && a.truth_ == b.truth_;
    }
    friend bool operator!=(const TruthAssignment& a, const TruthAssignment& b) {
        return !(a == b);
    }

private:
    std::shared_ptr<const PredicateTable> table_;
    std::vector<bool> truth_;
};

// Standard propositional semantics under the closed world of `gamma`.
// Undeclared atoms signal a compiler/validator bypass.
inline bool eval_formula(const Formula& f, const TruthAssignment& gamma) {
    switch (f.kind()) {
    case Formula::Kind::atom: return gamma.holds(f.atom_name());
    case Formula::Kind::negation: return !eval_formula(f.left(), gamma);
    case Formula::Kind::conjunction:
        return eval_formula(f.left(), gamma) && eval_formula(f.right(), gamma);
    case Formula::Kind::disjunction:
        return eval_formula(f.left(), gamma) || eval_formula(f.right(), gamma);
    case Formula::Kind::implication:
        return !eval_formula(f.left(), gamma) || eval_formula(f.right(), gamma);
    }
    throw Error("unreachable formula kind");
}

} // namespace seqguard
