#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "seqguard/compiler.hpp"
#include "seqguard/evaluation.hpp"
#include "seqguard/interaction.hpp"
#include "seqguard/policy.hpp"

namespace seqguard {

struct Violation {
    std::string rule_id;
    int severity = 1;
    std::vector<std::string> witness; // minimal subset of Gamma, declaration order
    Obligation obligation;
    std::string source_text;
};

struct VerifierReport {
    std::vector<Violation> violations; // severity descending, then rule id
    double confidence = 1.0;
    bool expansion_requested = false;
};

inline RuleCategory category_for(InteractionKind kind) {
    return kind == InteractionKind::message ? RuleCategory::message : RuleCategory::action;
}

inline const std::vector<Rule>& applicable_rules(const CompiledPolicy& policy,
                                                 InteractionKind kind) {
    return policy.rules_for(category_for(kind));
}

// Gamma |- psi under the closed world: the obligation holds iff it
// evaluates true at the single assignment induced by Gamma.
inline bool check_sequent(const TruthAssignment& gamma, const Obligation& psi) {
    return eval_formula(psi.formula, gamma);
}

// Inclusion-minimal W subseteq Gamma /\ atoms(psi) such that psi evaluates
// false under W alone. Enumerates subsets by size ascending, within a size
// lexicographically by declaration order, so the result is deterministic.
inline std::vector<std::string> minimal_witness(const TruthAssignment& gamma,
                                                const Obligation& psi) {
    if (check_sequent(gamma, psi))
        throw Error("minimal_witness called on an obligation that holds");

    std::set<std::string> psi_atoms = atoms(psi.formula);
    std::vector<std::string> candidates;
    for (const auto& name : gamma.true_names()) {
        if (psi_atoms.find(name) != psi_atoms.end()) candidates.push_back(name);
    }

    auto violates = [&](const std::vector<std::size_t>& picked) {
        TruthAssignment w(gamma.table_ptr());
        for (std::size_t idx : picked) w.assign(candidates[idx], true);
        return !eval_formula(psi.formula, w);
    };

    std::vector<std::size_t> picked;
    // Lexicographic combinations of a given size over candidate indices.
    std::function<bool(std::size_t, std::size_t)> search = [&](std::size_t start,
                                                               std::size_t remaining) -> bool {
        if (remaining == 0) return violates(picked);
        for (std::size_t i = start; i + remaining <= candidates.size(); ++i) {
            picked.push_back(i);
            if (search(i + 1, remaining - 1)) return true;
            picked.pop_back();
        }
        return false;
    };

    for (std::size_t size = 0; size <= candidates.size(); ++size) {
        picked.clear();
        if (search(0, size)) {
            std::vector<std::string> witness;
            witness.reserve(picked.size());
            for (std::size_t idx : picked) witness.push_back(candidates[idx]);
            return witness;
        }
    }
    throw Error("no witness found for a violated obligation");
}

// Checks every applicable rule's sequent and reports violations with
// minimal witnesses. Confidence is the most conservative aggregate: the
// minimum evaluation confidence over all witness predicates, with 1.0 for
// predicates carried by the frame assumption.
inline VerifierReport verify(const TruthAssignment& gamma, const EvaluationResult& evals,
                             InteractionKind kind, const CompiledPolicy& policy,
                             bool already_expanded = false, double expansion_threshold = 0.6) {
    VerifierReport report;
    for (const auto& rule : applicable_rules(policy, kind)) {
        Obligation psi = rule_to_obligation(rule);
        if (check_sequent(gamma, psi)) continue;
        Violation v{rule.id, rule.severity, minimal_witness(gamma, psi), std::move(psi),
                    rule.source_text};
        report.violations.push_back(std::move(v));
    }

    std::sort(report.violations.begin(), report.violations.end(),
              [](const Violation& a, const Violation& b) {
                  if (a.severity != b.severity) return a.severity > b.severity;
                  return a.rule_id < b.rule_id;
              });

    double confidence = 1.0;
    for (const auto& v : report.violations) {
        for (const auto& name : v.witness) {
            auto it = evals.find(name);
            double c = it == evals.end() ? 1.0 : it->second.confidence;
            confidence = std::min(confidence, c);
        }
    }
    report.confidence = confidence;
    report.expansion_requested = confidence < expansion_threshold && !already_expanded;
    return report;
}

} // namespace seqguard
