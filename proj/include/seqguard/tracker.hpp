#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "seqguard/adapters.hpp"
#include "seqguard/compiler.hpp"
#include "seqguard/errors.hpp"
#include "seqguard/evaluation.hpp"
#include "seqguard/interaction.hpp"
#include "seqguard/policy.hpp"

namespace seqguard {

// C_t = S_t (retrieved, ranked) union M_t (must-check from the dependency
// graph). `combined` preserves retrieval order and appends must-check
// extras, deduplicated.
struct CandidateSet {
    std::vector<std::string> retrieved;
    std::vector<std::string> must_check;
    std::vector<std::string> combined;
    bool unknown_tool = false;
};

// Budget expansion under threat: one extra predicate per level.
inline int effective_budget(int k_base, int threat_level) {
    if (k_base < 1) throw Error("k_base must be >= 1");
    if (threat_level < 0 || threat_level > 4) throw Error("threat level out of 0..4");
    return k_base + threat_level;
}

inline CandidateSet candidate_set(const Interaction& m, const CompiledPolicy& policy,
                                  int budget) {
    if (budget < 1) throw Error("candidate budget must be >= 1");

    CandidateSet out;
    out.retrieved = policy.index().top_k(query_text(m), static_cast<std::size_t>(budget));

    if (m.kind == InteractionKind::action && m.tool) {
        const auto& graph = policy.dependency_graph();
        auto it = graph.find(m.tool->name);
        if (it == graph.end()) {
            // Must-check coverage holds only for known tool dependencies;
            // retrieval alone has to carry unknown tools.
            out.unknown_tool = true;
        } else {
            // Declaration order, for deterministic audits.
            for (const auto& schema : policy.predicates().schemas()) {
                if (it->second.find(schema.name) != it->second.end())
                    out.must_check.push_back(schema.name);
            }
        }
    }

    out.combined = out.retrieved;
    std::set<std::string> seen(out.combined.begin(), out.combined.end());
    for (const auto& name : out.must_check) {
        if (seen.insert(name).second) out.combined.push_back(name);
    }
    return out;
}

// Evaluates only the candidates and applies the frame assumption: every
// predicate outside C_t keeps its previous truth value. Candidates omitted
// by the evaluator are likewise carried over (delta semantics).
inline std::pair<TruthAssignment, EvaluationResult> update_state(
    const TruthAssignment& gamma_prev, const CandidateSet& candidates, const Interaction& m,
    EvaluatorAdapter& evaluator) {
    const PredicateTable& table = gamma_prev.table();

    std::vector<PredicateSchema> schemas;
    schemas.reserve(candidates.combined.size());
    for (const auto& name : candidates.combined) {
        auto idx = table.index_of(name);
        if (!idx) throw Error("candidate set names undeclared predicate \"" + name + "\"");
        schemas.push_back(table.at(*idx));
    }

    EvaluationResult result = evaluator.evaluate(schemas, m);

    // The evaluator response is the only write path into Gamma; anything
    // outside the candidate set is rejected.
    std::set<std::string> allowed(candidates.combined.begin(), candidates.combined.end());
    for (const auto& [name, _] : result) {
        if (allowed.find(name) == allowed.end())
            throw AdapterError("evaluator returned non-candidate predicate \"" + name + "\"");
        if (_.confidence < 0.0 || _.confidence > 1.0)
            throw AdapterError("evaluator confidence out of [0, 1] for \"" + name + "\"");
    }

    TruthAssignment gamma = gamma_prev;
    for (const auto& name : candidates.combined) {
        auto it = result.find(name);
        if (it != result.end()) gamma.assign(name, it->second.value);
    }
    return {std::move(gamma), std::move(result)};
}

} // namespace seqguard
