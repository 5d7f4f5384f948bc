#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "seqguard/detail/text.hpp"
#include "seqguard/evaluation.hpp"
#include "seqguard/interaction.hpp"
#include "seqguard/policy.hpp"
#include "seqguard/verifier.hpp"

namespace seqguard {

enum class Decision { allow, deny };

inline std::string_view to_string(Decision d) {
    return d == Decision::allow ? "allow" : "deny";
}

// Determines truth values for the candidate predicates of one step.
// Implementations may omit candidates (delta semantics); the tracker treats
// omitted candidates as unchanged.
class EvaluatorAdapter {
public:
    virtual ~EvaluatorAdapter() = default;
    virtual EvaluationResult evaluate(const std::vector<PredicateSchema>& candidates,
                                      const Interaction& m) = 0;
};

// Optional override of the discretized threat level; the continuous score
// remains authoritative and keeps evolving by the decay formula.
class ThreatAdapter {
public:
    virtual ~ThreatAdapter() = default;
    virtual int assess(const Interaction& m, int current_level) = 0;
};

struct AdjudicationContext {
    const Interaction& interaction;
    const VerifierReport& report;
    int threat_level = 0;
    Decision candidate = Decision::allow; // threshold ruling under review
};

struct Ruling {
    Decision decision = Decision::allow;
    std::string reason;
};

class AdjudicatorAdapter {
public:
    virtual ~AdjudicatorAdapter() = default;
    virtual Ruling adjudicate(const AdjudicationContext& ctx) = 0;
};

// --- built-in deterministic adapters --------------------------------------

// A predicate is true iff any of its keywords occurs as a whole-token run in
// the interaction's query text. Deterministic and pure; confidence 1.0.
class KeywordEvaluator final : public EvaluatorAdapter {
public:
    EvaluationResult evaluate(const std::vector<PredicateSchema>& candidates,
                              const Interaction& m) override {
        std::string text = detail::normalize_text(query_text(m));
        EvaluationResult result;
        for (const auto& schema : candidates) {
            bool value = false;
            for (const auto& keyword : schema.keywords) {
                if (detail::contains_token_phrase(text, detail::normalize_text(keyword))) {
                    value = true;
                    break;
                }
            }
            result[schema.name] = PredicateEvaluation{value, 1.0};
        }
        return result;
    }
};

// Pure threshold logic: confirms whatever candidate the severity threshold
// produced. Keeps the core testable without any external model.
class ThresholdAdjudicator final : public AdjudicatorAdapter {
public:
    Ruling adjudicate(const AdjudicationContext& ctx) override {
        return Ruling{ctx.candidate, "severity threshold ruling"};
    }
};

// Tier-1 stub that contests deny candidates for read-only query tools,
// standing in for a contextual model that can tell discussing a topic from
// acting on it.
class ContextualOverrideAdjudicator final : public AdjudicatorAdapter {
public:
    explicit ContextualOverrideAdjudicator(std::set<std::string> override_tools)
        : override_tools_(std::move(override_tools)) {}

    Ruling adjudicate(const AdjudicationContext& ctx) override {
        const Interaction& m = ctx.interaction;
        if (ctx.candidate == Decision::deny && m.kind == InteractionKind::action && m.tool &&
            override_tools_.find(m.tool->name) != override_tools_.end()) {
            return Ruling{Decision::allow,
                          "contextual override: querying a topic is not engaging in it"};
        }
        return Ruling{ctx.candidate, "severity threshold ruling"};
    }

private:
    std::set<std::string> override_tools_;
};

} // namespace seqguard
