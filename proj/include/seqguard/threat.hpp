#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "seqguard/compiler.hpp"
#include "seqguard/errors.hpp"
#include "seqguard/interaction.hpp"
#include "seqguard/policy.hpp"
#include "seqguard/verifier.hpp"

namespace seqguard {

// Per-agent continuous threat score in [0, 1] with exponential decay.
// Unknown agents read as 0 ("Trusted").
class ThreatStore {
public:
    explicit ThreatStore(double alpha = 0.7) : alpha_(alpha) {
        if (!(alpha > 0.0 && alpha < 1.0)) throw Error("threat decay alpha must be in (0, 1)");
    }

    double alpha() const { return alpha_; }

    double get(std::string_view agent) const {
        auto it = scores_.find(agent);
        return it == scores_.end() ? 0.0 : it->second;
    }

    void set(const std::string& agent, double tau) {
        if (tau < 0.0 || tau > 1.0) throw Error("threat score out of [0, 1]");
        scores_[agent] = tau;
    }

    const std::map<std::string, double, std::less<>>& scores() const { return scores_; }

private:
    double alpha_;
    std::map<std::string, double, std::less<>> scores_;
};

// tau' = alpha * tau + (1 - alpha) * risk
inline double update_threat(double tau_prev, double risk, double alpha) {
    if (tau_prev < 0.0 || tau_prev > 1.0) throw Error("tau out of [0, 1]");
    if (risk < 0.0 || risk > 1.0) throw Error("risk out of [0, 1]");
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha out of (0, 1)");
    return alpha * tau_prev + (1.0 - alpha) * risk;
}

// Uniform bins over [0, 1]: 0 Trusted, 1 Low, 2 Moderate, 3 High, 4 Critical.
inline int discretize(double tau) {
    if (tau < 0.0 || tau > 1.0) throw Error("threat score out of [0, 1]");
    if (tau < 0.2) return 0;
    if (tau < 0.4) return 1;
    if (tau < 0.6) return 2;
    if (tau < 0.8) return 3;
    return 4;
}

// Fixed indicator blend over the evidence the watcher sees: high-severity
// predicates proven true, rule-relevant predicates proven true, and a prior
// violation by the same agent.
inline double risk(const Interaction& m, const TruthAssignment& gamma,
                   const std::set<std::string>& prev_violations, const CompiledPolicy& policy) {
    double value = 0.0;

    bool severe_evidence = false;
    for (const auto& name : gamma.true_names()) {
        auto idx = gamma.table().index_of(name);
        if (idx && gamma.table().at(*idx).severity_hint >= 3) {
            severe_evidence = true;
            break;
        }
    }
    if (severe_evidence) value += 0.25;

    bool rule_relevant = false;
    for (const auto& rule : applicable_rules(policy, m.kind)) {
        for (const auto& atom : atoms(rule.formula)) {
            if (gamma.holds(atom)) {
                rule_relevant = true;
                break;
            }
        }
        if (rule_relevant) break;
    }
    if (rule_relevant) value += 0.25;

    if (!prev_violations.empty()) value += 0.5;

    return std::clamp(value, 0.0, 1.0);
}

} // namespace seqguard
