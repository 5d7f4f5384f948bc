#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "seqguard/adapters.hpp"
#include "seqguard/errors.hpp"
#include "seqguard/interaction.hpp"
#include "seqguard/verifier.hpp"

namespace seqguard {

// Severity threshold scaled by the threat level; violations at or above the
// effective threshold become deny candidates.
struct AdjudicationConfig {
    double theta0 = 2.5;        // base threshold on the 1..4 severity scale
    double beta = 0.5;          // threat scaling
    double ambiguity_band = 0.5; // |sigma - theta| <= band escalates to tier 2

    double threshold(int level) const { return theta0 - beta * level; }

    void validate() const {
        if (threshold(4) < 0.0)
            throw ConfigError("adjudication threshold must stay non-negative at level 4");
        if (ambiguity_band < 0.0) throw ConfigError("ambiguity band must be non-negative");
    }
};

struct Verdict {
    Decision decision = Decision::allow;
    std::string rationale; // T_t, returned to the sending agent as feedback
    int tier = 1;
    std::vector<std::string> violated_ids;
};

// Stable wording so audit streams diff cleanly.
inline std::string render_rationale(Decision decision, const std::vector<Violation>& violations,
                                    const std::string& note = "") {
    std::string text = "Decision: ";
    text += to_string(decision);
    text += ". ";
    if (violations.empty()) {
        text += "Interaction complies with all registered policies.";
    } else {
        text += decision == Decision::deny ? "Violated " : "Noted ";
        for (std::size_t i = 0; i < violations.size(); ++i) {
            const auto& v = violations[i];
            if (i > 0) text += "; ";
            text += "rule " + v.rule_id + " (\"" + v.source_text + "\") with witness {";
            for (std::size_t w = 0; w < v.witness.size(); ++w) {
                if (w > 0) text += ", ";
                text += v.witness[w];
            }
            text += "}";
        }
        text += ".";
        if (decision == Decision::allow)
            text += " Ruled below the adjudication threshold or contextually overridden.";
    }
    if (!note.empty()) text += " [" + note + "]";
    return text;
}

inline std::string render_fail_closed(const std::string& reason) {
    return "Decision: deny (fail-closed): " + reason + ".";
}

// Two-tier risk-adaptive adjudication. Tier 1 reviews the threshold
// candidate; denials and ambiguity-band cases escalate to tier 2, whose
// ruling is final. Adapter outages keep the safe side: a failed escalation
// of a deny stays denied, a failed escalation of an allow keeps tier 1's
// allow.
inline Verdict adjudicate(const Interaction& m, const VerifierReport& report, int threat_level,
                          const AdjudicationConfig& cfg, AdjudicatorAdapter& tier1,
                          AdjudicatorAdapter& tier2) {
    Verdict verdict;
    for (const auto& v : report.violations) verdict.violated_ids.push_back(v.rule_id);

    if (report.violations.empty()) {
        verdict.decision = Decision::allow;
        verdict.tier = 1;
        verdict.rationale = render_rationale(Decision::allow, report.violations);
        return verdict;
    }

    int max_severity = 0;
    for (const auto& v : report.violations) max_severity = std::max(max_severity, v.severity);
    double sigma = static_cast<double>(max_severity);
    double theta = cfg.threshold(threat_level);
    Decision candidate = sigma >= theta ? Decision::deny : Decision::allow;
    bool ambiguous = std::abs(sigma - theta) <= cfg.ambiguity_band;

    AdjudicationContext ctx{m, report, threat_level, candidate};
    Ruling first;
    try {
        first = tier1.adjudicate(ctx);
    } catch (const std::exception&) {
        first = Ruling{candidate, "tier-1 adapter unavailable; threshold ruling applied"};
    }

    Ruling final_ruling = first;
    int tier = 1;
    if (first.decision == Decision::deny || ambiguous) {
        ctx.candidate = first.decision;
        try {
            final_ruling = tier2.adjudicate(ctx);
            tier = 2;
        } catch (const std::exception&) {
            if (first.decision == Decision::deny) {
                final_ruling = Ruling{Decision::deny, "escalation unavailable"};
                tier = 2;
            } else {
                final_ruling = first; // keep tier-1 allow
                tier = 1;
            }
        }
    }

    verdict.decision = final_ruling.decision;
    verdict.tier = tier;
    verdict.rationale = render_rationale(final_ruling.decision, report.violations,
                                         final_ruling.reason);
    return verdict;
}

} // namespace seqguard
