#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "seqguard/adapters.hpp"
#include "seqguard/audit.hpp"
#include "seqguard/compiler.hpp"
#include "seqguard/errors.hpp"
#include "seqguard/interaction.hpp"
#include "seqguard/referee.hpp"
#include "seqguard/threat.hpp"
#include "seqguard/tracker.hpp"
#include "seqguard/verifier.hpp"

namespace seqguard {

struct GuardConfig {
    int k_base = 5;
    double alpha = 0.7;                // threat decay
    double expansion_threshold = 0.6;  // verifier confidence below this requests expansion
    AdjudicationConfig adjudication;
    bool fail_open = false;     // on internal failure, allow instead of deny
    bool record_timings = false; // audit duration_us; off keeps streams deterministic
};

struct AdapterSet {
    std::unique_ptr<EvaluatorAdapter> evaluator;
    std::unique_ptr<ThreatAdapter> threat; // optional level override
    std::unique_ptr<AdjudicatorAdapter> tier1;
    std::unique_ptr<AdjudicatorAdapter> tier2;
};

inline AdapterSet default_adapters() {
    AdapterSet set;
    set.evaluator = std::make_unique<KeywordEvaluator>();
    set.tier1 = std::make_unique<ThresholdAdjudicator>();
    set.tier2 = std::make_unique<ThresholdAdjudicator>();
    return set;
}

// Theta: the only mutable runtime state. Mutates exclusively through
// GuardEngine::process, one step at a time.
struct GuardState {
    TruthAssignment gamma;
    ThreatStore threats;
    std::int64_t step = 0;
    std::map<std::string, std::set<std::string>> last_violations; // per sender

    explicit GuardState(std::shared_ptr<const PredicateTable> table, double alpha)
        : gamma(std::move(table)), threats(alpha) {}
};

// Runs the per-interaction pipeline: candidate set, selective state update,
// threat update, rule selection, sequent verification (with at most one
// state expansion), hierarchical adjudication, audit append.
class GuardEngine {
public:
    GuardEngine(std::shared_ptr<const CompiledPolicy> policy, GuardConfig config,
                AdapterSet adapters, AuditSink* sink = nullptr)
        : policy_(std::move(policy)),
          config_(config),
          adapters_(std::move(adapters)),
          sink_(sink),
          state_(checked(policy_).table_ptr(), config.alpha) {
        if (!adapters_.evaluator || !adapters_.tier1 || !adapters_.tier2)
            throw Error("GuardEngine requires evaluator and both adjudicator tiers");
        config_.adjudication.validate();
        policy_->verify_integrity();
    }

    const GuardState& state() const { return state_; }
    const GuardConfig& config() const { return config_; }
    const CompiledPolicy& policy() const { return *policy_; }

    // Synchronous interception entry point: submit one interaction, receive
    // the verdict. Any stage failure fails closed (deny) unless fail_open
    // is configured.
    Verdict process(const Interaction& input) {
        auto start = std::chrono::steady_clock::now();

        Interaction m = input;
        m.step = state_.step + 1;

        AuditRecord rec;
        rec.step = m.step;
        rec.interaction = m;

        TruthAssignment gamma_before = state_.gamma;
        double tau_before = state_.threats.get(m.sender);
        rec.threat = ThreatSnapshot{m.sender, tau_before, tau_before, discretize(tau_before),
                                    0.0};

        std::optional<VerifierReport> report;
        Verdict verdict;
        std::string stage = "intake";
        try {
            validate_interaction(m);

            stage = "candidate-selection";
            int budget = effective_budget(config_.k_base, discretize(tau_before));
            CandidateSet candidates = candidate_set(m, *policy_, budget);
            if (candidates.unknown_tool)
                rec.warnings.push_back("unknown tool \"" + m.tool->name +
                                       "\": no dependency-graph entry; retrieval-only "
                                       "candidates");
            rec.candidates = candidates;

            stage = "state-update";
            auto [gamma, evals] = update_state(state_.gamma, candidates, m,
                                               *adapters_.evaluator);
            rec.evaluator_invocations += static_cast<int>(candidates.combined.size());
            state_.gamma = std::move(gamma);

            stage = "threat-update";
            double step_risk =
                risk(m, state_.gamma, state_.last_violations[m.sender], *policy_);
            double tau_after = update_threat(tau_before, step_risk, config_.alpha);
            state_.threats.set(m.sender, tau_after);
            rec.threat =
                ThreatSnapshot{m.sender, tau_before, tau_after, discretize(tau_after),
                               step_risk};
            if (adapters_.threat) {
                int level = adapters_.threat->assess(m, rec.threat.level);
                if (level < 0 || level > 4)
                    throw AdapterError("threat adapter returned level outside 0..4");
                rec.threat.level = level;
            }

            stage = "verification";
            report = verify(state_.gamma, evals, m.kind, *policy_, false,
                            config_.expansion_threshold);
            if (report->expansion_requested) {
                // one bounded retry with a doubled budget; keeps the
                // per-step evaluator-call bound finite
                CandidateSet wider = candidate_set(m, *policy_, 2 * budget);
                rec.expansion = wider;
                auto [gamma2, evals2] = update_state(state_.gamma, wider, m,
                                                     *adapters_.evaluator);
                rec.evaluator_invocations += static_cast<int>(wider.combined.size());
                state_.gamma = std::move(gamma2);
                for (const auto& [name, eval] : evals2) evals[name] = eval;
                report = verify(state_.gamma, evals, m.kind, *policy_, true,
                                config_.expansion_threshold);
            }
            rec.report = *report;

            stage = "adjudication";
            verdict = adjudicate(m, *report, rec.threat.level, config_.adjudication,
                                 *adapters_.tier1, *adapters_.tier2);
        } catch (const std::exception& e) {
            std::string reason = stage == "state-update"
                                     ? "state unavailable (" + std::string(e.what()) + ")"
                                     : stage + " failed: " + e.what();
            rec.failure = reason;
            if (config_.fail_open) {
                verdict = Verdict{Decision::allow,
                                  "Decision: allow (fail-open override; " + reason + ").", 1,
                                  {}};
            } else {
                verdict = Verdict{Decision::deny, render_fail_closed(reason), 1, {}};
            }
        }

        if (report) {
            std::set<std::string> violated;
            for (const auto& v : report->violations) violated.insert(v.rule_id);
            state_.last_violations[m.sender] = std::move(violated);
        }
        state_.step = m.step;

        for (const auto& name : state_.gamma.true_names()) {
            if (!gamma_before.holds(name)) rec.gamma_set.push_back(name);
        }
        for (const auto& name : gamma_before.true_names()) {
            if (!state_.gamma.holds(name)) rec.gamma_cleared.push_back(name);
        }
        rec.verdict = verdict;
        if (config_.record_timings) {
            auto elapsed = std::chrono::steady_clock::now() - start;
            rec.duration_us =
                std::chrono::duration_cast<std::chrono::microseconds>(elapsed).count();
        }
        if (sink_) sink_->append(rec);
        return verdict;
    }

private:
    static const CompiledPolicy& checked(const std::shared_ptr<const CompiledPolicy>& p) {
        if (!p) throw Error("GuardEngine requires a compiled policy");
        return *p;
    }

    std::shared_ptr<const CompiledPolicy> policy_;
    GuardConfig config_;
    AdapterSet adapters_;
    AuditSink* sink_;
    GuardState state_;
};

} // namespace seqguard
