#pragma once

#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqguard/adapters.hpp"
#include "seqguard/detail/json_strict.hpp"
#include "seqguard/errors.hpp"
#include "seqguard/interaction.hpp"
#include "seqguard/referee.hpp"
#include "seqguard/tracker.hpp"
#include "seqguard/verifier.hpp"

namespace seqguard {

struct ThreatSnapshot {
    std::string agent;
    double tau_before = 0.0;
    double tau_after = 0.0;
    int level = 0; // the level the referee saw (post-update, post-override)
    double risk = 0.0;
};

// One append-only record per processed step. Serialized with a stable key
// order; with deterministic adapters two identical runs produce
// byte-identical streams (wall-clock duration is recorded only when timing
// capture is enabled).
struct AuditRecord {
    std::int64_t step = 0;
    Interaction interaction;
    CandidateSet candidates;
    std::optional<CandidateSet> expansion;
    std::vector<std::string> gamma_set;     // newly true this step
    std::vector<std::string> gamma_cleared; // newly false this step
    ThreatSnapshot threat;
    VerifierReport report;
    Verdict verdict;
    int evaluator_invocations = 0;
    std::vector<std::string> warnings;
    std::optional<std::string> failure; // stage + reason for fail-closed steps
    std::optional<std::int64_t> duration_us;
};

namespace detail {

inline nlohmann::ordered_json interaction_to_json(const Interaction& m) {
    nlohmann::ordered_json j;
    j["step"] = m.step;
    j["sender"] = m.sender;
    j["receiver"] = m.receiver;
    j["kind"] = std::string(to_string(m.kind));
    j["payload"] = m.payload;
    if (m.tool) {
        nlohmann::ordered_json tool;
        tool["name"] = m.tool->name;
        tool["arguments"] = nlohmann::ordered_json::object();
        for (const auto& [key, value] : m.tool->arguments) tool["arguments"][key] = value;
        j["tool"] = std::move(tool);
    } else {
        j["tool"] = nullptr;
    }
    return j;
}

inline Interaction interaction_from_json(const nlohmann::json& j) {
    Interaction m;
    m.step = j.at("step").get<std::int64_t>();
    m.sender = j.at("sender").get<std::string>();
    m.receiver = j.at("receiver").get<std::string>();
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "message") {
        m.kind = InteractionKind::message;
    } else if (kind == "action") {
        m.kind = InteractionKind::action;
    } else {
        throw ValidationError("interaction.kind must be \"message\" or \"action\"");
    }
    m.payload = j.at("payload").get<std::string>();
    if (j.contains("tool") && !j.at("tool").is_null()) {
        const auto& tool = j.at("tool");
        ToolCall call;
        call.name = tool.at("name").get<std::string>();
        if (tool.contains("arguments")) {
            for (auto it = tool.at("arguments").begin(); it != tool.at("arguments").end(); ++it) {
                if (!it.value().is_string())
                    throw ValidationError("tool argument values must be strings");
                call.arguments[it.key()] = it.value().get<std::string>();
            }
        }
        m.tool = std::move(call);
    }
    return m;
}

inline nlohmann::ordered_json candidates_to_json(const CandidateSet& c) {
    nlohmann::ordered_json j;
    j["retrieved"] = c.retrieved;
    j["must_check"] = c.must_check;
    j["combined"] = c.combined;
    return j;
}

inline nlohmann::ordered_json report_to_json(const VerifierReport& r) {
    nlohmann::ordered_json j;
    j["violations"] = nlohmann::ordered_json::array();
    for (const auto& v : r.violations) {
        nlohmann::ordered_json jv;
        jv["rule"] = v.rule_id;
        jv["severity"] = v.severity;
        jv["witness"] = v.witness;
        jv["obligation"] = to_text(v.obligation.formula);
        jv["source_text"] = v.source_text;
        j["violations"].push_back(std::move(jv));
    }
    j["confidence"] = r.confidence;
    j["expansion_requested"] = r.expansion_requested;
    return j;
}

} // namespace detail

inline nlohmann::ordered_json audit_to_json(const AuditRecord& rec) {
    nlohmann::ordered_json j;
    j["step"] = rec.step;
    j["interaction"] = detail::interaction_to_json(rec.interaction);
    j["candidates"] = detail::candidates_to_json(rec.candidates);
    j["expansion"] =
        rec.expansion ? detail::candidates_to_json(*rec.expansion) : nlohmann::ordered_json();
    j["gamma_set"] = rec.gamma_set;
    j["gamma_cleared"] = rec.gamma_cleared;
    nlohmann::ordered_json threat;
    threat["agent"] = rec.threat.agent;
    threat["tau_before"] = rec.threat.tau_before;
    threat["tau_after"] = rec.threat.tau_after;
    threat["level"] = rec.threat.level;
    threat["risk"] = rec.threat.risk;
    j["threat"] = std::move(threat);
    j["report"] = detail::report_to_json(rec.report);
    nlohmann::ordered_json verdict;
    verdict["decision"] = std::string(to_string(rec.verdict.decision));
    verdict["tier"] = rec.verdict.tier;
    verdict["violated"] = rec.verdict.violated_ids;
    verdict["rationale"] = rec.verdict.rationale;
    j["verdict"] = std::move(verdict);
    j["evaluator_invocations"] = rec.evaluator_invocations;
    j["warnings"] = rec.warnings;
    j["failure"] = rec.failure ? nlohmann::ordered_json(*rec.failure) : nlohmann::ordered_json();
    if (rec.duration_us) j["duration_us"] = *rec.duration_us;
    return j;
}

inline std::string serialize_audit(const AuditRecord& rec) {
    return audit_to_json(rec).dump();
}

inline AuditRecord parse_audit_record(const nlohmann::json& j) {
    AuditRecord rec;
    rec.step = j.at("step").get<std::int64_t>();
    rec.interaction = detail::interaction_from_json(j.at("interaction"));
    auto parse_candidates = [](const nlohmann::json& cj) {
        CandidateSet c;
        c.retrieved = cj.at("retrieved").get<std::vector<std::string>>();
        c.must_check = cj.at("must_check").get<std::vector<std::string>>();
        c.combined = cj.at("combined").get<std::vector<std::string>>();
        return c;
    };
    rec.candidates = parse_candidates(j.at("candidates"));
    if (j.contains("expansion") && !j.at("expansion").is_null())
        rec.expansion = parse_candidates(j.at("expansion"));
    rec.gamma_set = j.at("gamma_set").get<std::vector<std::string>>();
    rec.gamma_cleared = j.at("gamma_cleared").get<std::vector<std::string>>();
    const auto& threat = j.at("threat");
    rec.threat.agent = threat.at("agent").get<std::string>();
    rec.threat.tau_before = threat.at("tau_before").get<double>();
    rec.threat.tau_after = threat.at("tau_after").get<double>();
    rec.threat.level = threat.at("level").get<int>();
    rec.threat.risk = threat.at("risk").get<double>();
    const auto& report = j.at("report");
    for (const auto& jv : report.at("violations")) {
        Violation v{jv.at("rule").get<std::string>(), jv.at("severity").get<int>(),
                    jv.at("witness").get<std::vector<std::string>>(),
                    Obligation{parse_formula(jv.at("obligation").get<std::string>())},
                    jv.at("source_text").get<std::string>()};
        rec.report.violations.push_back(std::move(v));
    }
    rec.report.confidence = report.at("confidence").get<double>();
    rec.report.expansion_requested = report.at("expansion_requested").get<bool>();
    const auto& verdict = j.at("verdict");
    rec.verdict.decision =
        verdict.at("decision").get<std::string>() == "deny" ? Decision::deny : Decision::allow;
    rec.verdict.tier = verdict.at("tier").get<int>();
    rec.verdict.violated_ids = verdict.at("violated").get<std::vector<std::string>>();
    rec.verdict.rationale = verdict.at("rationale").get<std::string>();
    rec.evaluator_invocations = j.at("evaluator_invocations").get<int>();
    rec.warnings = j.at("warnings").get<std::vector<std::string>>();
    if (j.contains("failure") && !j.at("failure").is_null())
        rec.failure = j.at("failure").get<std::string>();
    if (j.contains("duration_us")) rec.duration_us = j.at("duration_us").get<std::int64_t>();
    return rec;
}

class AuditSink {
public:
    virtual ~AuditSink() = default;
    virtual void append(const AuditRecord& record) = 0;
};

// Newline-delimited records, flushed per append.
class JsonlAuditSink final : public AuditSink {
public:
    explicit JsonlAuditSink(std::ostream& out) : out_(&out) {}

    explicit JsonlAuditSink(const std::string& path) : file_(path, std::ios::trunc) {
        if (!file_) throw Error("cannot open audit file \"" + path + "\"");
        out_ = &file_;
    }

    void append(const AuditRecord& record) override {
        (*out_) << serialize_audit(record) << '\n';
        out_->flush();
        if (!*out_) throw Error("audit sink write failed");
    }

private:
    std::ofstream file_;
    std::ostream* out_ = nullptr;
};

class MemoryAuditSink final : public AuditSink {
public:
    void append(const AuditRecord& record) override { records_.push_back(record); }
    const std::vector<AuditRecord>& records() const { return records_; }

private:
    std::vector<AuditRecord> records_;
};

} // namespace seqguard
