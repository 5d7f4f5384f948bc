#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqguard/audit.hpp"
#include "seqguard/engine.hpp"
#include "seqguard/errors.hpp"
#include "seqguard/interaction.hpp"

namespace seqguard {

// One labeled interaction. "unsafe" is the positive class (1), "safe" the
// negative class (0); records may be unlabeled. An agent's own refusal to
// act counts as a block when scoring.
struct TraceRecord {
    Interaction interaction;
    std::optional<int> label; // 0 | 1
    bool self_refusal = false;
    std::string category; // optional grouping key for reports
};

// Accepts either a bare interaction snapshot (trace format) or a full audit
// record (audits are themselves replayable traces).
inline TraceRecord parse_trace_record(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("trace record: expected an object");

    TraceRecord rec;
    if (j.contains("interaction")) {
        // audit line: replay its interaction snapshot, ignore the outcome
        rec.interaction = detail::interaction_from_json(j.at("interaction"));
        return rec;
    }

    static const std::set<std::string> known = {"step",  "sender",      "receiver", "kind",
                                                "payload", "tool",      "label",
                                                "self_refusal", "category"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (known.find(it.key()) == known.end())
            throw ValidationError("trace record: unknown key \"" + it.key() + "\"");
    }

    rec.interaction = detail::interaction_from_json(j);
    if (j.contains("label") && !j.at("label").is_null()) {
        if (!j.at("label").is_number_integer())
            throw ValidationError("trace record: label must be 0 or 1");
        int label = j.at("label").get<int>();
        if (label != 0 && label != 1)
            throw ValidationError("trace record: label must be 0 or 1");
        rec.label = label;
    }
    if (j.contains("self_refusal")) {
        if (!j.at("self_refusal").is_boolean())
            throw ValidationError("trace record: self_refusal must be a boolean");
        rec.self_refusal = j.at("self_refusal").get<bool>();
    }
    if (j.contains("category")) {
        if (!j.at("category").is_string())
            throw ValidationError("trace record: category must be a string");
        rec.category = j.at("category").get<std::string>();
    }
    return rec;
}

inline nlohmann::ordered_json trace_record_to_json(const TraceRecord& rec) {
    nlohmann::ordered_json j = detail::interaction_to_json(rec.interaction);
    if (rec.label) j["label"] = *rec.label;
    if (rec.self_refusal) j["self_refusal"] = true;
    if (!rec.category.empty()) j["category"] = rec.category;
    return j;
}

// Newline-delimited records; blank lines ignored. Steps must be strictly
// increasing within one file. Malformed records abort with their line
// number.
inline std::vector<TraceRecord> parse_trace(std::istream& in) {
    std::vector<TraceRecord> records;
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::int64_t> last_step;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) throw TraceError("invalid JSON", line_no);
        TraceRecord rec = [&] {
            try {
                return parse_trace_record(j);
            } catch (const ValidationError& e) {
                throw TraceError(e.what(), line_no);
            } catch (const nlohmann::json::exception& e) {
                throw TraceError(e.what(), line_no);
            }
        }();
        if (last_step && rec.interaction.step <= *last_step)
            throw TraceError("steps must be strictly increasing", line_no);
        last_step = rec.interaction.step;
        records.push_back(std::move(rec));
    }
    return records;
}

// Processes each record in order through one engine instance (one episode:
// Gamma and tau carry across records of the same trace, never across
// traces).
inline std::vector<Verdict> replay(const std::vector<TraceRecord>& trace, GuardEngine& engine) {
    std::vector<Verdict> verdicts;
    verdicts.reserve(trace.size());
    for (const auto& rec : trace) verdicts.push_back(engine.process(rec.interaction));
    return verdicts;
}

} // namespace seqguard
