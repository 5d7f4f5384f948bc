// Command-line surface: compile policy books, replay traces through the
// guard, score decisions against labels, and report metrics.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seqguard/seqguard.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw seqguard::Error("cannot open file \"" + path + "\"");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<seqguard::TraceRecord> read_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw seqguard::Error("cannot open trace \"" + path + "\"");
    return seqguard::parse_trace(in);
}

nlohmann::ordered_json decision_line(std::int64_t step, const seqguard::Verdict& verdict) {
    nlohmann::ordered_json j;
    j["step"] = step;
    j["decision"] = std::string(seqguard::to_string(verdict.decision));
    j["tier"] = verdict.tier;
    j["violated"] = verdict.violated_ids;
    j["rationale"] = verdict.rationale;
    return j;
}

std::vector<seqguard::Decision> read_decisions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw seqguard::Error("cannot open decisions \"" + path + "\"");
    std::vector<seqguard::Decision> decisions;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) throw seqguard::TraceError("invalid JSON", line_no);
        if (!j.is_object() || !j.contains("decision") || !j.at("decision").is_string())
            throw seqguard::TraceError("missing \"decision\"", line_no);
        std::string d = j.at("decision").get<std::string>();
        if (d == "allow") {
            decisions.push_back(seqguard::Decision::allow);
        } else if (d == "deny") {
            decisions.push_back(seqguard::Decision::deny);
        } else {
            throw seqguard::TraceError("decision must be \"allow\" or \"deny\"", line_no);
        }
    }
    return decisions;
}

seqguard::HarnessConfig load_config(const std::string& path) {
    seqguard::HarnessConfig cfg;
    if (!path.empty()) cfg = seqguard::load_harness_config_file(path);
    seqguard::apply_env_overrides(cfg);
    return cfg;
}

void print_metric(std::ostream& out, const char* name, double value, bool defined) {
    out << "  " << std::left << std::setw(10) << name;
    if (defined) {
        out << std::fixed << std::setprecision(4) << value << "\n";
    } else {
        out << "undefined\n";
    }
}

void print_report(std::ostream& out, const std::string& title,
                  const seqguard::MetricsReport& m) {
    out << title << " (TP=" << m.tp << " FP=" << m.fp << " TN=" << m.tn << " FN=" << m.fn
        << ")\n";
    print_metric(out, "accuracy", m.accuracy, m.accuracy_defined);
    print_metric(out, "precision", m.precision, m.precision_defined);
    print_metric(out, "recall", m.recall, m.recall_defined);
    print_metric(out, "fpr", m.fpr, m.fpr_defined);
}

int run_compile(const std::string& book_path, const std::string& out_path) {
    seqguard::CompiledPolicy policy = seqguard::compile_text(read_file(book_path));
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw seqguard::Error("cannot write \"" + out_path + "\"");
    out << seqguard::serialize_compiled(policy);
    std::cerr << "compiled " << policy.predicates().size() << " predicates, "
              << policy.rule_count() << " rules (digest " << policy.digest().substr(0, 12)
              << "...)\n";
    return 0;
}

int run_replay(const std::string& compiled_path, const std::string& trace_path,
               const std::string& config_path, const std::string& audit_path, bool fail_open) {
    seqguard::HarnessConfig cfg = load_config(config_path);
    if (fail_open) cfg.guard.fail_open = true;
    auto embedder = seqguard::make_embedder(cfg);
    auto policy = std::make_shared<const seqguard::CompiledPolicy>(
        seqguard::load_compiled(read_file(compiled_path), embedder));

    std::unique_ptr<seqguard::JsonlAuditSink> sink;
    if (!audit_path.empty()) sink = std::make_unique<seqguard::JsonlAuditSink>(audit_path);

    seqguard::GuardEngine engine(policy, cfg.guard, seqguard::make_adapters(cfg), sink.get());
    std::vector<seqguard::TraceRecord> trace = read_trace(trace_path);
    for (const auto& rec : trace) {
        seqguard::Verdict verdict = engine.process(rec.interaction);
        std::cout << decision_line(engine.state().step, verdict).dump() << "\n";
    }
    return 0;
}

int run_score(const std::string& decisions_path, const std::string& trace_path) {
    auto decisions = read_decisions(decisions_path);
    auto trace = read_trace(trace_path);
    seqguard::MetricsReport m = seqguard::score(decisions, trace);
    std::cout << seqguard::metrics_to_json(m).dump(2) << "\n";
    return 0;
}

int run_report(const std::string& decisions_path, const std::string& trace_path,
               bool by_category) {
    auto decisions = read_decisions(decisions_path);
    auto trace = read_trace(trace_path);
    print_report(std::cout, "overall", seqguard::score(decisions, trace));
    if (by_category) {
        for (const auto& [category, m] : seqguard::score_by_category(decisions, trace)) {
            std::cout << "\n";
            print_report(std::cout, category, m);
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"runtime safety guard for multi-agent interactions"};
    app.require_subcommand(1);

    std::string book_path, out_path;
    auto* compile_cmd = app.add_subcommand("compile", "validate and compile a policy book");
    compile_cmd->add_option("book", book_path, "policy book JSON file")->required();
    compile_cmd->add_option("-o,--output", out_path, "compiled policy output")->required();

    std::string compiled_path, trace_path, config_path, audit_path;
    bool fail_open = false;
    auto* replay_cmd =
        app.add_subcommand("replay", "replay a trace through the guard, one decision per line");
    replay_cmd->add_option("compiled", compiled_path, "compiled policy file")->required();
    replay_cmd->add_option("trace", trace_path, "trace file (JSONL)")->required();
    replay_cmd->add_option("--adapters", config_path, "adapter/engine config file");
    replay_cmd->add_option("--audit", audit_path, "write audit records to this file");
    replay_cmd->add_flag("--fail-open", fail_open,
                         "allow instead of deny on internal guard failures");

    std::string decisions_path, score_trace_path;
    auto* score_cmd = app.add_subcommand("score", "score decisions against trace labels");
    score_cmd->add_option("decisions", decisions_path, "decision stream (JSONL)")->required();
    score_cmd->add_option("trace", score_trace_path, "labeled trace file")->required();

    std::string report_decisions, report_trace;
    bool by_category = false;
    auto* report_cmd = app.add_subcommand("report", "tabular metrics report");
    report_cmd->add_option("decisions", report_decisions, "decision stream (JSONL)")->required();
    report_cmd->add_option("trace", report_trace, "labeled trace file")->required();
    report_cmd->add_flag("--by-category", by_category, "break metrics down by trace category");

    CLI11_PARSE(app, argc, argv);

    try {
        if (compile_cmd->parsed()) return run_compile(book_path, out_path);
        if (replay_cmd->parsed()) return run_replay(compiled_path, trace_path, config_path,
                                                    audit_path, fail_open);
        if (score_cmd->parsed()) return run_score(decisions_path, score_trace_path);
        if (report_cmd->parsed()) return run_report(report_decisions, report_trace, by_category);
    } catch (const seqguard::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const seqguard::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const seqguard::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const seqguard::TraceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
