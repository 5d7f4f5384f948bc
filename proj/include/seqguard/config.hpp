#pragma once

#include <cstdlib>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "seqguard/detail/json_strict.hpp"
#include "seqguard/embedding.hpp"
#include "seqguard/engine.hpp"
#include "seqguard/errors.hpp"
#include "seqguard/http_adapters.hpp"

namespace seqguard {

struct AdapterSpec {
    std::string backend;
    std::string endpoint;
    std::string model; // forwarded to http endpoints for routing
    int timeout_ms = 30000;
    std::set<std::string> override_tools; // contextual adjudicator stub
    std::size_t dimension = 256;          // token-hash embedder
    std::string prompt_file;              // optional fixed-prompt override

    AdapterSpec() = default;
    explicit AdapterSpec(std::string default_backend) : backend(std::move(default_backend)) {}
};

// Everything the harness needs to assemble an engine: tunables plus the
// backend selection per adapter role.
struct HarnessConfig {
    GuardConfig guard;
    AdapterSpec evaluator{"keyword"};
    AdapterSpec threat{"formula"};
    AdapterSpec tier1{"threshold"};
    AdapterSpec tier2{"threshold"};
    AdapterSpec embedder{"token_hash"};
};

namespace detail {

inline AdapterSpec parse_adapter_spec(const nlohmann::json& j, const std::string& where) {
    using E = ConfigError;
    require_keys<E>(j, where, {"backend"},
                    {"endpoint", "model", "timeout_ms", "override_tools", "dimension",
                     "prompt_file"});
    AdapterSpec spec;
    spec.backend = get_string<E>(j, "backend", where);
    if (j.contains("endpoint")) spec.endpoint = get_string<E>(j, "endpoint", where);
    if (j.contains("model")) spec.model = get_string<E>(j, "model", where);
    if (j.contains("timeout_ms"))
        spec.timeout_ms = static_cast<int>(get_int<E>(j, "timeout_ms", where));
    if (j.contains("override_tools")) {
        for (const auto& t : get_array<E>(j, "override_tools", where)) {
            if (!t.is_string()) fail<E>(where + ".override_tools", "expected strings");
            spec.override_tools.insert(t.get<std::string>());
        }
    }
    if (j.contains("dimension")) {
        long long d = get_int<E>(j, "dimension", where);
        if (d < 1) fail<E>(where + ".dimension", "must be >= 1");
        spec.dimension = static_cast<std::size_t>(d);
    }
    if (j.contains("prompt_file")) spec.prompt_file = get_string<E>(j, "prompt_file", where);
    return spec;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file \"" + path + "\"");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace detail

inline HarnessConfig parse_harness_config(const nlohmann::json& j) {
    using E = ConfigError;
    detail::require_keys<E>(j, "config", {},
                            {"k_base", "alpha", "theta0", "beta", "ambiguity_band",
                             "expansion_threshold", "fail_open", "record_timings", "evaluator",
                             "threat", "adjudicator_tier1", "adjudicator_tier2", "embedder"});
    HarnessConfig cfg;
    if (j.contains("k_base")) {
        cfg.guard.k_base = static_cast<int>(detail::get_int<E>(j, "k_base", "config"));
        if (cfg.guard.k_base < 1) throw ConfigError("config.k_base: must be >= 1");
    }
    if (j.contains("alpha")) {
        cfg.guard.alpha = detail::get_number<E>(j, "alpha", "config");
        if (!(cfg.guard.alpha > 0.0 && cfg.guard.alpha < 1.0))
            throw ConfigError("config.alpha: must be in (0, 1)");
    }
    if (j.contains("theta0"))
        cfg.guard.adjudication.theta0 = detail::get_number<E>(j, "theta0", "config");
    if (j.contains("beta"))
        cfg.guard.adjudication.beta = detail::get_number<E>(j, "beta", "config");
    if (j.contains("ambiguity_band"))
        cfg.guard.adjudication.ambiguity_band =
            detail::get_number<E>(j, "ambiguity_band", "config");
    if (j.contains("expansion_threshold"))
        cfg.guard.expansion_threshold = detail::get_number<E>(j, "expansion_threshold", "config");
    if (j.contains("fail_open"))
        cfg.guard.fail_open = detail::get_bool<E>(j, "fail_open", "config");
    if (j.contains("record_timings"))
        cfg.guard.record_timings = detail::get_bool<E>(j, "record_timings", "config");
    cfg.guard.adjudication.validate();

    if (j.contains("evaluator"))
        cfg.evaluator = detail::parse_adapter_spec(j.at("evaluator"), "config.evaluator");
    if (j.contains("threat"))
        cfg.threat = detail::parse_adapter_spec(j.at("threat"), "config.threat");
    if (j.contains("adjudicator_tier1"))
        cfg.tier1 = detail::parse_adapter_spec(j.at("adjudicator_tier1"),
                                               "config.adjudicator_tier1");
    if (j.contains("adjudicator_tier2"))
        cfg.tier2 = detail::parse_adapter_spec(j.at("adjudicator_tier2"),
                                               "config.adjudicator_tier2");
    if (j.contains("embedder"))
        cfg.embedder = detail::parse_adapter_spec(j.at("embedder"), "config.embedder");
    return cfg;
}

inline HarnessConfig load_harness_config(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config: invalid JSON");
    return parse_harness_config(j);
}

inline HarnessConfig load_harness_config_file(const std::string& path) {
    return load_harness_config(detail::read_file(path));
}

// Environment variables override configured endpoints and force the http
// backend for the corresponding role.
inline void apply_env_overrides(HarnessConfig& cfg) {
    auto apply = [](AdapterSpec& spec, const char* var) {
        if (const char* value = std::getenv(var); value && *value) {
            spec.backend = "http";
            spec.endpoint = value;
        }
    };
    apply(cfg.evaluator, "GUARD_EVAL_ENDPOINT");
    apply(cfg.threat, "GUARD_THREAT_ENDPOINT");
    apply(cfg.tier1, "GUARD_ADJ_ENDPOINT");
    apply(cfg.tier2, "GUARD_ADJ_ENDPOINT");
    apply(cfg.embedder, "GUARD_EMBED_ENDPOINT");
}

namespace detail {

inline std::string prompt_or_default(const AdapterSpec& spec, std::string fallback) {
    return spec.prompt_file.empty() ? fallback : read_file(spec.prompt_file);
}

} // namespace detail

inline std::shared_ptr<const Embedder> make_embedder(const HarnessConfig& cfg) {
    const AdapterSpec& spec = cfg.embedder;
    if (spec.backend == "token_hash")
        return std::make_shared<const TokenHashEmbedder>(spec.dimension);
    if (spec.backend == "http")
        return std::make_shared<const HttpEmbedder>(
            parse_endpoint(spec.endpoint, spec.timeout_ms), spec.model);
    throw ConfigError("unknown embedder backend \"" + spec.backend + "\"");
}

inline AdapterSet make_adapters(const HarnessConfig& cfg) {
    AdapterSet set;

    if (cfg.evaluator.backend == "keyword") {
        set.evaluator = std::make_unique<KeywordEvaluator>();
    } else if (cfg.evaluator.backend == "http") {
        set.evaluator = std::make_unique<HttpEvaluator>(
            parse_endpoint(cfg.evaluator.endpoint, cfg.evaluator.timeout_ms),
            detail::prompt_or_default(cfg.evaluator, HttpEvaluator::default_prompt()),
            cfg.evaluator.model);
    } else {
        throw ConfigError("unknown evaluator backend \"" + cfg.evaluator.backend + "\"");
    }

    if (cfg.threat.backend == "formula") {
        set.threat = nullptr; // discretized continuous score only
    } else if (cfg.threat.backend == "http") {
        set.threat = std::make_unique<HttpThreatAdapter>(
            parse_endpoint(cfg.threat.endpoint, cfg.threat.timeout_ms),
            detail::prompt_or_default(cfg.threat, HttpThreatAdapter::default_prompt()),
            cfg.threat.model);
    } else {
        throw ConfigError("unknown threat backend \"" + cfg.threat.backend + "\"");
    }

    auto make_adjudicator = [](const AdapterSpec& spec,
                               const std::string& where) -> std::unique_ptr<AdjudicatorAdapter> {
        if (spec.backend == "threshold") return std::make_unique<ThresholdAdjudicator>();
        if (spec.backend == "contextual")
            return std::make_unique<ContextualOverrideAdjudicator>(spec.override_tools);
        if (spec.backend == "http")
            return std::make_unique<HttpAdjudicator>(
                parse_endpoint(spec.endpoint, spec.timeout_ms),
                detail::prompt_or_default(spec, HttpAdjudicator::default_prompt()), spec.model);
        throw ConfigError("unknown adjudicator backend \"" + spec.backend + "\" for " + where);
    };
    set.tier1 = make_adjudicator(cfg.tier1, "tier 1");
    set.tier2 = make_adjudicator(cfg.tier2, "tier 2");

    return set;
}

} // namespace seqguard
