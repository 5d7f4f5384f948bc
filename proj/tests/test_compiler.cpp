#include <catch2/catch.hpp>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "seqguard/compiler.hpp"

using namespace seqguard;

namespace {

std::string fixture(const std::string& name) {
    std::ifstream in(std::string(SEQGUARD_FIXTURE_DIR) + "/" + name, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

TEST_CASE("compiles the running-example book", "[compiler]") {
    CompiledPolicy policy = compile_text(fixture("running_example_book.json"));
    CHECK(policy.predicates().size() == 2);
    CHECK(policy.action_rules().size() == 1);
    CHECK(policy.message_rules().empty());
    CHECK(policy.action_rules()[0].id == "no_sensitive_publish");
    CHECK(policy.dependency_graph().at("publish") ==
          std::set<std::string>{"sensitive_info", "publish_content"});
}

TEST_CASE("empty book is rejected", "[compiler]") {
    CHECK_THROWS_WITH(compile_text(R"({"predicates": [], "rules": [], "tools": []})"),
                      Catch::Contains("no predicates declared"));
}

TEST_CASE("appendix book partitions rules by category", "[compiler]") {
    CompiledPolicy policy = compile_text(fixture("appendix_book.json"));
    CHECK(policy.message_rules().size() == 1);
    CHECK(policy.action_rules().size() == 3);
    CHECK(policy.message_rules().size() + policy.action_rules().size() == policy.rule_count());
    CHECK(policy.dependency_graph().at("ExecuteCode") ==
          std::set<std::string>{"writes_to_log", "contains_env_vars"});
    CHECK(policy.dependency_graph().at("search").empty());
}

TEST_CASE("validation reports structured errors with locations", "[compiler]") {
    auto book = [](const std::string& predicates, const std::string& rules,
                   const std::string& tools) {
        return "{\"predicates\": [" + predicates + "], \"rules\": [" + rules +
               "], \"tools\": [" + tools + "]}";
    };
    const std::string good_pred =
        R"({"name": "a", "description": "d", "keywords": ["k"], "severity_hint": 1})";

    SECTION("duplicate predicate name") {
        std::string dup = good_pred + ", " + good_pred;
        CHECK_THROWS_AS(compile_text(book(dup, "", "")), ValidationError);
    }
    SECTION("bad predicate name") {
        CHECK_THROWS_WITH(
            compile_text(book(
                R"({"name": "BadName", "description": "d", "keywords": ["k"], "severity_hint": 1})",
                "", "")),
            Catch::Contains("predicates[0].name"));
    }
    SECTION("reserved word as predicate name") {
        CHECK_THROWS_WITH(
            compile_text(book(
                R"({"name": "not", "description": "d", "keywords": ["k"], "severity_hint": 1})",
                "", "")),
            Catch::Contains("reserved"));
    }
    SECTION("empty keywords") {
        CHECK_THROWS_WITH(
            compile_text(book(
                R"({"name": "a", "description": "d", "keywords": [], "severity_hint": 1})", "",
                "")),
            Catch::Contains("keywords"));
    }
    SECTION("severity out of range") {
        CHECK_THROWS_WITH(
            compile_text(book(
                R"({"name": "a", "description": "d", "keywords": ["k"], "severity_hint": 5})",
                "", "")),
            Catch::Contains("severity_hint"));
    }
    SECTION("unparsable formula") {
        CHECK_THROWS_WITH(
            compile_text(book(
                good_pred,
                R"({"id": "r", "category": "act", "severity": 1, "formula": "a AND", "source_text": "s"})",
                "")),
            Catch::Contains("rules[0].formula"));
    }
    SECTION("undeclared atom in formula") {
        CHECK_THROWS_WITH(
            compile_text(book(
                good_pred,
                R"({"id": "r", "category": "act", "severity": 1, "formula": "a AND missing", "source_text": "s"})",
                "")),
            Catch::Contains("undeclared predicate"));
    }
    SECTION("duplicate rule id") {
        std::string rule =
            R"({"id": "r", "category": "act", "severity": 1, "formula": "a", "source_text": "s"})";
        CHECK_THROWS_WITH(compile_text(book(good_pred, rule + ", " + rule, "")),
                          Catch::Contains("duplicate rule id"));
    }
    SECTION("bad category") {
        CHECK_THROWS_WITH(
            compile_text(book(
                good_pred,
                R"({"id": "r", "category": "tool", "severity": 1, "formula": "a", "source_text": "s"})",
                "")),
            Catch::Contains("category"));
    }
    SECTION("duplicate tool name") {
        std::string tool = R"({"name": "t", "description": "d", "governs": []})";
        CHECK_THROWS_WITH(compile_text(book(good_pred, "", tool + ", " + tool)),
                          Catch::Contains("duplicate tool name"));
    }
    SECTION("governs referencing unknown rule") {
        CHECK_THROWS_WITH(
            compile_text(book(good_pred, "",
                              R"({"name": "t", "description": "d", "governs": ["ghost"]})")),
            Catch::Contains("unknown rule"));
    }
}

TEST_CASE("strict mode rejects unknown keys", "[compiler]") {
    CHECK_THROWS_WITH(
        compile_text(R"({"predicates": [], "rules": [], "tools": [], "extra": 1})"),
        Catch::Contains("unknown key"));
    CHECK_THROWS_WITH(
        compile_text(
            R"({"predicates": [{"name": "a", "description": "d", "keywords": ["k"], "severity_hint": 1, "color": "red"}], "rules": [], "tools": []})"),
        Catch::Contains("unknown key"));
}

TEST_CASE("compilation is deterministic over identical sources", "[compiler]") {
    std::string source = fixture("appendix_book.json");
    CompiledPolicy a = compile_text(source);
    CompiledPolicy b = compile_text(source);
    CHECK(a.digest() == b.digest());
    CHECK(a.canonical_source() == b.canonical_source());
    // Formatting-only changes keep the digest too (canonicalized source).
    nlohmann::json reformatted = nlohmann::json::parse(source);
    CHECK(compile_text(reformatted.dump(4)).digest() == a.digest());
    // Content changes move it.
    reformatted["rules"][0]["severity"] = 2;
    CHECK(compile_text(reformatted.dump()).digest() != a.digest());
}

TEST_CASE("every governing rule's atoms are in the tool's graph entry", "[compiler]") {
    CompiledPolicy policy = compile_text(fixture("appendix_book.json"));
    const auto& graph = policy.dependency_graph();
    auto check_tool = [&](const std::string& tool, const std::vector<std::string>& rule_ids) {
        for (const auto& id : rule_ids) {
            const Rule* rule = policy.find_rule(id);
            REQUIRE(rule != nullptr);
            for (const auto& atom : atoms(rule->formula))
                CHECK(graph.at(tool).count(atom) == 1);
        }
    };
    check_tool("ExecuteCode", {"action_rule_secrecy"});
    check_tool("delete", {"action_rule_integrity"});
}

TEST_CASE("keyword-overlap fallback binds tools without governs lists", "[compiler]") {
    std::string source = R"json({
      "predicates": [
        {"name": "is_delete", "description": "deletes a file", "keywords": ["delete"], "severity_hint": 2},
        {"name": "target_is_critical", "description": "critical path", "keywords": ["etc"], "severity_hint": 4}
      ],
      "rules": [
        {"id": "no_critical_delete", "category": "act", "severity": 3,
         "formula": "NOT (is_delete AND target_is_critical)",
         "source_text": "Do not delete critical system files"}
      ],
      "tools": [
        {"name": "delete", "description": "Delete a file at a path."},
        {"name": "search", "description": "Look things up on the web."}
      ]
    })json";
    CompiledPolicy policy = compile_text(source);
    CHECK(policy.dependency_graph().at("delete") ==
          std::set<std::string>{"is_delete", "target_is_critical"});
    CHECK(policy.dependency_graph().at("search").empty());
}

TEST_CASE("fallback binding ignores message rules", "[compiler]") {
    std::string source = R"json({
      "predicates": [
        {"name": "spammy", "description": "repeated sends", "keywords": ["spam"], "severity_hint": 2}
      ],
      "rules": [
        {"id": "no_spam_messages", "category": "msg", "severity": 2,
         "formula": "NOT spammy", "source_text": "Do not send message spam"}
      ],
      "tools": [
        {"name": "send", "description": "Send a message to another agent."}
      ]
    })json";
    CompiledPolicy policy = compile_text(source);
    CHECK(policy.dependency_graph().at("send").empty());
}

TEST_CASE("compiled artifact round-trips and detects tampering", "[compiler]") {
    CompiledPolicy policy = compile_text(fixture("running_example_book.json"));
    std::string artifact = serialize_compiled(policy);

    CompiledPolicy loaded = load_compiled(artifact);
    CHECK(loaded.digest() == policy.digest());
    CHECK(loaded.predicates().size() == policy.predicates().size());
    CHECK_NOTHROW(loaded.verify_integrity());

    nlohmann::json tampered = nlohmann::json::parse(artifact);
    tampered["book"]["rules"][0]["severity"] = 1;
    CHECK_THROWS_WITH(load_compiled(tampered.dump()), Catch::Contains("digest mismatch"));
}

TEST_CASE("sha256 digest matches the reference vector", "[compiler]") {
    CHECK(detail::sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(detail::sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}
