#include <catch2/catch.hpp>

#include <random>

#include "oracles.hpp"
#include "seqguard/policy.hpp"

using namespace seqguard;

TEST_CASE("the running-example rule fails under its violating state", "[policy]") {
    auto table = oracles::make_table({"sensitive_info", "publish_content"});
    Formula f = parse_formula("NOT (sensitive_info AND publish_content)");
    auto gamma = oracles::gamma_of(table, {"sensitive_info", "publish_content"});
    CHECK_FALSE(eval_formula(f, gamma));
}

TEST_CASE("closed world: unset predicates are false", "[policy]") {
    auto table = oracles::make_table({"a", "b"});
    TruthAssignment gamma(table);
    CHECK(eval_formula(parse_formula("NOT (a AND b)"), gamma));
    CHECK_FALSE(eval_formula(parse_formula("a"), gamma));
}

TEST_CASE("evaluation rejects undeclared atoms", "[policy]") {
    auto table = oracles::make_table({"a"});
    TruthAssignment gamma(table);
    CHECK_THROWS_AS(eval_formula(parse_formula("missing_predicate"), gamma), EvaluationError);
    CHECK_THROWS_AS(gamma.holds("missing_predicate"), EvaluationError);
    CHECK_THROWS_AS(TruthAssignment(table).assign("nope", true), EvaluationError);
}

TEST_CASE("eval agrees with the truth-table oracle on all assignments", "[policy]") {
    std::vector<std::string> pool = {"a", "b", "c", "d", "e"};
    auto table = oracles::make_table(pool);
    std::mt19937 rng(20240917);
    for (int trial = 0; trial < 400; ++trial) {
        Formula f = oracles::random_formula(rng, pool, 4);
        for (int mask = 0; mask < (1 << 5); ++mask) {
            TruthAssignment gamma(table);
            std::map<std::string, bool> assignment;
            for (std::size_t i = 0; i < pool.size(); ++i) {
                bool value = (mask >> i) & 1;
                assignment[pool[i]] = value;
                gamma.assign(pool[i], value);
            }
            CHECK(eval_formula(f, gamma) == oracles::eval_at(f, assignment));
        }
    }
}

TEST_CASE("eval is pure", "[policy]") {
    auto table = oracles::make_table({"a", "b"});
    auto gamma = oracles::gamma_of(table, {"a"});
    Formula f = parse_formula("a AND NOT b");
    bool first = eval_formula(f, gamma);
    for (int i = 0; i < 10; ++i) CHECK(eval_formula(f, gamma) == first);
    CHECK(gamma.true_names() == std::vector<std::string>{"a"});
}

TEST_CASE("monotone fragment grows with gamma", "[policy]") {
    // No negation/implication: enlarging the true-set can only raise the value.
    std::vector<std::string> pool = {"a", "b", "c", "d"};
    auto table = oracles::make_table(pool);
    std::mt19937 rng(5);
    auto random_monotone = [&](auto&& self, int depth) -> Formula {
        std::uniform_int_distribution<int> pick(0, depth == 0 ? 0 : 2);
        std::uniform_int_distribution<int> atom_pick(0, 3);
        switch (pick(rng)) {
        case 1: return Formula::conjunction(self(self, depth - 1), self(self, depth - 1));
        case 2: return Formula::disjunction(self(self, depth - 1), self(self, depth - 1));
        default: return Formula::atom(pool[atom_pick(rng)]);
        }
    };
    for (int trial = 0; trial < 200; ++trial) {
        Formula f = random_monotone(random_monotone, 3);
        for (int mask = 0; mask < 16; ++mask) {
            for (int extra = 0; extra < 16; ++extra) {
                int larger = mask | extra;
                TruthAssignment small(table), big(table);
                for (std::size_t i = 0; i < pool.size(); ++i) {
                    small.assign(pool[i], (mask >> i) & 1);
                    big.assign(pool[i], (larger >> i) & 1);
                }
                CHECK(eval_formula(f, small) <= eval_formula(f, big));
            }
        }
    }
}

TEST_CASE("obligation rewrite is the identity on the rule formula", "[policy]") {
    Formula phi = parse_formula("NOT (sensitive_info AND publish_content)");
    Rule rule{"no_leak", RuleCategory::action, 4, phi, "Do not publish sensitive info"};
    CHECK(rule_to_obligation(rule).formula == phi);

    Rule atomic{"r", RuleCategory::message, 1, parse_formula("a"), "a must hold"};
    CHECK(rule_to_obligation(atomic).formula == Formula::atom("a"));

    Rule injection{"no_injection", RuleCategory::message, 4,
                   parse_formula("NOT prompt_injection"),
                   "Do not spread prompt-injection messages"};
    CHECK(rule_to_obligation(injection).formula ==
          Formula::negation(Formula::atom("prompt_injection")));
    CHECK(atoms(rule_to_obligation(injection).formula) == atoms(injection.formula));
}

TEST_CASE("predicate table indexes by declaration order", "[policy]") {
    auto table = oracles::make_table({"first", "second", "third"});
    CHECK(table->size() == 3);
    CHECK(table->index_of("second") == 1);
    CHECK_FALSE(table->index_of("missing"));
    CHECK_THROWS_AS(PredicateTable({PredicateSchema{"dup", "", {"k"}, 1},
                                    PredicateSchema{"dup", "", {"k"}, 1}}),
                    ValidationError);
}
