// Test-only reference implementations, kept independent of the library's
// evaluation path so they can serve as oracles.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "seqguard/embedding.hpp"
#include "seqguard/formula.hpp"
#include "seqguard/policy.hpp"

namespace oracles {

// Plain truth-table evaluation over an explicit, total assignment.
inline bool eval_at(const seqguard::Formula& f, const std::map<std::string, bool>& assignment) {
    using Kind = seqguard::Formula::Kind;
    switch (f.kind()) {
    case Kind::atom: return assignment.at(f.atom_name());
    case Kind::negation: return !eval_at(f.left(), assignment);
    case Kind::conjunction: return eval_at(f.left(), assignment) && eval_at(f.right(), assignment);
    case Kind::disjunction: return eval_at(f.left(), assignment) || eval_at(f.right(), assignment);
    case Kind::implication:
        return !eval_at(f.left(), assignment) || eval_at(f.right(), assignment);
    }
    return false;
}

// Closed-world completion of a true-set over a fixed atom universe.
inline std::map<std::string, bool> complete(const std::vector<std::string>& universe,
                                            const std::set<std::string>& true_set) {
    std::map<std::string, bool> assignment;
    for (const auto& name : universe)
        assignment[name] = true_set.find(name) != true_set.end();
    return assignment;
}

// The sequent reading as an implication: (/\ Gamma) => psi, evaluated at the
// closed-world completion over atoms(psi) and Gamma.
inline bool sequent_holds(const std::set<std::string>& gamma, const seqguard::Formula& psi) {
    std::set<std::string> universe = seqguard::atoms(psi);
    universe.insert(gamma.begin(), gamma.end());
    std::vector<std::string> names(universe.begin(), universe.end());
    auto assignment = complete(names, gamma);
    bool antecedent = true;
    for (const auto& g : gamma) antecedent = antecedent && assignment.at(g);
    bool obligation = eval_at(psi, assignment);
    return !antecedent || obligation;
}

// Exhaustive-subset minimal-witness search: first violating subset in
// (size ascending, lexicographic-by-candidate-order) order.
inline std::vector<std::string> exhaustive_witness(const std::vector<std::string>& candidates,
                                                   const seqguard::Formula& psi) {
    std::size_t n = candidates.size();
    std::vector<std::uint32_t> masks;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) masks.push_back(mask);
    auto key = [&](std::uint32_t mask) {
        std::vector<int> indices;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) indices.push_back(static_cast<int>(i));
        return std::make_pair(indices.size(), indices);
    };
    std::sort(masks.begin(), masks.end(),
              [&](std::uint32_t a, std::uint32_t b) { return key(a) < key(b); });

    std::set<std::string> psi_universe = seqguard::atoms(psi);
    for (std::uint32_t mask : masks) {
        std::set<std::string> true_set;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) true_set.insert(candidates[i]);
        std::vector<std::string> universe(psi_universe.begin(), psi_universe.end());
        for (const auto& c : candidates)
            if (std::find(universe.begin(), universe.end(), c) == universe.end())
                universe.push_back(c);
        if (!eval_at(psi, complete(universe, true_set))) {
            std::vector<std::string> witness;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1u << i)) witness.push_back(candidates[i]);
            return witness;
        }
    }
    return {"<no witness>"};
}

// Independent cosine + sort-all-and-truncate retrieval oracle.
inline double cosine_ref(const std::vector<float>& a, const std::vector<float>& b) {
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += double(a[i]) * double(b[i]);
        na += double(a[i]) * double(a[i]);
        nb += double(b[i]) * double(b[i]);
    }
    if (na == 0 || nb == 0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

inline std::vector<std::string> top_k_ref(const seqguard::PredicateTable& table,
                                          const seqguard::Embedder& embedder,
                                          const std::string& query, std::size_t k) {
    auto q = embedder.embed(query);
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t i = 0; i < table.size(); ++i)
        scored.emplace_back(cosine_ref(q, embedder.embed(seqguard::schema_text(table.at(i)))), i);
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < std::min(k, scored.size()); ++i)
        out.push_back(table.at(scored[i].second).name);
    return out;
}

// --- generators -------------------------------------------------------------

inline seqguard::Formula random_formula(std::mt19937& rng,
                                        const std::vector<std::string>& atom_pool,
                                        int max_depth) {
    using seqguard::Formula;
    std::uniform_int_distribution<int> atom_pick(0, static_cast<int>(atom_pool.size()) - 1);
    if (max_depth == 0) return Formula::atom(atom_pool[atom_pick(rng)]);
    std::uniform_int_distribution<int> kind_pick(0, 5);
    switch (kind_pick(rng)) {
    case 0:
    case 1: return Formula::atom(atom_pool[atom_pick(rng)]);
    case 2: return Formula::negation(random_formula(rng, atom_pool, max_depth - 1));
    case 3:
        return Formula::conjunction(random_formula(rng, atom_pool, max_depth - 1),
                                    random_formula(rng, atom_pool, max_depth - 1));
    case 4:
        return Formula::disjunction(random_formula(rng, atom_pool, max_depth - 1),
                                    random_formula(rng, atom_pool, max_depth - 1));
    default:
        return Formula::implication(random_formula(rng, atom_pool, max_depth - 1),
                                    random_formula(rng, atom_pool, max_depth - 1));
    }
}

inline std::shared_ptr<const seqguard::PredicateTable> make_table(
    const std::vector<std::string>& names) {
    std::vector<seqguard::PredicateSchema> schemas;
    for (const auto& name : names)
        schemas.push_back(seqguard::PredicateSchema{name, "test predicate " + name, {name}, 1});
    return std::make_shared<const seqguard::PredicateTable>(std::move(schemas));
}

inline seqguard::TruthAssignment gamma_of(std::shared_ptr<const seqguard::PredicateTable> table,
                                          const std::vector<std::string>& true_names) {
    seqguard::TruthAssignment gamma(std::move(table));
    for (const auto& name : true_names) gamma.assign(name, true);
    return gamma;
}

} // namespace oracles
