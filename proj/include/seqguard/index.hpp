#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seqguard/embedding.hpp"
#include "seqguard/errors.hpp"
#include "seqguard/policy.hpp"

namespace seqguard {

// Brute-force exact retrieval over the declared predicate schemas.
// Exact search is deterministic and, at policy-book scale, faster than an
// ANN index; the contract permits a sublinear backend behind the same API.
class PredicateIndex {
public:
    PredicateIndex(std::shared_ptr<const PredicateTable> table,
                   std::shared_ptr<const Embedder> embedder)
        : table_(std::move(table)), embedder_(std::move(embedder)) {
        if (!table_ || !embedder_) throw Error("PredicateIndex requires a table and an embedder");
        std::vector<std::string> texts;
        texts.reserve(table_->size());
        for (const auto& schema : table_->schemas()) texts.push_back(schema_text(schema));
        vectors_ = embedder_->embed_batch(texts);
    }

    std::size_t size() const { return vectors_.size(); }
    const Embedder& embedder() const { return *embedder_; }
    const EmbeddingVector& vector_at(std::size_t i) const { return vectors_.at(i); }

    // The min(k, size) predicate names with highest cosine similarity to the
    // query, descending; ties broken by declaration order.
    std::vector<std::string> top_k(std::string_view query, std::size_t k) const {
        if (vectors_.empty()) throw Error("top_k on an empty index");
        if (k == 0) throw Error("top_k requires k >= 1");

        EmbeddingVector q = embedder_->embed(query);
        std::vector<std::pair<double, std::size_t>> scored;
        scored.reserve(vectors_.size());
        for (std::size_t i = 0; i < vectors_.size(); ++i)
            scored.emplace_back(cosine(q, vectors_[i]), i);

        std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });

        std::size_t take = std::min(k, scored.size());
        std::vector<std::string> names;
        names.reserve(take);
        for (std::size_t i = 0; i < take; ++i) names.push_back(table_->at(scored[i].second).name);
        return names;
    }

private:
    std::shared_ptr<const PredicateTable> table_;
    std::shared_ptr<const Embedder> embedder_;
    std::vector<EmbeddingVector> vectors_;
};

} // namespace seqguard
