#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "seqguard/detail/text.hpp"
#include "seqguard/errors.hpp"

namespace seqguard {

using EmbeddingVector = std::vector<float>;

inline double l2_norm(const EmbeddingVector& v) {
    double sum = 0.0;
    for (float x : v) sum += static_cast<double>(x) * static_cast<double>(x);
    return std::sqrt(sum);
}

// No-op on the zero vector (empty text embeds to zero).
inline void l2_normalize(EmbeddingVector& v) {
    double norm = l2_norm(v);
    if (norm == 0.0) return;
    for (float& x : v) x = static_cast<float>(x / norm);
}

inline double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.size() != b.size()) throw Error("embedding dimension mismatch");
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        dot += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    double na = l2_norm(a);
    double nb = l2_norm(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (na * nb);
}

class Embedder {
public:
    virtual ~Embedder() = default;

    virtual std::size_t dimension() const = 0;
    virtual EmbeddingVector embed(std::string_view text) const = 0;

    virtual std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) const {
        std::vector<EmbeddingVector> out;
        out.reserve(texts.size());
        for (const auto& t : texts) out.push_back(embed(t));
        return out;
    }
};

// Deterministic default embedder: lowercase, split on non-alphanumerics,
// hash each token to a bucket, accumulate counts, L2-normalize.
// An external embedding service can replace this behind the same contract.
class TokenHashEmbedder final : public Embedder {
public:
    explicit TokenHashEmbedder(std::size_t dimension = 256) : dim_(dimension) {
        if (dim_ == 0) throw Error("embedding dimension must be positive");
    }

    std::size_t dimension() const override { return dim_; }

    std::size_t token_bucket(std::string_view token) const {
        return static_cast<std::size_t>(fnv1a64(token) % dim_);
    }

    EmbeddingVector embed(std::string_view text) const override {
        EmbeddingVector v(dim_, 0.0f);
        for (const auto& token : detail::tokenize(text)) v[token_bucket(token)] += 1.0f;
        l2_normalize(v);
        return v;
    }

private:
    static std::uint64_t fnv1a64(std::string_view s) {
        std::uint64_t hash = 1469598103934665603ull;
        for (char c : s) {
            hash ^= static_cast<std::uint8_t>(c);
            hash *= 1099511628211ull;
        }
        return hash;
    }

    std::size_t dim_;
};

} // namespace seqguard
