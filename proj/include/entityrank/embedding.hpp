#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace entityrank {

constexpr uint64_t kDefaultOovSeed = 12345;

/// Unit-normalized word vectors with a deterministic fallback for
/// out-of-vocabulary words: components drawn from U[-0.25, 0.25] by a
/// generator seeded with FNV-1a(word) ^ oov_seed, then normalized. The
/// same word always maps to the same vector, independent of query order.
class EmbeddingTable {
  public:
    EmbeddingTable(size_t dim, uint64_t oov_seed = kDefaultOovSeed)
        : dim_(dim), oov_seed_(oov_seed) {}

    // Movable but not copyable; the OOV cache mutex stays put.
    EmbeddingTable(EmbeddingTable&& other) noexcept
        : dim_(other.dim_),
          oov_seed_(other.oov_seed_),
          vectors_(std::move(other.vectors_)),
          order_(std::move(other.order_)),
          oov_cache_(std::move(other.oov_cache_)) {}
    EmbeddingTable& operator=(EmbeddingTable&& other) noexcept {
        dim_ = other.dim_;
        oov_seed_ = other.oov_seed_;
        vectors_ = std::move(other.vectors_);
        order_ = std::move(other.order_);
        oov_cache_ = std::move(other.oov_cache_);
        return *this;
    }
    EmbeddingTable(const EmbeddingTable&) = delete;
    EmbeddingTable& operator=(const EmbeddingTable&) = delete;

    size_t dim() const { return dim_; }
    uint64_t oov_seed() const { return oov_seed_; }
    size_t vocab_size() const { return vectors_.size(); }
    bool contains(const std::string& word) const { return vectors_.count(word) != 0; }

    /// Inserts a raw vector, normalizing it. Throws DimensionMismatch or
    /// ZeroNormVector.
    void insert(const std::string& word, std::vector<double> vec);

    /// Stored vector for in-vocabulary words, the cached deterministic
    /// random vector otherwise. Thread-safe; the reference stays valid for
    /// the lifetime of the table.
    const std::vector<double>& vector(const std::string& word) const;

    /// In-vocabulary words in insertion order (the file order for loaded
    /// tables); used by the writers.
    const std::vector<std::string>& words() const { return order_; }

  private:
    size_t dim_;
    uint64_t oov_seed_;
    std::unordered_map<std::string, std::vector<double>> vectors_;
    std::vector<std::string> order_;
    mutable std::unordered_map<std::string, std::vector<double>> oov_cache_;
    mutable std::mutex oov_mutex_;
};

/// "<vocab> <dim>" header, then one "<word> <f1> ... <fdim>" line per word.
EmbeddingTable load_word2vec_text(const std::string& path, uint64_t oov_seed = kDefaultOovSeed);

/// ASCII header "<vocab> <dim>\n", then per word the space-terminated word
/// bytes followed by dim little-endian float32 values.
EmbeddingTable load_word2vec_binary(const std::string& path, uint64_t oov_seed = kDefaultOovSeed);

/// Sniffs text vs binary layout from the bytes after the header line.
EmbeddingTable load_word2vec_auto(const std::string& path, uint64_t oov_seed = kDefaultOovSeed);

void save_word2vec_text(const EmbeddingTable& table, const std::string& path);
void save_word2vec_binary(const EmbeddingTable& table, const std::string& path);

}  // namespace entityrank
