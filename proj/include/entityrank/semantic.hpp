#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "entityrank/corpus.hpp"
#include "entityrank/embedding.hpp"

namespace entityrank {

/// Per-stream IDF for the weighted aggregates, bound by the caller to the
/// same stream/tokenization the tokens came from.
using IdfFn = std::function<double(const std::string&)>;

struct SemanticOptions {
    /// Use max |dot| instead of max dot for the word-sentence similarity
    /// (infinity-norm comparison mode).
    bool inf_norm = false;
};

/// Word-sentence similarities for one (query, sentence) pair.
struct SemanticAggregate {
    double ss = 0.0;   // sum of similarities
    double sws = 0.0;  // sum of idf-weighted similarities
    double ms = 0.0;   // max similarity
    double mws = 0.0;  // max of the idf-weighted products
};

/// Dense m x n matrix of dot products between unit word vectors; rows are
/// query words, columns sentence words.
struct SimilarityMatrix {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<double> values;  // row-major

    double at(size_t i, size_t j) const { return values[i * cols + j]; }
};

SimilarityMatrix similarity_matrix(const std::vector<std::vector<double>>& query_vectors,
                                   const std::vector<std::vector<double>>& sentence_vectors);

/// Max dot product between one query word vector and the sentence's word
/// vectors. Throws EmptySentence.
double word_sentence_sim(const std::vector<double>& query_vector,
                         const std::vector<std::vector<double>>& sentence_vectors,
                         const SemanticOptions& opts = {});

/// SS/SWS/MS/MWS for one (query, sentence) pair. Query tokens contribute
/// with multiplicity. Throws EmptyQuery / EmptySentence.
SemanticAggregate sentence_aggregates(const std::vector<std::string>& query_tokens,
                                      const std::vector<std::string>& sentence_tokens,
                                      const EmbeddingTable& table, const IdfFn& idf_fn,
                                      const SemanticOptions& opts = {});

/// The eight stream-level features: max then mean over sentences of each
/// of SS, SWS, MS, MWS. A stream with no sentences (or an empty query)
/// yields eight zeros.
std::array<double, 8> stream_semantic_features(const std::vector<std::string>& query_tokens,
                                               const TokenStream& stream,
                                               const EmbeddingTable& table, const IdfFn& idf_fn,
                                               const SemanticOptions& opts = {});

}  // namespace entityrank
