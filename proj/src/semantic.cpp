#include "entityrank/semantic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "entityrank/errors.hpp"

namespace entityrank {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    const size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

}  // namespace

SimilarityMatrix similarity_matrix(const std::vector<std::vector<double>>& query_vectors,
                                   const std::vector<std::vector<double>>& sentence_vectors) {
    SimilarityMatrix m;
    m.rows = query_vectors.size();
    m.cols = sentence_vectors.size();
    m.values.resize(m.rows * m.cols);
    for (size_t i = 0; i < m.rows; ++i) {
        for (size_t j = 0; j < m.cols; ++j) {
            m.values[i * m.cols + j] = dot(query_vectors[i], sentence_vectors[j]);
        }
    }
    return m;
}

double word_sentence_sim(const std::vector<double>& query_vector,
                         const std::vector<std::vector<double>>& sentence_vectors,
                         const SemanticOptions& opts) {
    if (sentence_vectors.empty()) throw EmptySentence("sentence has no tokens");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& sv : sentence_vectors) {
        double d = dot(query_vector, sv);
        if (opts.inf_norm) d = std::abs(d);
        best = std::max(best, d);
    }
    return best;
}

SemanticAggregate sentence_aggregates(const std::vector<std::string>& query_tokens,
                                      const std::vector<std::string>& sentence_tokens,
                                      const EmbeddingTable& table, const IdfFn& idf_fn,
                                      const SemanticOptions& opts) {
    if (query_tokens.empty()) throw EmptyQuery("query has no tokens");
    if (sentence_tokens.empty()) throw EmptySentence("sentence has no tokens");

    std::vector<std::vector<double>> sentence_vectors;
    sentence_vectors.reserve(sentence_tokens.size());
    for (const std::string& token : sentence_tokens) sentence_vectors.push_back(table.vector(token));

    SemanticAggregate agg;
    bool first = true;
    for (const std::string& token : query_tokens) {
        const double sim = word_sentence_sim(table.vector(token), sentence_vectors, opts);
        const double weighted = sim * idf_fn(token);
        agg.ss += sim;
        agg.sws += weighted;
        if (first) {
            agg.ms = sim;
            agg.mws = weighted;
            first = false;
        } else {
            agg.ms = std::max(agg.ms, sim);
            agg.mws = std::max(agg.mws, weighted);
        }
    }
    return agg;
}

std::array<double, 8> stream_semantic_features(const std::vector<std::string>& query_tokens,
                                               const TokenStream& stream,
                                               const EmbeddingTable& table, const IdfFn& idf_fn,
                                               const SemanticOptions& opts) {
    std::array<double, 8> out{};
    if (query_tokens.empty()) return out;

    std::vector<SemanticAggregate> per_sentence;
    per_sentence.reserve(stream.sentences.size());
    for (const auto& sentence : stream.sentences) {
        if (sentence.empty()) continue;  // streams drop empty sentences; stay defensive
        per_sentence.push_back(sentence_aggregates(query_tokens, sentence, table, idf_fn, opts));
    }
    if (per_sentence.empty()) return out;

    const double n = static_cast<double>(per_sentence.size());
    std::array<double, 4> maxes = {per_sentence[0].ss, per_sentence[0].sws, per_sentence[0].ms,
                                   per_sentence[0].mws};
    std::array<double, 4> sums{};
    for (const SemanticAggregate& agg : per_sentence) {
        const std::array<double, 4> vals = {agg.ss, agg.sws, agg.ms, agg.mws};
        for (size_t k = 0; k < 4; ++k) {
            maxes[k] = std::max(maxes[k], vals[k]);
            sums[k] += vals[k];
        }
    }
    for (size_t k = 0; k < 4; ++k) {
        out[k] = maxes[k];
        out[4 + k] = sums[k] / n;
    }
    return out;
}

}  // namespace entityrank
