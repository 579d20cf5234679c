#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "entityrank/corpus.hpp"

namespace entityrank {

/// Free parameters of the frequency-based features. Defaults follow the
/// usual LETOR settings: k1=2, k3=0, b=0.75, lambda=0.1, mu=2000, delta=0.7.
struct LexicalParams {
    double k1 = 2.0;
    double k3 = 0.0;
    double b = 0.75;
    double lambda_jm = 0.1;
    double mu_dir = 2000.0;
    double delta_abs = 0.7;
    /// Smoothed probabilities are floored at this value before the log so
    /// every feature stays finite.
    double prob_floor = 1e-10;
    /// Clamp negative IDF values at zero (off by default; the raw formula
    /// goes negative for terms in more than half the corpus).
    bool clamp_negative_idf = false;
    /// Use the literal absolute-discounting denominator (sum of query term
    /// frequencies in the document) instead of the document length.
    bool abs_literal_denominator = false;
};

/// Aggregated counts for one stream kind across the whole corpus.
struct StreamStats {
    std::unordered_map<std::string, uint64_t> df;   // term -> docs containing it
    std::unordered_map<std::string, uint64_t> ctf;  // term -> total corpus occurrences
    uint64_t corpus_len = 0;
    std::unordered_map<std::string, uint64_t> doc_len;     // entity -> token count
    std::unordered_map<std::string, uint64_t> doc_unique;  // entity -> distinct terms
    double avg_len = 0.0;
    // Per-document term frequencies; what the scorers read f(q_i, d) from.
    std::unordered_map<std::string, std::unordered_map<std::string, uint64_t>> tf;
};

/// Immutable corpus statistics for all three stream kinds under one
/// tokenization. Safe to share across threads once built.
struct CorpusStats {
    size_t n_docs = 0;
    Tokenization tokenization = Tokenization::TwoGram;
    std::array<StreamStats, 3> streams;

    const StreamStats& stream(StreamKind kind) const {
        return streams[static_cast<size_t>(kind)];
    }

    uint64_t term_freq(const std::string& term, const std::string& entity_id,
                       StreamKind kind) const;
    uint64_t doc_len(const std::string& entity_id, StreamKind kind) const;
    uint64_t doc_unique(const std::string& entity_id, StreamKind kind) const;
    /// ctf(term) / corpus_len, the corpus language model p(w|C).
    double corpus_prob(const std::string& term, StreamKind kind) const;
};

/// Single pass over the corpus. Throws EmptyCorpus on an empty list.
CorpusStats build_corpus_stats(const std::vector<Document>& docs, Tokenization tok,
                               std::string_view terminators = kDefaultSentenceTerminators);

/// ln((N - n + 0.5) / (n + 0.5)) with n = document frequency; unseen terms
/// use n = 0. May be negative.
double idf(const std::string& term, StreamKind kind, const CorpusStats& stats);

/// idf() with the optional clamp applied.
double effective_idf(const std::string& term, StreamKind kind, const CorpusStats& stats,
                     const LexicalParams& params);

// The seven stream-level features. Query tokens are summed with
// multiplicity: a token appearing twice in the query contributes twice.
double sum_tf(const std::vector<std::string>& query_tokens, const TokenStream& stream);
double sum_idf(const std::vector<std::string>& query_tokens, StreamKind kind,
               const CorpusStats& stats, const LexicalParams& params);
double sum_tfidf(const std::vector<std::string>& query_tokens, const TokenStream& stream,
                 const CorpusStats& stats, const LexicalParams& params);
double bm25(const std::vector<std::string>& query_tokens, const std::string& entity_id,
            StreamKind kind, const CorpusStats& stats, const LexicalParams& params);
double lmir_jm(const std::vector<std::string>& query_tokens, const std::string& entity_id,
               StreamKind kind, const CorpusStats& stats, const LexicalParams& params);
double lmir_dir(const std::vector<std::string>& query_tokens, const std::string& entity_id,
                StreamKind kind, const CorpusStats& stats, const LexicalParams& params);
double lmir_abs(const std::vector<std::string>& query_tokens, const std::string& entity_id,
                StreamKind kind, const CorpusStats& stats, const LexicalParams& params);

// Raw smoothed document-model probabilities p(term | d), before the floor.
// Each sums to 1 over the corpus vocabulary (absolute discounting under
// its usual f >= delta condition).
double prob_jm(const std::string& term, const std::string& entity_id, StreamKind kind,
               const CorpusStats& stats, const LexicalParams& params);
double prob_dir(const std::string& term, const std::string& entity_id, StreamKind kind,
                const CorpusStats& stats, const LexicalParams& params);
double prob_abs(const std::string& term, const std::string& entity_id, StreamKind kind,
                const CorpusStats& stats, const LexicalParams& params);

}  // namespace entityrank
