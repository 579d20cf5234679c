#include "entityrank/lexical.hpp"

#include <algorithm>
#include <cmath>

#include "entityrank/errors.hpp"

namespace entityrank {

namespace {

const std::unordered_map<std::string, uint64_t>& doc_tf(const CorpusStats& stats,
                                                        const std::string& entity_id,
                                                        StreamKind kind) {
    const auto& tf = stats.stream(kind).tf;
    auto it = tf.find(entity_id);
    if (it == tf.end()) throw Error("unknown entity_id \"" + entity_id + "\" in corpus stats");
    return it->second;
}

uint64_t lookup(const std::unordered_map<std::string, uint64_t>& map, const std::string& key) {
    auto it = map.find(key);
    return it == map.end() ? 0 : it->second;
}

double floored_log(double p, const LexicalParams& params) {
    if (!(p > params.prob_floor)) p = params.prob_floor;
    return std::log(p);
}

}  // namespace

uint64_t CorpusStats::term_freq(const std::string& term, const std::string& entity_id,
                                StreamKind kind) const {
    return lookup(doc_tf(*this, entity_id, kind), term);
}

uint64_t CorpusStats::doc_len(const std::string& entity_id, StreamKind kind) const {
    const auto& lens = stream(kind).doc_len;
    auto it = lens.find(entity_id);
    if (it == lens.end()) throw Error("unknown entity_id \"" + entity_id + "\" in corpus stats");
    return it->second;
}

uint64_t CorpusStats::doc_unique(const std::string& entity_id, StreamKind kind) const {
    const auto& uniq = stream(kind).doc_unique;
    auto it = uniq.find(entity_id);
    if (it == uniq.end()) throw Error("unknown entity_id \"" + entity_id + "\" in corpus stats");
    return it->second;
}

double CorpusStats::corpus_prob(const std::string& term, StreamKind kind) const {
    const StreamStats& s = stream(kind);
    if (s.corpus_len == 0) return 0.0;
    return static_cast<double>(lookup(s.ctf, term)) / static_cast<double>(s.corpus_len);
}

CorpusStats build_corpus_stats(const std::vector<Document>& docs, Tokenization tok,
                               std::string_view terminators) {
    if (docs.empty()) throw EmptyCorpus("corpus must contain at least one document");

    CorpusStats stats;
    stats.n_docs = docs.size();
    stats.tokenization = tok;

    for (const Document& doc : docs) {
        const std::array<TokenStream, 3> streams = build_streams(doc, tok, terminators);
        for (const TokenStream& stream : streams) {
            StreamStats& s = stats.streams[static_cast<size_t>(stream.kind)];
            if (s.tf.count(doc.entity_id) != 0)
                throw Error("duplicate entity_id \"" + doc.entity_id + "\"");
            std::unordered_map<std::string, uint64_t>& counts = s.tf[doc.entity_id];
            uint64_t len = 0;
            for (const auto& sentence : stream.sentences) {
                for (const std::string& token : sentence) {
                    ++counts[token];
                    ++len;
                }
            }
            s.doc_len[doc.entity_id] = len;
            s.doc_unique[doc.entity_id] = counts.size();
            s.corpus_len += len;
            for (const auto& [term, count] : counts) {
                s.df[term] += 1;
                s.ctf[term] += count;
            }
        }
    }
    for (StreamStats& s : stats.streams) {
        s.avg_len = static_cast<double>(s.corpus_len) / static_cast<double>(stats.n_docs);
    }
    return stats;
}

double idf(const std::string& term, StreamKind kind, const CorpusStats& stats) {
    const double n = static_cast<double>(lookup(stats.stream(kind).df, term));
    const double big_n = static_cast<double>(stats.n_docs);
    return std::log((big_n - n + 0.5) / (n + 0.5));
}

double effective_idf(const std::string& term, StreamKind kind, const CorpusStats& stats,
                     const LexicalParams& params) {
    const double value = idf(term, kind, stats);
    return params.clamp_negative_idf ? std::max(0.0, value) : value;
}

double sum_tf(const std::vector<std::string>& query_tokens, const TokenStream& stream) {
    std::unordered_map<std::string, uint64_t> counts;
    for (const auto& sentence : stream.sentences) {
        for (const std::string& token : sentence) ++counts[token];
    }
    double sum = 0.0;
    for (const std::string& token : query_tokens) sum += static_cast<double>(lookup(counts, token));
    return sum;
}

double sum_idf(const std::vector<std::string>& query_tokens, StreamKind kind,
               const CorpusStats& stats, const LexicalParams& params) {
    double sum = 0.0;
    for (const std::string& token : query_tokens) sum += effective_idf(token, kind, stats, params);
    return sum;
}

double sum_tfidf(const std::vector<std::string>& query_tokens, const TokenStream& stream,
                 const CorpusStats& stats, const LexicalParams& params) {
    std::unordered_map<std::string, uint64_t> counts;
    for (const auto& sentence : stream.sentences) {
        for (const std::string& token : sentence) ++counts[token];
    }
    double sum = 0.0;
    for (const std::string& token : query_tokens) {
        sum += static_cast<double>(lookup(counts, token)) *
               effective_idf(token, stream.kind, stats, params);
    }
    return sum;
}

double bm25(const std::vector<std::string>& query_tokens, const std::string& entity_id,
            StreamKind kind, const CorpusStats& stats, const LexicalParams& params) {
    const StreamStats& s = stats.stream(kind);
    if (s.avg_len == 0.0) return 0.0;

    const auto& tf = doc_tf(stats, entity_id, kind);
    const double len = static_cast<double>(stats.doc_len(entity_id, kind));
    const double norm = 1.0 - params.b + params.b * len / s.avg_len;

    std::unordered_map<std::string, uint64_t> qtf;
    for (const std::string& token : query_tokens) ++qtf[token];

    double score = 0.0;
    for (const std::string& token : query_tokens) {
        const double f = static_cast<double>(lookup(tf, token));
        if (f <= 0.0) continue;
        const double fq = static_cast<double>(qtf[token]);
        const double doc_part = f * (params.k1 + 1.0) / (f + params.k1 * norm);
        const double query_part = (params.k3 + 1.0) * fq / (params.k3 + fq);
        score += effective_idf(token, kind, stats, params) * doc_part * query_part;
    }
    return score;
}

double prob_jm(const std::string& term, const std::string& entity_id, StreamKind kind,
               const CorpusStats& stats, const LexicalParams& params) {
    const double len = static_cast<double>(stats.doc_len(entity_id, kind));
    const double f = static_cast<double>(stats.term_freq(term, entity_id, kind));
    const double p_ml = len > 0.0 ? f / len : 0.0;
    return (1.0 - params.lambda_jm) * p_ml + params.lambda_jm * stats.corpus_prob(term, kind);
}

double prob_dir(const std::string& term, const std::string& entity_id, StreamKind kind,
                const CorpusStats& stats, const LexicalParams& params) {
    const double len = static_cast<double>(stats.doc_len(entity_id, kind));
    const double f = static_cast<double>(stats.term_freq(term, entity_id, kind));
    const double denom = len + params.mu_dir;
    if (denom <= 0.0) return 0.0;
    return (f + params.mu_dir * stats.corpus_prob(term, kind)) / denom;
}

double prob_abs(const std::string& term, const std::string& entity_id, StreamKind kind,
                const CorpusStats& stats, const LexicalParams& params) {
    const double len = static_cast<double>(stats.doc_len(entity_id, kind));
    if (len <= 0.0) return 0.0;
    const double f = static_cast<double>(stats.term_freq(term, entity_id, kind));
    const double uniq = static_cast<double>(stats.doc_unique(entity_id, kind));
    return std::max(f - params.delta_abs, 0.0) / len +
           params.delta_abs * (uniq / len) * stats.corpus_prob(term, kind);
}

double lmir_jm(const std::vector<std::string>& query_tokens, const std::string& entity_id,
               StreamKind kind, const CorpusStats& stats, const LexicalParams& params) {
    double sum = 0.0;
    for (const std::string& token : query_tokens) {
        sum += floored_log(prob_jm(token, entity_id, kind, stats, params), params);
    }
    return sum;
}

double lmir_dir(const std::vector<std::string>& query_tokens, const std::string& entity_id,
                StreamKind kind, const CorpusStats& stats, const LexicalParams& params) {
    double sum = 0.0;
    for (const std::string& token : query_tokens) {
        sum += floored_log(prob_dir(token, entity_id, kind, stats, params), params);
    }
    return sum;
}

double lmir_abs(const std::vector<std::string>& query_tokens, const std::string& entity_id,
                StreamKind kind, const CorpusStats& stats, const LexicalParams& params) {
    double sum = 0.0;
    if (!params.abs_literal_denominator) {
        for (const std::string& token : query_tokens) {
            sum += floored_log(prob_abs(token, entity_id, kind, stats, params), params);
        }
        return sum;
    }

    // Literal variant: the denominator is the summed frequency of the query
    // terms in the document and the corpus term is not length-scaled.
    double denom = 0.0;
    for (const std::string& token : query_tokens) {
        denom += static_cast<double>(stats.term_freq(token, entity_id, kind));
    }
    const double uniq = static_cast<double>(stats.doc_unique(entity_id, kind));
    for (const std::string& token : query_tokens) {
        const double f = static_cast<double>(stats.term_freq(token, entity_id, kind));
        const double num = std::max(f - params.delta_abs, 0.0) +
                           params.delta_abs * uniq * stats.corpus_prob(token, kind);
        sum += floored_log(denom > 0.0 ? num / denom : 0.0, params);
    }
    return sum;
}

}  // namespace entityrank
