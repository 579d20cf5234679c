#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "entityrank/corpus.hpp"
#include "entityrank/embedding.hpp"
#include "entityrank/lexical.hpp"
#include "entityrank/semantic.hpp"

namespace entityrank {

/// The 15 per-block feature names in emission order: the seven frequency
/// features followed by max then mean of SS/SWS/MS/MWS.
extern const std::array<std::string, 15> kBlockFeatureNames;

/// Which (tokenization, stream) blocks a feature vector contains and in
/// what order. Serialized as a JSON sidecar next to every feature file.
struct FeatureLayout {
    std::vector<Tokenization> tokenizations = {Tokenization::TwoGram};
    std::vector<StreamKind> streams = {StreamKind::Title, StreamKind::Body,
                                       StreamKind::TitleBody};

    size_t total_dim() const { return tokenizations.size() * streams.size() * 15; }

    /// Human-readable name of a 0-based column, e.g. "2gram.body.bm25".
    std::string column_name(size_t index) const;

    std::string to_json() const;
    static FeatureLayout from_json(const std::string& text);

    /// FNV-1a of the canonical JSON form; stored in trained models so a
    /// model refuses features with a different layout.
    uint64_t fingerprint() const;

    /// Parses a compact CLI spec "tok1,tok2:stream1,stream2", e.g.
    /// "2gram:title,body,titlebody" or "seg,2gram:all".
    static FeatureLayout parse_spec(const std::string& spec);
};

struct FeatureVector {
    std::string query_id;
    std::string entity_id;
    int label = 0;
    std::vector<double> values;
};

/// Corpus statistics per tokenization named by the layout.
using StatsByTokenization = std::map<Tokenization, CorpusStats>;

StatsByTokenization build_stats_for_layout(const std::vector<Document>& docs,
                                           const FeatureLayout& layout,
                                           std::string_view terminators = kDefaultSentenceTerminators);

/// One feature vector for a (query, document) pair; blocks follow the
/// layout order, features inside a block follow kBlockFeatureNames.
FeatureVector featurize_pair(const Query& query, const Document& doc, int label,
                             const StatsByTokenization& stats, const EmbeddingTable& table,
                             const FeatureLayout& layout, const LexicalParams& params = {},
                             const SemanticOptions& sem_opts = {},
                             std::string_view terminators = kDefaultSentenceTerminators);

/// Featurizes every labeled pair, in input order, parallel over pairs.
/// Unknown query or entity ids raise Error.
std::vector<FeatureVector> featurize_pairs(const std::vector<Query>& queries,
                                           const std::vector<Document>& docs,
                                           const std::vector<LabeledPair>& pairs,
                                           const StatsByTokenization& stats,
                                           const EmbeddingTable& table,
                                           const FeatureLayout& layout,
                                           const LexicalParams& params = {},
                                           const SemanticOptions& sem_opts = {},
                                           std::string_view terminators = kDefaultSentenceTerminators,
                                           size_t threads = 0);

/// LETOR-style feature file:
///   <label> qid:<query_id> 1:<v1> ... <dim>:<vdim> # <entity_id>
/// Values are printed with 17 significant digits so read(write(x)) == x.
/// The layout sidecar is written to <path>.layout.json.
void write_letor(const std::vector<FeatureVector>& vectors, const FeatureLayout& layout,
                 const std::string& path);

struct LetorFile {
    std::vector<FeatureVector> vectors;
    FeatureLayout layout;
};

/// Reads a feature file plus its <path>.layout.json sidecar (required; it
/// names every column and pins the dimension).
LetorFile read_letor(const std::string& path);

}  // namespace entityrank
