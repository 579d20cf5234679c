#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entityrank/corpus.hpp"
#include "entityrank/embedding.hpp"

namespace entityrank {

/// Shape of a generated dataset. Relevance is planted as lexical overlap:
/// relevant entities' sentences embed the full query token block with
/// probability overlap_strength; irrelevant entities are pure background.
struct SynthSpec {
    size_t n_queries = 10;
    size_t candidates_per_query = 100;
    size_t vocab_size = 500;  // codepoint alphabet, capped by the CJK block
    double relevant_fraction = 0.2;
    double overlap_strength = 0.8;
    uint64_t seed = 42;
    size_t embedding_dim = 16;

    void validate() const;
    static SynthSpec from_json_file(const std::string& path);
};

struct SynthData {
    std::vector<Document> docs;
    std::vector<Query> queries;
    std::vector<LabeledPair> pairs;
    EmbeddingTable embeddings;
};

/// Fully deterministic under spec.seed: same spec, same bytes.
SynthData generate(const SynthSpec& spec);

/// Writes corpus.jsonl, queries.jsonl, pairs.tsv and embeddings.txt into
/// out_dir (which must exist).
void generate_files(const SynthSpec& spec, const std::string& out_dir);

}  // namespace entityrank
