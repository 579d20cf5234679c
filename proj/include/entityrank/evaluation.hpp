#pragma once

#include <string>
#include <vector>

#include "entityrank/corpus.hpp"

namespace entityrank {

/// Standard is the conventional average precision (normalized by the
/// number of relevant entities). PaperLiteral is the plain sum of
/// reciprocal positions of the relevant entities, which can exceed 1.
enum class ApMode { Standard, PaperLiteral };

ApMode parse_ap_mode(std::string_view name);
std::string_view to_string(ApMode mode);

struct RankedEntry {
    std::string entity_id;
    int relevance = 0;  // 0 or 1
};

/// One query's candidates in ranked order; positions are implicit 1..n.
struct RankedList {
    std::string query_id;
    std::vector<RankedEntry> entries;
};

/// Throws EmptyList on a list with no entries. A list with no relevant
/// entity scores 0 in both modes.
double avgprec(const RankedList& list, ApMode mode = ApMode::Standard);

double map_score(const std::vector<RankedList>& lists, ApMode mode = ApMode::Standard);

/// Mean over queries of 1 / (position of the first relevant entity);
/// queries with no relevant entity contribute 0.
double mrr(const std::vector<RankedList>& lists);

// --- prediction files ----------------------------------------------------

/// One row of the ranker's output TSV.
struct Prediction {
    std::string query_id;
    std::string entity_id;
    double score = 0.0;
    size_t rank = 0;
};

std::vector<Prediction> load_predictions_tsv(const std::string& path);
void write_predictions_tsv(const std::vector<Prediction>& predictions, const std::string& path);

/// Groups predictions by query (queries keep first-appearance order, rows
/// are ordered by rank) and attaches relevance labels from the qrels
/// pairs. Prediction rows without a qrels entry count as not relevant.
std::vector<RankedList> build_ranked_lists(const std::vector<Prediction>& predictions,
                                           const std::vector<LabeledPair>& qrels);

}  // namespace entityrank
