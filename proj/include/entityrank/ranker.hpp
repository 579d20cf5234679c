#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entityrank/evaluation.hpp"
#include "entityrank/feature_matrix.hpp"

namespace entityrank {

constexpr uint64_t kDefaultMasterSeed = 7;
constexpr uint64_t kDefaultFoldSeed = 13;

/// Extremely randomized trees: no bootstrap, ceil(sqrt(dim)) candidate
/// features per node, one uniform cut per candidate, best weighted Gini.
struct TrainParams {
    size_t n_estimators = 100;
    size_t max_depth = 8;
    size_t k_features = 0;  // 0 means ceil(sqrt(dim))
    size_t min_samples_split = 2;
    uint64_t master_seed = kDefaultMasterSeed;
    size_t threads = 0;
};

/// Flat node record; children are indices into the tree's node vector.
struct TreeNode {
    bool is_leaf = true;
    int32_t feature = -1;
    double threshold = 0.0;
    int32_t left = -1;
    int32_t right = -1;
    uint64_t count0 = 0;  // leaf label counts
    uint64_t count1 = 0;
};

struct Tree {
    std::vector<TreeNode> nodes;  // root at index 0
};

struct TreeEnsembleModel {
    std::vector<Tree> trees;
    size_t n_estimators = 0;
    size_t max_depth = 0;
    size_t k_features = 0;  // resolved value actually used
    size_t min_samples_split = 2;
    uint64_t master_seed = 0;
    size_t dim = 0;
    uint64_t layout_fingerprint = 0;

    std::string to_json() const;
    static TreeEnsembleModel from_json(const std::string& text);
    void save(const std::string& path) const;
    static TreeEnsembleModel load(const std::string& path);
};

/// Trains on the full training set (no bootstrap); tree t uses the seed
/// derive_seed(master_seed, t), so the model is identical for any thread
/// count. Throws EmptyTraining / SingleClassTraining.
TreeEnsembleModel train(const std::vector<FeatureVector>& vectors, const TrainParams& params,
                        uint64_t layout_fingerprint = 0);

/// Mean over trees of the leaf label-1 frequency. Throws DimensionMismatch.
double predict_proba(const TreeEnsembleModel& model, const std::vector<double>& values);

/// Entity ids sorted by descending probability; ties break by ascending
/// entity_id. All pairs must share one query_id.
std::vector<std::string> rank_candidates(const TreeEnsembleModel& model,
                                         const std::vector<FeatureVector>& pairs);

/// Deterministic query-complete folds: distinct query ids are sorted,
/// shuffled by `seed`, and dealt round-robin, so the assignment depends
/// only on the id set and the seed. Fold sizes differ by at most one.
std::vector<std::vector<std::string>> make_query_folds(const std::vector<FeatureVector>& vectors,
                                                       size_t n_folds, uint64_t seed);

struct CvResult {
    std::vector<double> fold_map;  // one MAP per fold
    double mean_map = 0.0;
    std::vector<std::vector<std::string>> fold_queries;
};

/// Query-grouped cross-validation: every pair of a query lands in the
/// same fold. Throws TooFewQueries when there are fewer distinct queries
/// than folds.
CvResult cross_validate(const std::vector<FeatureVector>& vectors, const TrainParams& params,
                        size_t n_folds = 10, uint64_t fold_seed = kDefaultFoldSeed,
                        ApMode ap_mode = ApMode::Standard);

struct HyperparameterGrid {
    std::vector<size_t> n_estimators_candidates;
    std::vector<size_t> max_depth_candidates = {4, 6, 8, 10, 12};
};

/// The n_estimators candidates: n_draws seeded uniform draws from
/// [100, 500], deduplicated and sorted ascending.
std::vector<size_t> draw_n_estimator_candidates(size_t n_draws, uint64_t seed);

struct GridCell {
    size_t n_estimators = 0;
    size_t max_depth = 0;
    double mean_map = 0.0;
    std::vector<double> fold_map;
};

struct GridSearchResult {
    size_t best_n_estimators = 0;
    size_t best_max_depth = 0;
    double best_mean_map = 0.0;
    std::vector<GridCell> cells;
};

/// Evaluates every grid cell with cross_validate (fold assignment shared
/// across cells); picks the best mean MAP, ties going to fewer trees then
/// smaller depth.
GridSearchResult grid_search(const std::vector<FeatureVector>& vectors,
                             const HyperparameterGrid& grid, const TrainParams& base_params,
                             size_t n_folds = 10, uint64_t fold_seed = kDefaultFoldSeed,
                             ApMode ap_mode = ApMode::Standard);

enum class FuseMode { Prob, Rank };

/// Combines aligned per-pair scores from several models. Prob averages
/// the probabilities; Rank scores each pair by the sum over models of
/// 1 / (its rank position under that model, ties broken by input index).
std::vector<double> fuse(const std::vector<std::vector<double>>& scores_per_model, FuseMode mode);

}  // namespace entityrank
