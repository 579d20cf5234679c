#include "entityrank/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "entityrank/errors.hpp"
#include "entityrank/parallel.hpp"
#include "entityrank/rng.hpp"

namespace entityrank {

namespace {

double gini(uint64_t c0, uint64_t c1) {
    const double n = static_cast<double>(c0 + c1);
    if (n == 0.0) return 0.0;
    const double p0 = static_cast<double>(c0) / n;
    const double p1 = static_cast<double>(c1) / n;
    return 1.0 - p0 * p0 - p1 * p1;
}

struct TreeBuilder {
    const std::vector<FeatureVector>& data;
    size_t dim;
    size_t k_features;
    size_t max_depth;
    size_t min_samples_split;
    SplitMix64 rng;
    std::vector<TreeNode> nodes;

    int32_t build(std::vector<size_t>& indices, size_t depth) {
        uint64_t c0 = 0;
        uint64_t c1 = 0;
        for (size_t i : indices) (data[i].label == 1 ? c1 : c0) += 1;

        const auto make_leaf = [&]() {
            TreeNode leaf;
            leaf.is_leaf = true;
            leaf.count0 = c0;
            leaf.count1 = c1;
            nodes.push_back(leaf);
            return static_cast<int32_t>(nodes.size() - 1);
        };

        if (depth >= max_depth || indices.size() < min_samples_split || c0 == 0 || c1 == 0) {
            return make_leaf();
        }

        // Draw k distinct candidate features (partial Fisher-Yates).
        std::vector<size_t> pool(dim);
        std::iota(pool.begin(), pool.end(), size_t{0});
        const size_t k = std::min(k_features, dim);
        for (size_t i = 0; i < k; ++i) {
            const size_t j = i + rng.next_below(dim - i);
            std::swap(pool[i], pool[j]);
        }

        int32_t best_feature = -1;
        double best_threshold = 0.0;
        double best_impurity = std::numeric_limits<double>::infinity();

        for (size_t c = 0; c < k; ++c) {
            const size_t f = pool[c];
            double lo = data[indices[0]].values[f];
            double hi = lo;
            for (size_t i : indices) {
                const double v = data[i].values[f];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (!(lo < hi)) continue;  // constant at this node

            double threshold = 0.0;
            bool drew = false;
            for (int attempt = 0; attempt < 8 && !drew; ++attempt) {
                threshold = rng.uniform(lo, hi);
                drew = lo < threshold && threshold < hi;
            }
            if (!drew) continue;  // interval too narrow to cut

            uint64_t l0 = 0, l1 = 0, r0 = 0, r1 = 0;
            for (size_t i : indices) {
                const bool left = data[i].values[f] < threshold;
                if (data[i].label == 1) {
                    (left ? l1 : r1) += 1;
                } else {
                    (left ? l0 : r0) += 1;
                }
            }
            if (l0 + l1 == 0 || r0 + r1 == 0) continue;

            const double n = static_cast<double>(indices.size());
            const double impurity = (static_cast<double>(l0 + l1) * gini(l0, l1) +
                                     static_cast<double>(r0 + r1) * gini(r0, r1)) /
                                    n;
            if (impurity < best_impurity) {
                best_impurity = impurity;
                best_feature = static_cast<int32_t>(f);
                best_threshold = threshold;
            }
        }

        if (best_feature < 0) return make_leaf();

        std::vector<size_t> left_idx;
        std::vector<size_t> right_idx;
        left_idx.reserve(indices.size());
        right_idx.reserve(indices.size());
        for (size_t i : indices) {
            const size_t f = static_cast<size_t>(best_feature);
            (data[i].values[f] < best_threshold ? left_idx : right_idx).push_back(i);
        }

        nodes.emplace_back();
        const int32_t self = static_cast<int32_t>(nodes.size() - 1);
        nodes[self].is_leaf = false;
        nodes[self].feature = best_feature;
        nodes[self].threshold = best_threshold;
        nodes[self].count0 = c0;
        nodes[self].count1 = c1;
        const int32_t left = build(left_idx, depth + 1);
        const int32_t right = build(right_idx, depth + 1);
        nodes[self].left = left;
        nodes[self].right = right;
        return self;
    }
};

}  // namespace

TreeEnsembleModel train(const std::vector<FeatureVector>& vectors, const TrainParams& params,
                        uint64_t layout_fingerprint) {
    if (vectors.empty()) throw EmptyTraining("training set is empty");
    bool has0 = false;
    bool has1 = false;
    const size_t dim = vectors[0].values.size();
    for (const FeatureVector& fv : vectors) {
        if (fv.values.size() != dim) {
            throw DimensionMismatch("training vectors disagree on dimension");
        }
        (fv.label == 1 ? has1 : has0) = true;
    }
    if (!has0 || !has1) throw SingleClassTraining("training set needs both labels");

    TreeEnsembleModel model;
    model.n_estimators = params.n_estimators;
    model.max_depth = params.max_depth;
    model.k_features = params.k_features == 0
                           ? static_cast<size_t>(std::ceil(std::sqrt(static_cast<double>(dim))))
                           : std::min(params.k_features, dim);
    model.min_samples_split = params.min_samples_split;
    model.master_seed = params.master_seed;
    model.dim = dim;
    model.layout_fingerprint = layout_fingerprint;
    model.trees.resize(params.n_estimators);

    parallel_for(params.n_estimators, params.threads, [&](size_t t) {
        TreeBuilder builder{vectors,
                            dim,
                            model.k_features,
                            params.max_depth,
                            std::max<size_t>(2, params.min_samples_split),
                            SplitMix64(derive_seed(params.master_seed, t)),
                            {}};
        std::vector<size_t> all(vectors.size());
        std::iota(all.begin(), all.end(), size_t{0});
        builder.build(all, 0);
        model.trees[t].nodes = std::move(builder.nodes);
    });
    return model;
}

double predict_proba(const TreeEnsembleModel& model, const std::vector<double>& values) {
    if (values.size() != model.dim) {
        throw DimensionMismatch("vector dim " + std::to_string(values.size()) +
                                " does not match model dim " + std::to_string(model.dim));
    }
    double sum = 0.0;
    for (const Tree& tree : model.trees) {
        int32_t node = 0;
        while (!tree.nodes[node].is_leaf) {
            const TreeNode& n = tree.nodes[node];
            node = values[static_cast<size_t>(n.feature)] < n.threshold ? n.left : n.right;
        }
        const TreeNode& leaf = tree.nodes[node];
        sum += static_cast<double>(leaf.count1) / static_cast<double>(leaf.count0 + leaf.count1);
    }
    return model.trees.empty() ? 0.0 : sum / static_cast<double>(model.trees.size());
}

std::vector<std::string> rank_candidates(const TreeEnsembleModel& model,
                                         const std::vector<FeatureVector>& pairs) {
    if (pairs.empty()) return {};
    for (const FeatureVector& fv : pairs) {
        if (fv.query_id != pairs[0].query_id) {
            throw Error("rank_candidates requires pairs of a single query");
        }
    }
    std::vector<std::pair<double, std::string>> scored;
    scored.reserve(pairs.size());
    for (const FeatureVector& fv : pairs) {
        scored.emplace_back(predict_proba(model, fv.values), fv.entity_id);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<std::string> out;
    out.reserve(scored.size());
    for (auto& [score, id] : scored) out.push_back(std::move(id));
    return out;
}

std::vector<std::vector<std::string>> make_query_folds(const std::vector<FeatureVector>& vectors,
                                                       size_t n_folds, uint64_t seed) {
    std::unordered_set<std::string> seen;
    std::vector<std::string> qids;
    for (const FeatureVector& fv : vectors) {
        if (seen.insert(fv.query_id).second) qids.push_back(fv.query_id);
    }
    if (n_folds == 0) throw Error("n_folds must be >= 1");
    if (qids.size() < n_folds) {
        throw TooFewQueries("need at least " + std::to_string(n_folds) + " distinct queries, got " +
                            std::to_string(qids.size()));
    }
    // Depend only on the id set, not input order.
    std::sort(qids.begin(), qids.end());
    SplitMix64 rng(seed);
    for (size_t i = qids.size() - 1; i > 0; --i) {
        const size_t j = rng.next_below(i + 1);
        std::swap(qids[i], qids[j]);
    }
    std::vector<std::vector<std::string>> folds(n_folds);
    for (size_t i = 0; i < qids.size(); ++i) folds[i % n_folds].push_back(qids[i]);
    return folds;
}

CvResult cross_validate(const std::vector<FeatureVector>& vectors, const TrainParams& params,
                        size_t n_folds, uint64_t fold_seed, ApMode ap_mode) {
    CvResult result;
    result.fold_queries = make_query_folds(vectors, n_folds, fold_seed);

    std::unordered_map<std::string, std::vector<size_t>> by_query;
    for (size_t i = 0; i < vectors.size(); ++i) by_query[vectors[i].query_id].push_back(i);

    for (const std::vector<std::string>& fold : result.fold_queries) {
        const std::unordered_set<std::string> held_out(fold.begin(), fold.end());
        std::vector<FeatureVector> training;
        training.reserve(vectors.size());
        for (const FeatureVector& fv : vectors) {
            if (held_out.count(fv.query_id) == 0) training.push_back(fv);
        }
        const TreeEnsembleModel model = train(training, params);

        std::vector<RankedList> lists;
        lists.reserve(fold.size());
        for (const std::string& qid : fold) {
            std::vector<FeatureVector> pairs;
            for (size_t i : by_query.at(qid)) pairs.push_back(vectors[i]);
            std::unordered_map<std::string, int> label_by_entity;
            for (const FeatureVector& fv : pairs) label_by_entity[fv.entity_id] = fv.label;
            RankedList list;
            list.query_id = qid;
            for (const std::string& eid : rank_candidates(model, pairs)) {
                list.entries.push_back(RankedEntry{eid, label_by_entity.at(eid)});
            }
            lists.push_back(std::move(list));
        }
        result.fold_map.push_back(map_score(lists, ap_mode));
    }
    result.mean_map = std::accumulate(result.fold_map.begin(), result.fold_map.end(), 0.0) /
                      static_cast<double>(result.fold_map.size());
    return result;
}

std::vector<size_t> draw_n_estimator_candidates(size_t n_draws, uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<size_t> out;
    out.reserve(n_draws);
    for (size_t i = 0; i < n_draws; ++i) out.push_back(100 + rng.next_below(401));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

GridSearchResult grid_search(const std::vector<FeatureVector>& vectors,
                             const HyperparameterGrid& grid, const TrainParams& base_params,
                             size_t n_folds, uint64_t fold_seed, ApMode ap_mode) {
    if (grid.n_estimators_candidates.empty() || grid.max_depth_candidates.empty()) {
        throw Error("hyperparameter grid must be non-empty");
    }
    GridSearchResult result;
    for (size_t n_est : grid.n_estimators_candidates) {
        for (size_t depth : grid.max_depth_candidates) {
            TrainParams params = base_params;
            params.n_estimators = n_est;
            params.max_depth = depth;
            const CvResult cv = cross_validate(vectors, params, n_folds, fold_seed, ap_mode);
            result.cells.push_back(GridCell{n_est, depth, cv.mean_map, cv.fold_map});
        }
    }
    const GridCell* best = nullptr;
    for (const GridCell& cell : result.cells) {
        if (best == nullptr || cell.mean_map > best->mean_map ||
            (cell.mean_map == best->mean_map &&
             (cell.n_estimators < best->n_estimators ||
              (cell.n_estimators == best->n_estimators && cell.max_depth < best->max_depth)))) {
            best = &cell;
        }
    }
    result.best_n_estimators = best->n_estimators;
    result.best_max_depth = best->max_depth;
    result.best_mean_map = best->mean_map;
    return result;
}

std::vector<double> fuse(const std::vector<std::vector<double>>& scores_per_model, FuseMode mode) {
    if (scores_per_model.empty()) return {};
    const size_t n = scores_per_model[0].size();
    for (const auto& scores : scores_per_model) {
        if (scores.size() != n) throw LengthMismatch("score lists must have equal lengths");
    }
    std::vector<double> fused(n, 0.0);
    if (mode == FuseMode::Prob) {
        for (const auto& scores : scores_per_model) {
            for (size_t i = 0; i < n; ++i) fused[i] += scores[i];
        }
        for (double& v : fused) v /= static_cast<double>(scores_per_model.size());
        return fused;
    }
    for (const auto& scores : scores_per_model) {
        std::vector<size_t> order(n);
        std::iota(order.begin(), order.end(), size_t{0});
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            if (scores[a] != scores[b]) return scores[a] > scores[b];
            return a < b;
        });
        for (size_t pos = 0; pos < n; ++pos) {
            fused[order[pos]] += 1.0 / static_cast<double>(pos + 1);
        }
    }
    return fused;
}

// --- serialization -------------------------------------------------------

std::string TreeEnsembleModel::to_json() const {
    nlohmann::ordered_json obj;
    obj["version"] = 1;
    obj["model"] = "extra-trees";
    obj["n_estimators"] = n_estimators;
    obj["max_depth"] = max_depth;
    obj["k_features"] = k_features;
    obj["min_samples_split"] = min_samples_split;
    obj["master_seed"] = master_seed;
    obj["dim"] = dim;
    obj["layout_fingerprint"] = layout_fingerprint;
    nlohmann::ordered_json trees_json = nlohmann::ordered_json::array();
    for (const Tree& tree : trees) {
        nlohmann::ordered_json nodes_json = nlohmann::ordered_json::array();
        for (const TreeNode& node : tree.nodes) {
            if (node.is_leaf) {
                nodes_json.push_back({"L", node.count0, node.count1});
            } else {
                nodes_json.push_back({"S", node.feature, node.threshold, node.left, node.right});
            }
        }
        trees_json.push_back(std::move(nodes_json));
    }
    obj["trees"] = std::move(trees_json);
    return obj.dump();
}

TreeEnsembleModel TreeEnsembleModel::from_json(const std::string& text) {
    nlohmann::json obj;
    try {
        obj = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("bad model JSON: ") + e.what());
    }
    if (!obj.contains("version") || obj["version"].get<int>() != 1 ||
        obj.value("model", "") != "extra-trees") {
        throw Error("unsupported model file");
    }
    TreeEnsembleModel model;
    model.n_estimators = obj.at("n_estimators").get<size_t>();
    model.max_depth = obj.at("max_depth").get<size_t>();
    model.k_features = obj.at("k_features").get<size_t>();
    model.min_samples_split = obj.at("min_samples_split").get<size_t>();
    model.master_seed = obj.at("master_seed").get<uint64_t>();
    model.dim = obj.at("dim").get<size_t>();
    model.layout_fingerprint = obj.at("layout_fingerprint").get<uint64_t>();
    for (const auto& nodes_json : obj.at("trees")) {
        Tree tree;
        for (const auto& rec : nodes_json) {
            TreeNode node;
            const std::string tag = rec.at(0).get<std::string>();
            if (tag == "L") {
                node.is_leaf = true;
                node.count0 = rec.at(1).get<uint64_t>();
                node.count1 = rec.at(2).get<uint64_t>();
            } else if (tag == "S") {
                node.is_leaf = false;
                node.feature = rec.at(1).get<int32_t>();
                node.threshold = rec.at(2).get<double>();
                node.left = rec.at(3).get<int32_t>();
                node.right = rec.at(4).get<int32_t>();
            } else {
                throw Error("unknown node tag \"" + tag + "\" in model file");
            }
            tree.nodes.push_back(node);
        }
        model.trees.push_back(std::move(tree));
    }
    if (model.trees.size() != model.n_estimators) {
        throw Error("model file tree count does not match n_estimators");
    }
    return model;
}

void TreeEnsembleModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << to_json() << "\n";
}

TreeEnsembleModel TreeEnsembleModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

}  // namespace entityrank
