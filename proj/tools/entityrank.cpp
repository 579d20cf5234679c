// entityrank: batch pipeline for entity-search learning to rank.
//
//   synth -> featurize -> train/cv -> predict -> evaluate
//
// Every subcommand is deterministic given its inputs and seeds; see the
// README for the file formats.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "entityrank/corpus.hpp"
#include "entityrank/embedding.hpp"
#include "entityrank/errors.hpp"
#include "entityrank/evaluation.hpp"
#include "entityrank/feature_matrix.hpp"
#include "entityrank/lexical.hpp"
#include "entityrank/parallel.hpp"
#include "entityrank/ranker.hpp"
#include "entityrank/semantic.hpp"
#include "entityrank/synthetic.hpp"

namespace {

using namespace entityrank;

/// Flat JSON object as a CLI11 config source: {"k1": 1.2, "out": "x.letor"}.
/// Command-line flags override file values.
class JsonConfig : public CLI::Config {
  public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override {
        return "{}\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(input);
        } catch (const nlohmann::json::exception& e) {
            throw CLI::FileError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!obj.is_object()) throw CLI::FileError("config must be a JSON object");
        std::vector<CLI::ConfigItem> items;
        for (const auto& [key, value] : obj.items()) {
            CLI::ConfigItem item;
            item.name = key;
            if (value.is_array()) {
                for (const auto& element : value) {
                    item.inputs.push_back(element.is_string() ? element.get<std::string>()
                                                              : element.dump());
                }
            } else if (value.is_string()) {
                item.inputs.push_back(value.get<std::string>());
            } else {
                item.inputs.push_back(value.dump());
            }
            items.push_back(std::move(item));
        }
        return items;
    }
};

size_t default_threads() {
    if (const char* env = std::getenv("ENTITYRANK_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0') return static_cast<size_t>(v);
    }
    return 0;  // auto
}

void attach_config(CLI::App* cmd) {
    cmd->config_formatter(std::make_shared<JsonConfig>());
    cmd->set_config("--config", "", "JSON config file; flags given on the command line win");
}

struct CommonFeatureOptions {
    LexicalParams lexical;
    SemanticOptions semantic;
    std::string terminators = std::string(kDefaultSentenceTerminators);
};

void add_feature_flags(CLI::App* cmd, CommonFeatureOptions& opts) {
    cmd->add_option("--k1", opts.lexical.k1, "BM25 k1")->capture_default_str();
    cmd->add_option("--k3", opts.lexical.k3, "BM25 k3 (query-side saturation)")
        ->capture_default_str();
    cmd->add_option("--b", opts.lexical.b, "BM25 length normalization")->capture_default_str();
    cmd->add_option("--lambda-jm", opts.lexical.lambda_jm, "Jelinek-Mercer lambda")
        ->capture_default_str();
    cmd->add_option("--mu-dir", opts.lexical.mu_dir, "Dirichlet prior mu")->capture_default_str();
    cmd->add_option("--delta-abs", opts.lexical.delta_abs, "absolute discounting delta")
        ->capture_default_str();
    cmd->add_option("--prob-floor", opts.lexical.prob_floor,
                    "floor applied to smoothed probabilities before the log")
        ->capture_default_str();
    cmd->add_flag("--clamp-idf", opts.lexical.clamp_negative_idf,
                  "clamp negative IDF values at zero");
    cmd->add_flag("--abs-literal-denom", opts.lexical.abs_literal_denominator,
                  "absolute discounting with the summed query-term-frequency denominator");
    cmd->add_flag("--sim-inf-norm", opts.semantic.inf_norm,
                  "word-sentence similarity as max |dot| instead of max dot");
    cmd->add_option("--terminators", opts.terminators,
                    "sentence terminator codepoints (UTF-8 string)")
        ->capture_default_str();
}

EmbeddingTable load_embeddings(const std::string& path, const std::string& format,
                               uint64_t oov_seed) {
    if (format == "text") return load_word2vec_text(path, oov_seed);
    if (format == "binary") return load_word2vec_binary(path, oov_seed);
    return load_word2vec_auto(path, oov_seed);
}

std::vector<size_t> parse_size_list(const std::string& csv, const char* what) {
    std::vector<size_t> out;
    std::stringstream ss(csv);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty()) continue;
        try {
            out.push_back(static_cast<size_t>(std::stoul(part)));
        } catch (const std::exception&) {
            throw Error(std::string("bad ") + what + " list: " + csv);
        }
    }
    if (out.empty()) throw Error(std::string(what) + " list is empty");
    return out;
}

// "100,300x4,8" -> candidates x depths
HyperparameterGrid parse_grid(const std::string& spec) {
    const size_t x = spec.find('x');
    if (x == std::string::npos) throw Error("grid must look like \"100,300x4,8,12\"");
    HyperparameterGrid grid;
    grid.n_estimators_candidates = parse_size_list(spec.substr(0, x), "n_estimators");
    grid.max_depth_candidates = parse_size_list(spec.substr(x + 1), "max_depth");
    return grid;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

// --- subcommand bodies ---------------------------------------------------

int run_ingest(const std::string& corpus_path, const std::string& queries_path,
               const std::string& pairs_path, const CommonFeatureOptions& opts) {
    const std::vector<Document> docs = load_corpus_jsonl(corpus_path);
    const std::vector<Query> queries = load_queries_jsonl(queries_path);
    const std::vector<LabeledPair> pairs = load_pairs_tsv(pairs_path);

    std::unordered_set<std::string> qids;
    for (const Query& q : queries) qids.insert(q.query_id);
    std::unordered_set<std::string> eids;
    for (const Document& d : docs) eids.insert(d.entity_id);
    size_t relevant = 0;
    for (const LabeledPair& pair : pairs) {
        if (qids.count(pair.query_id) == 0)
            throw Error("pairs reference unknown query_id \"" + pair.query_id + "\"");
        if (eids.count(pair.entity_id) == 0)
            throw Error("pairs reference unknown entity_id \"" + pair.entity_id + "\"");
        relevant += static_cast<size_t>(pair.label);
    }

    std::cout << "documents\t" << docs.size() << "\n";
    std::cout << "queries\t" << queries.size() << "\n";
    std::cout << "pairs\t" << pairs.size() << "\trelevant\t" << relevant << "\n";

    bool all_segmented = true;
    for (const Document& d : docs) {
        if (!d.seg_title || !d.seg_body) {
            all_segmented = false;
            break;
        }
    }
    for (const Query& q : queries) {
        if (!q.seg_text) all_segmented = false;
    }
    std::vector<Tokenization> toks = {Tokenization::TwoGram};
    if (all_segmented) toks.push_back(Tokenization::Seg);
    for (Tokenization tok : toks) {
        const CorpusStats stats = build_corpus_stats(docs, tok, opts.terminators);
        for (StreamKind kind : kAllStreamKinds) {
            const StreamStats& s = stats.stream(kind);
            std::cout << std::string(to_string(tok)) << "." << std::string(to_string(kind))
                      << "\ttokens\t" << s.corpus_len << "\tvocab\t" << s.df.size() << "\n";
        }
    }
    if (!all_segmented) std::cout << "seg\tunavailable (missing seg fields)\n";
    return 0;
}

int run_featurize(const std::string& corpus_path, const std::string& queries_path,
                  const std::string& pairs_path, const std::string& embeddings_path,
                  const std::string& embeddings_format, const std::string& layout_spec,
                  const std::string& out_path, uint64_t oov_seed, size_t threads,
                  const CommonFeatureOptions& opts) {
    const std::vector<Document> docs = load_corpus_jsonl(corpus_path);
    const std::vector<Query> queries = load_queries_jsonl(queries_path);
    const std::vector<LabeledPair> pairs = load_pairs_tsv(pairs_path);
    const EmbeddingTable table = load_embeddings(embeddings_path, embeddings_format, oov_seed);
    const FeatureLayout layout = FeatureLayout::parse_spec(layout_spec);
    const StatsByTokenization stats = build_stats_for_layout(docs, layout, opts.terminators);
    const std::vector<FeatureVector> vectors =
        featurize_pairs(queries, docs, pairs, stats, table, layout, opts.lexical, opts.semantic,
                        opts.terminators, threads);
    write_letor(vectors, layout, out_path);
    std::cout << "wrote " << vectors.size() << " vectors of dim " << layout.total_dim() << " to "
              << out_path << "\n";
    return 0;
}

int run_train(const std::string& features_path, const std::string& model_out,
              std::optional<size_t> n_estimators, std::optional<size_t> max_depth,
              size_t n_estimator_draws, const std::string& depths_csv, size_t folds,
              uint64_t seed, uint64_t fold_seed, const std::string& ap_mode_name,
              size_t threads) {
    const LetorFile letor = read_letor(features_path);
    const ApMode ap_mode = parse_ap_mode(ap_mode_name);

    TrainParams params;
    params.master_seed = seed;
    params.threads = threads;

    if (n_estimators && max_depth) {
        params.n_estimators = *n_estimators;
        params.max_depth = *max_depth;
    } else {
        HyperparameterGrid grid;
        grid.n_estimators_candidates =
            n_estimators ? std::vector<size_t>{*n_estimators}
                         : draw_n_estimator_candidates(n_estimator_draws, seed);
        grid.max_depth_candidates = max_depth ? std::vector<size_t>{*max_depth}
                                              : parse_size_list(depths_csv, "max_depth");
        const GridSearchResult search =
            grid_search(letor.vectors, grid, params, folds, fold_seed, ap_mode);
        params.n_estimators = search.best_n_estimators;
        params.max_depth = search.best_max_depth;
        std::cout << "grid best\tn_estimators\t" << params.n_estimators << "\tmax_depth\t"
                  << params.max_depth << "\tcv_map\t" << format_double(search.best_mean_map)
                  << "\n";
    }

    const TreeEnsembleModel model = train(letor.vectors, params, letor.layout.fingerprint());
    model.save(model_out);
    std::cout << "trained " << model.n_estimators << " trees (depth " << model.max_depth
              << ") on " << letor.vectors.size() << " pairs, saved to " << model_out << "\n";
    return 0;
}

int run_cv(const std::string& features_path, const std::string& grid_spec,
           size_t n_estimator_draws, size_t folds, uint64_t seed, uint64_t fold_seed,
           const std::string& ap_mode_name, size_t threads) {
    const LetorFile letor = read_letor(features_path);
    const ApMode ap_mode = parse_ap_mode(ap_mode_name);

    HyperparameterGrid grid;
    if (!grid_spec.empty()) {
        grid = parse_grid(grid_spec);
    } else {
        grid.n_estimators_candidates = draw_n_estimator_candidates(n_estimator_draws, seed);
    }

    TrainParams base;
    base.master_seed = seed;
    base.threads = threads;
    const GridSearchResult search =
        grid_search(letor.vectors, grid, base, folds, fold_seed, ap_mode);

    std::cout << "n_estimators\tmax_depth\tmean_map";
    for (size_t f = 0; f < folds; ++f) std::cout << "\tfold" << (f + 1);
    std::cout << "\n";
    for (const GridCell& cell : search.cells) {
        std::cout << cell.n_estimators << "\t" << cell.max_depth << "\t"
                  << format_double(cell.mean_map);
        for (double m : cell.fold_map) std::cout << "\t" << format_double(m);
        std::cout << "\n";
    }
    std::cout << "# best: n_estimators=" << search.best_n_estimators
              << " max_depth=" << search.best_max_depth
              << " mean_map=" << format_double(search.best_mean_map) << "\n";
    return 0;
}

int run_predict(const std::string& model_path, const std::string& features_path,
                const std::string& out_path, size_t threads) {
    const TreeEnsembleModel model = TreeEnsembleModel::load(model_path);
    const LetorFile letor = read_letor(features_path);
    if (model.layout_fingerprint != 0 &&
        model.layout_fingerprint != letor.layout.fingerprint()) {
        throw Error("feature layout does not match the one the model was trained on");
    }

    std::vector<double> probas(letor.vectors.size());
    parallel_for(letor.vectors.size(), threads,
                 [&](size_t i) { probas[i] = predict_proba(model, letor.vectors[i].values); });

    // Group pairs by query in first-appearance order, rank within a query
    // by probability (ties: ascending entity_id).
    std::vector<std::string> query_order;
    std::unordered_map<std::string, std::vector<size_t>> by_query;
    for (size_t i = 0; i < letor.vectors.size(); ++i) {
        auto [it, inserted] = by_query.try_emplace(letor.vectors[i].query_id);
        if (inserted) query_order.push_back(letor.vectors[i].query_id);
        it->second.push_back(i);
    }

    std::vector<Prediction> rows;
    rows.reserve(letor.vectors.size());
    for (const std::string& qid : query_order) {
        std::vector<size_t> idx = by_query[qid];
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
            if (probas[a] != probas[b]) return probas[a] > probas[b];
            return letor.vectors[a].entity_id < letor.vectors[b].entity_id;
        });
        for (size_t r = 0; r < idx.size(); ++r) {
            rows.push_back(Prediction{qid, letor.vectors[idx[r]].entity_id, probas[idx[r]], r + 1});
        }
    }
    write_predictions_tsv(rows, out_path);
    std::cout << "wrote " << rows.size() << " predictions for " << query_order.size()
              << " queries to " << out_path << "\n";
    return 0;
}

int run_evaluate(const std::string& predictions_path, const std::string& qrels_path,
                 const std::string& ap_mode_name) {
    const ApMode ap_mode = parse_ap_mode(ap_mode_name);
    const std::vector<Prediction> predictions = load_predictions_tsv(predictions_path);
    const std::vector<LabeledPair> qrels = load_pairs_tsv(qrels_path);
    const std::vector<RankedList> lists = build_ranked_lists(predictions, qrels);
    if (lists.empty()) throw Error("no predictions to evaluate");

    std::cout << "query_id\tap\trr\n";
    for (const RankedList& list : lists) {
        std::cout << list.query_id << "\t" << format_double(avgprec(list, ap_mode)) << "\t"
                  << format_double(mrr({list})) << "\n";
    }
    std::cout << "ALL\t" << format_double(map_score(lists, ap_mode)) << "\t"
              << format_double(mrr(lists)) << "\n";
    return 0;
}

int run_synth(const std::optional<std::string>& spec_path, const std::string& out_dir,
              const SynthSpec& overrides, const std::array<bool, 7>& has_override) {
    SynthSpec spec = spec_path ? SynthSpec::from_json_file(*spec_path) : SynthSpec{};
    if (has_override[0]) spec.n_queries = overrides.n_queries;
    if (has_override[1]) spec.candidates_per_query = overrides.candidates_per_query;
    if (has_override[2]) spec.vocab_size = overrides.vocab_size;
    if (has_override[3]) spec.relevant_fraction = overrides.relevant_fraction;
    if (has_override[4]) spec.overlap_strength = overrides.overlap_strength;
    if (has_override[5]) spec.seed = overrides.seed;
    if (has_override[6]) spec.embedding_dim = overrides.embedding_dim;
    spec.validate();

    std::filesystem::create_directories(out_dir);
    generate_files(spec, out_dir);
    std::cout << "wrote corpus.jsonl, queries.jsonl, pairs.tsv, embeddings.txt to " << out_dir
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entity search ranking pipeline: features, extra-trees ranker, evaluation"};
    app.require_subcommand(1);
    int rc = 0;

    // ingest
    auto* ingest = app.add_subcommand("ingest", "validate corpus/queries/pairs files and print stats");
    attach_config(ingest);
    auto ingest_opts = std::make_shared<CommonFeatureOptions>();
    auto ingest_paths = std::make_shared<std::array<std::string, 3>>();
    ingest->add_option("--corpus", (*ingest_paths)[0], "corpus JSONL")->required();
    ingest->add_option("--queries", (*ingest_paths)[1], "queries JSONL")->required();
    ingest->add_option("--pairs", (*ingest_paths)[2], "labeled pairs TSV")->required();
    add_feature_flags(ingest, *ingest_opts);
    ingest->callback([=, &rc]() {
        rc = run_ingest((*ingest_paths)[0], (*ingest_paths)[1], (*ingest_paths)[2], *ingest_opts);
    });

    // featurize
    auto* feat = app.add_subcommand("featurize", "extract feature vectors to a LETOR file");
    attach_config(feat);
    auto feat_opts = std::make_shared<CommonFeatureOptions>();
    auto feat_str = std::make_shared<std::array<std::string, 7>>();
    auto feat_oov_seed = std::make_shared<uint64_t>(kDefaultOovSeed);
    auto feat_threads = std::make_shared<size_t>(default_threads());
    (*feat_str)[4] = "auto";
    (*feat_str)[5] = "2gram:all";
    feat->add_option("--corpus", (*feat_str)[0], "corpus JSONL")->required();
    feat->add_option("--queries", (*feat_str)[1], "queries JSONL")->required();
    feat->add_option("--pairs", (*feat_str)[2], "labeled pairs TSV")->required();
    feat->add_option("--embeddings", (*feat_str)[3], "word2vec embedding file")->required();
    feat->add_option("--embeddings-format", (*feat_str)[4], "text|binary|auto")
        ->check(CLI::IsMember({"text", "binary", "auto"}))
        ->capture_default_str();
    feat->add_option("--layout", (*feat_str)[5],
                     "feature layout spec \"<tokenizations>:<streams>\", e.g. "
                     "\"seg,2gram:title,body,titlebody\" or \"2gram:all\"")
        ->capture_default_str();
    feat->add_option("--out", (*feat_str)[6], "output LETOR file")->required();
    feat->add_option("--oov-seed", *feat_oov_seed, "seed for out-of-vocabulary vectors")
        ->capture_default_str();
    feat->add_option("--threads", *feat_threads, "worker threads (0 = auto)")
        ->capture_default_str();
    add_feature_flags(feat, *feat_opts);
    feat->callback([=, &rc]() {
        rc = run_featurize((*feat_str)[0], (*feat_str)[1], (*feat_str)[2], (*feat_str)[3],
                           (*feat_str)[4], (*feat_str)[5], (*feat_str)[6], *feat_oov_seed,
                           *feat_threads, *feat_opts);
    });

    // train
    auto* train_cmd = app.add_subcommand("train", "train the extra-trees ranker");
    attach_config(train_cmd);
    auto train_str = std::make_shared<std::array<std::string, 2>>();
    auto train_nest = std::make_shared<size_t>(0);
    auto train_depth = std::make_shared<size_t>(0);
    auto train_draws = std::make_shared<size_t>(5);
    auto train_depths = std::make_shared<std::string>("4,6,8,10,12");
    auto train_folds = std::make_shared<size_t>(10);
    auto train_seed = std::make_shared<uint64_t>(kDefaultMasterSeed);
    auto train_fold_seed = std::make_shared<uint64_t>(kDefaultFoldSeed);
    auto train_ap = std::make_shared<std::string>("standard");
    auto train_threads = std::make_shared<size_t>(default_threads());
    train_cmd->add_option("--features", (*train_str)[0], "LETOR feature file")->required();
    train_cmd->add_option("--model-out", (*train_str)[1], "model JSON output")->required();
    auto* opt_nest = train_cmd->add_option("--n-estimators", *train_nest,
                                           "tree count; omit to pick by cross-validation");
    auto* opt_depth = train_cmd->add_option("--max-depth", *train_depth,
                                            "depth cap; omit to pick by cross-validation");
    train_cmd->add_option("--n-estimators-draws", *train_draws,
                          "how many seeded tree-count candidates to draw from [100,500]")
        ->capture_default_str();
    train_cmd->add_option("--depths", *train_depths, "depth candidates for the grid")
        ->capture_default_str();
    train_cmd->add_option("--folds", *train_folds, "cross-validation folds")->capture_default_str();
    train_cmd->add_option("--seed", *train_seed, "master seed for tree construction")
        ->capture_default_str();
    train_cmd->add_option("--fold-seed", *train_fold_seed, "seed for the query fold shuffle")
        ->capture_default_str();
    train_cmd->add_option("--ap-mode", *train_ap, "standard|paper")
        ->check(CLI::IsMember({"standard", "paper"}))
        ->capture_default_str();
    train_cmd->add_option("--threads", *train_threads, "worker threads (0 = auto)")
        ->capture_default_str();
    train_cmd->callback([=, &rc]() {
        rc = run_train((*train_str)[0], (*train_str)[1],
                       opt_nest->count() ? std::optional<size_t>(*train_nest) : std::nullopt,
                       opt_depth->count() ? std::optional<size_t>(*train_depth) : std::nullopt,
                       *train_draws, *train_depths, *train_folds, *train_seed, *train_fold_seed,
                       *train_ap, *train_threads);
    });

    // cv
    auto* cv_cmd = app.add_subcommand("cv", "query-grouped cross-validation over a hyperparameter grid");
    attach_config(cv_cmd);
    auto cv_features = std::make_shared<std::string>();
    auto cv_grid = std::make_shared<std::string>();
    auto cv_draws = std::make_shared<size_t>(5);
    auto cv_folds = std::make_shared<size_t>(10);
    auto cv_seed = std::make_shared<uint64_t>(kDefaultMasterSeed);
    auto cv_fold_seed = std::make_shared<uint64_t>(kDefaultFoldSeed);
    auto cv_ap = std::make_shared<std::string>("standard");
    auto cv_threads = std::make_shared<size_t>(default_threads());
    cv_cmd->add_option("--features", *cv_features, "LETOR feature file")->required();
    cv_cmd->add_option("--grid", *cv_grid,
                       "explicit grid \"<n_estimators list>x<depth list>\", e.g. \"100,300x4,8,12\"; "
                       "omitted: seeded draws from [100,500] x {4,6,8,10,12}");
    cv_cmd->add_option("--n-estimators-draws", *cv_draws, "seeded tree-count candidates to draw")
        ->capture_default_str();
    cv_cmd->add_option("--folds", *cv_folds, "fold count")->capture_default_str();
    cv_cmd->add_option("--seed", *cv_seed, "master seed (tree construction and draws)")
        ->capture_default_str();
    cv_cmd->add_option("--fold-seed", *cv_fold_seed, "seed for the query fold shuffle")
        ->capture_default_str();
    cv_cmd->add_option("--ap-mode", *cv_ap, "standard|paper")
        ->check(CLI::IsMember({"standard", "paper"}))
        ->capture_default_str();
    cv_cmd->add_option("--threads", *cv_threads, "worker threads (0 = auto)")
        ->capture_default_str();
    cv_cmd->callback([=, &rc]() {
        rc = run_cv(*cv_features, *cv_grid, *cv_draws, *cv_folds, *cv_seed, *cv_fold_seed, *cv_ap,
                    *cv_threads);
    });

    // predict
    auto* pred = app.add_subcommand("predict", "score and rank pairs with a trained model");
    attach_config(pred);
    auto pred_str = std::make_shared<std::array<std::string, 3>>();
    auto pred_threads = std::make_shared<size_t>(default_threads());
    pred->add_option("--model", (*pred_str)[0], "model JSON")->required();
    pred->add_option("--features", (*pred_str)[1], "LETOR feature file")->required();
    pred->add_option("--out", (*pred_str)[2], "output TSV (query_id, entity_id, score, rank)")
        ->required();
    pred->add_option("--threads", *pred_threads, "worker threads (0 = auto)")
        ->capture_default_str();
    pred->callback([=, &rc]() {
        rc = run_predict((*pred_str)[0], (*pred_str)[1], (*pred_str)[2], *pred_threads);
    });

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "MAP / MRR against qrels");
    attach_config(eval);
    auto eval_str = std::make_shared<std::array<std::string, 2>>();
    auto eval_ap = std::make_shared<std::string>("standard");
    eval->add_option("--predictions", (*eval_str)[0], "predictions TSV from `predict`")
        ->required();
    eval->add_option("--qrels", (*eval_str)[1], "labeled pairs TSV")->required();
    eval->add_option("--ap-mode", *eval_ap, "standard|paper")
        ->check(CLI::IsMember({"standard", "paper"}))
        ->capture_default_str();
    eval->callback([=, &rc]() {
        rc = run_evaluate((*eval_str)[0], (*eval_str)[1], *eval_ap);
    });

    // synth
    auto* synth = app.add_subcommand("synth", "generate a seeded synthetic dataset");
    attach_config(synth);
    auto synth_spec_path = std::make_shared<std::string>();
    auto synth_out = std::make_shared<std::string>();
    auto synth_overrides = std::make_shared<SynthSpec>();
    auto* opt_spec = synth->add_option("--spec", *synth_spec_path, "SynthSpec JSON file");
    synth->add_option("--out-dir", *synth_out, "output directory")->required();
    auto* o0 = synth->add_option("--n-queries", synth_overrides->n_queries, "query count");
    auto* o1 = synth->add_option("--candidates-per-query", synth_overrides->candidates_per_query,
                                 "candidates per query");
    auto* o2 = synth->add_option("--vocab-size", synth_overrides->vocab_size, "codepoint alphabet size");
    auto* o3 = synth->add_option("--relevant-fraction", synth_overrides->relevant_fraction,
                                 "fraction of relevant candidates per query");
    auto* o4 = synth->add_option("--overlap-strength", synth_overrides->overlap_strength,
                                 "probability a relevant sentence embeds the query tokens");
    auto* o5 = synth->add_option("--seed", synth_overrides->seed, "generation seed");
    auto* o6 = synth->add_option("--embedding-dim", synth_overrides->embedding_dim,
                                 "toy embedding dimension");
    synth->callback([=, &rc]() {
        rc = run_synth(opt_spec->count() ? std::optional<std::string>(*synth_spec_path)
                                         : std::nullopt,
                       *synth_out, *synth_overrides,
                       {o0->count() > 0, o1->count() > 0, o2->count() > 0, o3->count() > 0,
                        o4->count() > 0, o5->count() > 0, o6->count() > 0});
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // exit 2 on usage errors, 0 for --help
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
