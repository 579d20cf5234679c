#include "entityrank/feature_matrix.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "entityrank/errors.hpp"
#include "entityrank/parallel.hpp"
#include "entityrank/rng.hpp"

namespace entityrank {

const std::array<std::string, 15> kBlockFeatureNames = {
    "sum_tf",  "sum_idf", "sum_tfidf", "bm25",   "lmir_jm", "lmir_dir", "lmir_abs", "max_ss",
    "max_sws", "max_ms",  "max_mws",   "avg_ss", "avg_sws", "avg_ms",   "avg_mws"};

std::string FeatureLayout::column_name(size_t index) const {
    const size_t block = index / 15;
    const size_t feat = index % 15;
    const size_t per_tok = streams.size();
    const Tokenization tok = tokenizations[block / per_tok];
    const StreamKind kind = streams[block % per_tok];
    return std::string(to_string(tok)) + "." + std::string(to_string(kind)) + "." +
           kBlockFeatureNames[feat];
}

std::string FeatureLayout::to_json() const {
    nlohmann::ordered_json obj;
    obj["version"] = 1;
    std::vector<std::string> toks;
    for (Tokenization t : tokenizations) toks.emplace_back(to_string(t));
    std::vector<std::string> strs;
    for (StreamKind s : streams) strs.emplace_back(to_string(s));
    obj["tokenizations"] = toks;
    obj["streams"] = strs;
    obj["block_features"] = kBlockFeatureNames;
    obj["total_dim"] = total_dim();
    nlohmann::ordered_json cols = nlohmann::ordered_json::array();
    for (size_t i = 0; i < total_dim(); ++i) {
        nlohmann::ordered_json col;
        col["index"] = i + 1;  // LETOR columns are 1-based
        col["name"] = column_name(i);
        cols.push_back(col);
    }
    obj["columns"] = cols;
    return obj.dump(2);
}

FeatureLayout FeatureLayout::from_json(const std::string& text) {
    nlohmann::json obj;
    try {
        obj = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("bad layout JSON: ") + e.what());
    }
    FeatureLayout layout;
    layout.tokenizations.clear();
    layout.streams.clear();
    for (const auto& t : obj.at("tokenizations")) {
        layout.tokenizations.push_back(parse_tokenization(t.get<std::string>()));
    }
    for (const auto& s : obj.at("streams")) {
        layout.streams.push_back(parse_stream_kind(s.get<std::string>()));
    }
    if (layout.tokenizations.empty() || layout.streams.empty()) {
        throw Error("layout must name at least one tokenization and one stream");
    }
    if (obj.contains("total_dim") && obj["total_dim"].get<size_t>() != layout.total_dim()) {
        throw Error("layout total_dim does not match tokenizations x streams x 15");
    }
    return layout;
}

uint64_t FeatureLayout::fingerprint() const {
    std::string canonical;
    for (Tokenization t : tokenizations) {
        canonical += to_string(t);
        canonical += ';';
    }
    canonical += '|';
    for (StreamKind s : streams) {
        canonical += to_string(s);
        canonical += ';';
    }
    return fnv1a64(canonical);
}

FeatureLayout FeatureLayout::parse_spec(const std::string& spec) {
    const size_t colon = spec.find(':');
    if (colon == std::string::npos) {
        throw Error("layout spec must look like \"2gram:title,body,titlebody\"");
    }
    auto split_csv = [](const std::string& s) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (!part.empty()) parts.push_back(part);
        }
        return parts;
    };
    FeatureLayout layout;
    layout.tokenizations.clear();
    layout.streams.clear();
    for (const std::string& t : split_csv(spec.substr(0, colon))) {
        layout.tokenizations.push_back(parse_tokenization(t));
    }
    const std::string streams_part = spec.substr(colon + 1);
    if (streams_part == "all") {
        layout.streams = {StreamKind::Title, StreamKind::Body, StreamKind::TitleBody};
    } else {
        for (const std::string& s : split_csv(streams_part)) {
            layout.streams.push_back(parse_stream_kind(s));
        }
    }
    if (layout.tokenizations.empty() || layout.streams.empty()) {
        throw Error("layout spec must name at least one tokenization and one stream");
    }
    return layout;
}

StatsByTokenization build_stats_for_layout(const std::vector<Document>& docs,
                                           const FeatureLayout& layout,
                                           std::string_view terminators) {
    StatsByTokenization stats;
    for (Tokenization tok : layout.tokenizations) {
        if (stats.count(tok) == 0) stats.emplace(tok, build_corpus_stats(docs, tok, terminators));
    }
    return stats;
}

FeatureVector featurize_pair(const Query& query, const Document& doc, int label,
                             const StatsByTokenization& stats, const EmbeddingTable& table,
                             const FeatureLayout& layout, const LexicalParams& params,
                             const SemanticOptions& sem_opts, std::string_view terminators) {
    FeatureVector out;
    out.query_id = query.query_id;
    out.entity_id = doc.entity_id;
    out.label = label;
    out.values.reserve(layout.total_dim());

    for (Tokenization tok : layout.tokenizations) {
        auto it = stats.find(tok);
        if (it == stats.end()) {
            throw Error(std::string("no corpus stats for tokenization ") +
                        std::string(to_string(tok)));
        }
        const CorpusStats& cs = it->second;
        const std::vector<std::string> qtokens = query_tokens(query, tok, terminators);
        const std::array<TokenStream, 3> streams = build_streams(doc, tok, terminators);

        for (StreamKind kind : layout.streams) {
            const TokenStream& stream = streams[static_cast<size_t>(kind)];
            out.values.push_back(sum_tf(qtokens, stream));
            out.values.push_back(sum_idf(qtokens, kind, cs, params));
            out.values.push_back(sum_tfidf(qtokens, stream, cs, params));
            out.values.push_back(bm25(qtokens, doc.entity_id, kind, cs, params));
            out.values.push_back(lmir_jm(qtokens, doc.entity_id, kind, cs, params));
            out.values.push_back(lmir_dir(qtokens, doc.entity_id, kind, cs, params));
            out.values.push_back(lmir_abs(qtokens, doc.entity_id, kind, cs, params));
            const IdfFn idf_fn = [&](const std::string& term) {
                return effective_idf(term, kind, cs, params);
            };
            for (double v : stream_semantic_features(qtokens, stream, table, idf_fn, sem_opts)) {
                out.values.push_back(v);
            }
        }
    }
    return out;
}

std::vector<FeatureVector> featurize_pairs(const std::vector<Query>& queries,
                                           const std::vector<Document>& docs,
                                           const std::vector<LabeledPair>& pairs,
                                           const StatsByTokenization& stats,
                                           const EmbeddingTable& table,
                                           const FeatureLayout& layout,
                                           const LexicalParams& params,
                                           const SemanticOptions& sem_opts,
                                           std::string_view terminators, size_t threads) {
    std::unordered_map<std::string, const Query*> query_by_id;
    for (const Query& q : queries) query_by_id[q.query_id] = &q;
    std::unordered_map<std::string, const Document*> doc_by_id;
    for (const Document& d : docs) doc_by_id[d.entity_id] = &d;

    std::vector<FeatureVector> out(pairs.size());
    parallel_for(pairs.size(), threads, [&](size_t i) {
        const LabeledPair& pair = pairs[i];
        auto q = query_by_id.find(pair.query_id);
        if (q == query_by_id.end()) throw Error("pair references unknown query_id \"" + pair.query_id + "\"");
        auto d = doc_by_id.find(pair.entity_id);
        if (d == doc_by_id.end()) throw Error("pair references unknown entity_id \"" + pair.entity_id + "\"");
        out[i] = featurize_pair(*q->second, *d->second, pair.label, stats, table, layout, params,
                                sem_opts, terminators);
    });
    return out;
}

namespace {

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void check_id_token(const std::string& id) {
    if (id.find_first_of(" \t#") != std::string::npos) {
        throw Error("id \"" + id + "\" cannot be written to a LETOR file (contains whitespace or '#')");
    }
}

}  // namespace

void write_letor(const std::vector<FeatureVector>& vectors, const FeatureLayout& layout,
                 const std::string& path) {
    const size_t dim = layout.total_dim();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    for (const FeatureVector& fv : vectors) {
        if (fv.values.size() != dim) {
            throw DimensionMismatch("feature vector for (" + fv.query_id + ", " + fv.entity_id +
                                    ") has dim " + std::to_string(fv.values.size()) +
                                    ", layout expects " + std::to_string(dim));
        }
        check_id_token(fv.query_id);
        check_id_token(fv.entity_id);
        out << fv.label << " qid:" << fv.query_id;
        for (size_t k = 0; k < dim; ++k) {
            out << ' ' << (k + 1) << ':' << format_value(fv.values[k]);
        }
        out << " # " << fv.entity_id << "\n";
    }

    std::ofstream side(path + ".layout.json", std::ios::binary);
    if (!side) throw Error("cannot write " + path + ".layout.json");
    side << layout.to_json() << "\n";
}

LetorFile read_letor(const std::string& path) {
    LetorFile result;

    std::ifstream side(path + ".layout.json", std::ios::binary);
    if (!side) throw Error("missing layout sidecar " + path + ".layout.json");
    std::stringstream buf;
    buf << side.rdbuf();
    result.layout = FeatureLayout::from_json(buf.str());
    const size_t dim = result.layout.total_dim();

    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        FeatureVector fv;
        std::string token;
        if (!(ss >> token) || (token != "0" && token != "1")) {
            throw ParseError(path, lineno, "expected label 0 or 1");
        }
        fv.label = token == "1" ? 1 : 0;
        if (!(ss >> token) || token.rfind("qid:", 0) != 0 || token.size() <= 4) {
            throw ParseError(path, lineno, "expected qid:<query_id>");
        }
        fv.query_id = token.substr(4);
        fv.values.reserve(dim);
        for (size_t k = 1; k <= dim; ++k) {
            if (!(ss >> token)) {
                throw DimensionMismatch(path + " line " + std::to_string(lineno) + ": expected " +
                                        std::to_string(dim) + " features");
            }
            const std::string prefix = std::to_string(k) + ":";
            if (token.rfind(prefix, 0) != 0) {
                throw ParseError(path, lineno, "expected feature " + prefix + "<value>");
            }
            try {
                fv.values.push_back(std::stod(token.substr(prefix.size())));
            } catch (const std::exception&) {
                throw ParseError(path, lineno, "bad float in " + token);
            }
        }
        if (!(ss >> token)) {
            throw ParseError(path, lineno, "missing trailing \"# <entity_id>\"");
        }
        if (token == "#") {
            if (!(ss >> fv.entity_id)) throw ParseError(path, lineno, "missing entity_id after #");
        } else if (std::to_string(dim + 1) + ":" ==
                   token.substr(0, std::to_string(dim + 1).size() + 1)) {
            throw DimensionMismatch(path + " line " + std::to_string(lineno) + ": row has more than " +
                                    std::to_string(dim) + " features");
        } else {
            throw ParseError(path, lineno, "unexpected token \"" + token + "\"");
        }
        result.vectors.push_back(std::move(fv));
    }
    return result;
}

}  // namespace entityrank
