#include "entityrank/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "entityrank/errors.hpp"
#include "entityrank/unicode.hpp"

namespace entityrank {

std::string_view to_string(StreamKind kind) {
    switch (kind) {
        case StreamKind::Title: return "title";
        case StreamKind::Body: return "body";
        case StreamKind::TitleBody: return "titlebody";
    }
    return "?";
}

std::string_view to_string(Tokenization tok) {
    return tok == Tokenization::Seg ? "seg" : "2gram";
}

StreamKind parse_stream_kind(std::string_view name) {
    if (name == "title") return StreamKind::Title;
    if (name == "body") return StreamKind::Body;
    if (name == "titlebody") return StreamKind::TitleBody;
    throw Error("unknown stream kind: " + std::string(name));
}

Tokenization parse_tokenization(std::string_view name) {
    if (name == "seg") return Tokenization::Seg;
    if (name == "2gram") return Tokenization::TwoGram;
    throw Error("unknown tokenization: " + std::string(name));
}

std::vector<std::string> split_sentences(std::string_view text, std::string_view terminators) {
    const std::vector<uint32_t> term_cps = decode_utf8(terminators);
    const std::unordered_set<uint32_t> term_set(term_cps.begin(), term_cps.end());

    std::vector<std::string> sentences;
    std::string current;
    for (uint32_t cp : decode_utf8(text)) {
        if (term_set.count(cp) != 0) {
            if (!current.empty()) sentences.push_back(std::move(current));
            current.clear();
        } else {
            append_utf8(current, cp);
        }
    }
    if (!current.empty()) sentences.push_back(std::move(current));
    return sentences;
}

std::string strip_punctuation(std::string_view sentence) {
    std::string out;
    out.reserve(sentence.size());
    for (uint32_t cp : decode_utf8(sentence)) {
        if (!is_punctuation(cp)) append_utf8(out, cp);
    }
    return out;
}

std::vector<std::string> tokenize_2gram(std::string_view sentence) {
    const std::vector<uint32_t> cps = decode_utf8(sentence);
    std::vector<std::string> tokens;
    if (cps.empty()) return tokens;
    if (cps.size() == 1) {
        tokens.push_back(encode_utf8(cps));
        return tokens;
    }
    tokens.reserve(cps.size() - 1);
    for (size_t i = 0; i + 1 < cps.size(); ++i) {
        std::string tok;
        append_utf8(tok, cps[i]);
        append_utf8(tok, cps[i + 1]);
        tokens.push_back(std::move(tok));
    }
    return tokens;
}

namespace {

std::vector<std::vector<std::string>> twogram_sentences(std::string_view text,
                                                        std::string_view terminators) {
    std::vector<std::vector<std::string>> out;
    for (const std::string& sentence : split_sentences(text, terminators)) {
        std::vector<std::string> tokens =
            tokenize_2gram(ascii_lower(strip_punctuation(sentence)));
        if (!tokens.empty()) out.push_back(std::move(tokens));
    }
    return out;
}

// Seg tokens pass through punctuation stripping and ASCII lowering;
// tokens that end up empty are dropped.
std::vector<std::string> clean_seg_tokens(const std::vector<std::string>& tokens) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const std::string& tok : tokens) {
        std::string cleaned = ascii_lower(strip_punctuation(tok));
        if (!cleaned.empty()) out.push_back(std::move(cleaned));
    }
    return out;
}

std::vector<std::vector<std::string>> seg_sentences(
    const std::optional<std::vector<std::string>>& tokens, const char* field,
    const std::string& entity_id) {
    if (!tokens.has_value()) {
        throw MissingSegmentation("entity " + entity_id + ": Seg tokenization requested but " +
                                  field + " is missing");
    }
    std::vector<std::vector<std::string>> out;
    std::vector<std::string> cleaned = clean_seg_tokens(*tokens);
    if (!cleaned.empty()) out.push_back(std::move(cleaned));
    return out;
}

}  // namespace

std::array<TokenStream, 3> build_streams(const Document& doc, Tokenization tok,
                                         std::string_view terminators) {
    std::vector<std::vector<std::string>> title;
    std::vector<std::vector<std::string>> body;
    if (tok == Tokenization::TwoGram) {
        title = twogram_sentences(doc.title, terminators);
        body = twogram_sentences(doc.body, terminators);
    } else {
        title = seg_sentences(doc.seg_title, "seg_title", doc.entity_id);
        body = seg_sentences(doc.seg_body, "seg_body", doc.entity_id);
    }

    std::vector<std::vector<std::string>> title_body = title;
    title_body.insert(title_body.end(), body.begin(), body.end());

    return {TokenStream{StreamKind::Title, tok, std::move(title)},
            TokenStream{StreamKind::Body, tok, std::move(body)},
            TokenStream{StreamKind::TitleBody, tok, std::move(title_body)}};
}

std::vector<std::string> query_tokens(const Query& query, Tokenization tok,
                                      std::string_view terminators) {
    if (tok == Tokenization::Seg) {
        if (!query.seg_text.has_value()) {
            throw MissingSegmentation("query " + query.query_id +
                                      ": Seg tokenization requested but seg_text is missing");
        }
        return clean_seg_tokens(*query.seg_text);
    }
    std::vector<std::string> tokens;
    for (auto& sentence : twogram_sentences(query.text, terminators)) {
        tokens.insert(tokens.end(), sentence.begin(), sentence.end());
    }
    return tokens;
}

// --- file I/O -----------------------------------------------------------

namespace {

using nlohmann::json;

std::optional<std::vector<std::string>> read_string_array(const json& obj, const char* key) {
    if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
    if (!obj[key].is_array()) throw Error(std::string(key) + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& item : obj[key]) {
        if (!item.is_string()) throw Error(std::string(key) + " must be an array of strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

std::string read_string(const json& obj, const char* key, bool required) {
    if (!obj.contains(key)) {
        if (required) throw Error(std::string("missing field \"") + key + "\"");
        return {};
    }
    if (!obj[key].is_string()) throw Error(std::string("field \"") + key + "\" must be a string");
    return obj[key].get<std::string>();
}

template <typename Fn>
void for_each_jsonl(const std::string& path, Fn&& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(path, lineno, e.what());
        }
        try {
            fn(obj);
        } catch (const Error& e) {
            throw ParseError(path, lineno, e.what());
        }
    }
}

}  // namespace

std::vector<Document> load_corpus_jsonl(const std::string& path) {
    std::vector<Document> docs;
    std::unordered_set<std::string> seen;
    for_each_jsonl(path, [&](const json& obj) {
        Document doc;
        doc.entity_id = read_string(obj, "entity_id", true);
        if (doc.entity_id.empty()) throw Error("entity_id must be non-empty");
        if (!seen.insert(doc.entity_id).second)
            throw Error("duplicate entity_id \"" + doc.entity_id + "\"");
        doc.title = read_string(obj, "title", false);
        doc.body = read_string(obj, "body", false);
        doc.seg_title = read_string_array(obj, "seg_title");
        doc.seg_body = read_string_array(obj, "seg_body");
        docs.push_back(std::move(doc));
    });
    return docs;
}

std::vector<Query> load_queries_jsonl(const std::string& path) {
    std::vector<Query> queries;
    std::unordered_set<std::string> seen;
    for_each_jsonl(path, [&](const json& obj) {
        Query q;
        q.query_id = read_string(obj, "query_id", true);
        if (q.query_id.empty()) throw Error("query_id must be non-empty");
        if (!seen.insert(q.query_id).second)
            throw Error("duplicate query_id \"" + q.query_id + "\"");
        q.text = read_string(obj, "text", false);
        q.seg_text = read_string_array(obj, "seg_text");
        queries.push_back(std::move(q));
    });
    return queries;
}

std::vector<LabeledPair> load_pairs_tsv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::string line;
    size_t lineno = 0;
    std::vector<LabeledPair> pairs;
    std::unordered_set<std::string> seen;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, '\t')) fields.push_back(field);
        if (lineno == 1) {
            if (fields.size() != 3 || fields[0] != "query_id" || fields[1] != "entity_id" ||
                fields[2] != "label") {
                throw ParseError(path, lineno,
                                 "expected header \"query_id\\tentity_id\\tlabel\"");
            }
            continue;
        }
        if (fields.size() != 3) throw ParseError(path, lineno, "expected 3 tab-separated fields");
        if (fields[0].empty() || fields[1].empty())
            throw ParseError(path, lineno, "query_id and entity_id must be non-empty");
        if (fields[2] != "0" && fields[2] != "1")
            throw ParseError(path, lineno, "label must be 0 or 1");
        if (!seen.insert(fields[0] + "\t" + fields[1]).second)
            throw ParseError(path, lineno, "duplicate (query_id, entity_id) pair");
        pairs.push_back(LabeledPair{fields[0], fields[1], fields[2] == "1" ? 1 : 0});
    }
    return pairs;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    return out;
}

}  // namespace

void write_corpus_jsonl(const std::vector<Document>& docs, const std::string& path) {
    std::ofstream out = open_out(path);
    for (const Document& doc : docs) {
        nlohmann::ordered_json obj;
        obj["entity_id"] = doc.entity_id;
        obj["title"] = doc.title;
        obj["body"] = doc.body;
        if (doc.seg_title) obj["seg_title"] = *doc.seg_title;
        if (doc.seg_body) obj["seg_body"] = *doc.seg_body;
        out << obj.dump() << "\n";
    }
}

void write_queries_jsonl(const std::vector<Query>& queries, const std::string& path) {
    std::ofstream out = open_out(path);
    for (const Query& q : queries) {
        nlohmann::ordered_json obj;
        obj["query_id"] = q.query_id;
        obj["text"] = q.text;
        if (q.seg_text) obj["seg_text"] = *q.seg_text;
        out << obj.dump() << "\n";
    }
}

void write_pairs_tsv(const std::vector<LabeledPair>& pairs, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "query_id\tentity_id\tlabel\n";
    for (const LabeledPair& pair : pairs) {
        out << pair.query_id << "\t" << pair.entity_id << "\t" << pair.label << "\n";
    }
}

}  // namespace entityrank
