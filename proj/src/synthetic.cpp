#include "entityrank/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "entityrank/errors.hpp"
#include "entityrank/rng.hpp"
#include "entityrank/unicode.hpp"

namespace entityrank {

namespace {

// Synthetic "words" are pairs of codepoints from the CJK unified block so
// both tokenizations see clean tokens (no whitespace inside sentences).
constexpr uint32_t kAlphabetBase = 0x4E00;
constexpr size_t kAlphabetMax = 20000;
constexpr size_t kQueryWords = 3;

std::string pad_number(size_t value, size_t width) {
    std::string s = std::to_string(value);
    while (s.size() < width) s.insert(s.begin(), '0');
    return s;
}

std::string make_word(SplitMix64& rng, size_t vocab_size) {
    std::string word;
    append_utf8(word, kAlphabetBase + static_cast<uint32_t>(rng.next_below(vocab_size)));
    append_utf8(word, kAlphabetBase + static_cast<uint32_t>(rng.next_below(vocab_size)));
    return word;
}

std::vector<std::string> make_sentence(SplitMix64& rng, size_t vocab_size,
                                       const std::vector<std::string>* inject) {
    const size_t n_bg = 2 + rng.next_below(4);  // 2..5 background words
    std::vector<std::string> words;
    words.reserve(n_bg + (inject ? inject->size() : 0));
    for (size_t i = 0; i < n_bg; ++i) words.push_back(make_word(rng, vocab_size));
    if (inject) {
        const size_t at = rng.next_below(words.size() + 1);
        words.insert(words.begin() + static_cast<ptrdiff_t>(at), inject->begin(), inject->end());
    }
    return words;
}

std::string join_words(const std::vector<std::string>& words) {
    std::string out;
    for (const std::string& w : words) out += w;
    return out;
}

// Deterministic unit vector per codepoint; tokens sharing codepoints get
// correlated embeddings.
std::vector<double> codepoint_vector(uint32_t cp, uint64_t seed, size_t dim) {
    SplitMix64 rng(derive_seed(seed, 0x434F4445 /* arbitrary stream tag */ + cp));
    std::vector<double> v(dim);
    double norm = 0.0;
    do {
        norm = 0.0;
        for (double& x : v) {
            x = rng.uniform(-1.0, 1.0);
            norm += x * x;
        }
        norm = std::sqrt(norm);
    } while (norm < 1e-12);
    for (double& x : v) x /= norm;
    return v;
}

}  // namespace

void SynthSpec::validate() const {
    if (n_queries == 0 || candidates_per_query == 0 || vocab_size == 0 || embedding_dim == 0) {
        throw Error("synth spec values must be positive");
    }
    if (vocab_size > kAlphabetMax) {
        throw Error("vocab_size must be <= " + std::to_string(kAlphabetMax));
    }
    if (!(relevant_fraction > 0.0 && relevant_fraction < 1.0)) {
        throw Error("relevant_fraction must be in (0, 1)");
    }
    if (!(overlap_strength >= 0.0 && overlap_strength <= 1.0)) {
        throw Error("overlap_strength must be in [0, 1]");
    }
}

SynthSpec SynthSpec::from_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    nlohmann::json obj;
    try {
        obj = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path, 1, e.what());
    }
    SynthSpec spec;
    spec.n_queries = obj.value("n_queries", spec.n_queries);
    spec.candidates_per_query = obj.value("candidates_per_query", spec.candidates_per_query);
    spec.vocab_size = obj.value("vocab_size", spec.vocab_size);
    spec.relevant_fraction = obj.value("relevant_fraction", spec.relevant_fraction);
    spec.overlap_strength = obj.value("overlap_strength", spec.overlap_strength);
    spec.seed = obj.value("seed", spec.seed);
    spec.embedding_dim = obj.value("embedding_dim", spec.embedding_dim);
    spec.validate();
    return spec;
}

SynthData generate(const SynthSpec& spec) {
    spec.validate();
    SplitMix64 rng(spec.seed);

    const size_t qwidth = std::to_string(spec.n_queries).size();
    const size_t ewidth = std::to_string(spec.candidates_per_query).size();
    const size_t n_rel = std::max<size_t>(
        1, static_cast<size_t>(std::llround(static_cast<double>(spec.candidates_per_query) *
                                            spec.relevant_fraction)));

    SynthData data{{}, {}, {}, EmbeddingTable(spec.embedding_dim, kDefaultOovSeed)};

    for (size_t qi = 0; qi < spec.n_queries; ++qi) {
        Query query;
        query.query_id = "q" + pad_number(qi + 1, qwidth);
        std::vector<std::string> query_words;
        for (size_t w = 0; w < kQueryWords; ++w) query_words.push_back(make_word(rng, spec.vocab_size));
        query.text = join_words(query_words);
        query.seg_text = query_words;
        data.queries.push_back(query);

        // Exact relevant count per query; which candidates get it is shuffled.
        std::vector<size_t> order(spec.candidates_per_query);
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        for (size_t i = order.size() - 1; i > 0; --i) {
            const size_t j = rng.next_below(i + 1);
            std::swap(order[i], order[j]);
        }
        std::vector<int> labels(spec.candidates_per_query, 0);
        for (size_t i = 0; i < n_rel; ++i) labels[order[i]] = 1;

        for (size_t ei = 0; ei < spec.candidates_per_query; ++ei) {
            const bool relevant = labels[ei] == 1;
            Document doc;
            doc.entity_id = query.query_id + "_e" + pad_number(ei + 1, ewidth);

            const bool inject_title =
                relevant && rng.next_double() < spec.overlap_strength;
            std::vector<std::string> title_words =
                make_sentence(rng, spec.vocab_size, inject_title ? &query_words : nullptr);
            doc.title = join_words(title_words);

            std::vector<std::string> seg_body;
            std::string body;
            const size_t n_sentences = 4 + rng.next_below(4);  // 4..7
            for (size_t s = 0; s < n_sentences; ++s) {
                const bool inject =
                    relevant && rng.next_double() < spec.overlap_strength;
                std::vector<std::string> words =
                    make_sentence(rng, spec.vocab_size, inject ? &query_words : nullptr);
                body += join_words(words);
                body += "\xE3\x80\x82";  // 。
                seg_body.insert(seg_body.end(), words.begin(), words.end());
            }
            doc.body = body;
            doc.seg_title = title_words;
            doc.seg_body = seg_body;

            data.pairs.push_back(LabeledPair{query.query_id, doc.entity_id, labels[ei]});
            data.docs.push_back(std::move(doc));
        }
    }

    // Embeddings cover every token either tokenization can produce, in
    // sorted order so the emitted file is reproducible byte for byte.
    std::set<std::string> tokens;
    auto add_stream_tokens = [&tokens](const std::array<TokenStream, 3>& streams) {
        for (const TokenStream& stream : streams) {
            for (const auto& sentence : stream.sentences) {
                tokens.insert(sentence.begin(), sentence.end());
            }
        }
    };
    for (const Document& doc : data.docs) {
        add_stream_tokens(build_streams(doc, Tokenization::TwoGram));
        add_stream_tokens(build_streams(doc, Tokenization::Seg));
    }
    for (const Query& query : data.queries) {
        for (Tokenization tok : {Tokenization::TwoGram, Tokenization::Seg}) {
            for (const std::string& t : query_tokens(query, tok)) tokens.insert(t);
        }
    }
    for (const std::string& token : tokens) {
        std::vector<double> sum(spec.embedding_dim, 0.0);
        for (uint32_t cp : decode_utf8(token)) {
            const std::vector<double> v = codepoint_vector(cp, spec.seed, spec.embedding_dim);
            for (size_t k = 0; k < sum.size(); ++k) sum[k] += v[k];
        }
        data.embeddings.insert(token, std::move(sum));
    }
    return data;
}

void generate_files(const SynthSpec& spec, const std::string& out_dir) {
    const SynthData data = generate(spec);
    write_corpus_jsonl(data.docs, out_dir + "/corpus.jsonl");
    write_queries_jsonl(data.queries, out_dir + "/queries.jsonl");
    write_pairs_tsv(data.pairs, out_dir + "/pairs.tsv");
    save_word2vec_text(data.embeddings, out_dir + "/embeddings.txt");
}

}  // namespace entityrank
