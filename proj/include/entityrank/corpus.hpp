#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace entityrank {

enum class StreamKind { Title = 0, Body = 1, TitleBody = 2 };
enum class Tokenization { Seg = 0, TwoGram = 1 };

constexpr std::array<StreamKind, 3> kAllStreamKinds = {StreamKind::Title, StreamKind::Body,
                                                       StreamKind::TitleBody};

std::string_view to_string(StreamKind kind);
std::string_view to_string(Tokenization tok);
StreamKind parse_stream_kind(std::string_view name);
Tokenization parse_tokenization(std::string_view name);

/// One entity document. seg_title/seg_body carry externally segmented
/// tokens; they are required only for the Seg tokenization.
struct Document {
    std::string entity_id;
    std::string title;
    std::string body;
    std::optional<std::vector<std::string>> seg_title;
    std::optional<std::vector<std::string>> seg_body;
};

struct Query {
    std::string query_id;
    std::string text;
    std::optional<std::vector<std::string>> seg_text;
};

struct LabeledPair {
    std::string query_id;
    std::string entity_id;
    int label = 0;  // 0 or 1
};

/// Tokenized text of one stream: a list of sentences, each a list of
/// non-empty punctuation-free tokens.
struct TokenStream {
    StreamKind kind;
    Tokenization tokenization;
    std::vector<std::vector<std::string>> sentences;
};

/// Sentence end marks: CJK and ASCII end punctuation plus newline.
inline constexpr std::string_view kDefaultSentenceTerminators = "\xE3\x80\x82\xEF\xBC\x81\xEF\xBC\x9F!?.\n";  // 。！？!?.\n

/// Splits on terminator codepoints and drops empty sentences. Terminators
/// are consumed; concatenating the output plus the removed terminators
/// reproduces the input.
std::vector<std::string> split_sentences(std::string_view text,
                                         std::string_view terminators = kDefaultSentenceTerminators);

/// Removes every punctuation codepoint (see is_punctuation); everything
/// else is preserved in order.
std::string strip_punctuation(std::string_view sentence);

/// Overlapping codepoint bigrams, stride 1. A single-codepoint sentence
/// yields itself; empty input yields no tokens.
std::vector<std::string> tokenize_2gram(std::string_view sentence);

/// Builds the Title, Body and TitleBody streams (in kAllStreamKinds order)
/// for one document. TwoGram runs split -> strip -> ASCII-lower -> bigram;
/// Seg strips and lowers the provided tokens. Throws MissingSegmentation
/// when Seg is requested but the seg fields are absent.
std::array<TokenStream, 3> build_streams(const Document& doc, Tokenization tok,
                                         std::string_view terminators = kDefaultSentenceTerminators);

/// Query-side tokens under the same normalization as document streams.
std::vector<std::string> query_tokens(const Query& query, Tokenization tok,
                                      std::string_view terminators = kDefaultSentenceTerminators);

// --- JSON Lines / TSV file formats -------------------------------------

std::vector<Document> load_corpus_jsonl(const std::string& path);
std::vector<Query> load_queries_jsonl(const std::string& path);
std::vector<LabeledPair> load_pairs_tsv(const std::string& path);

void write_corpus_jsonl(const std::vector<Document>& docs, const std::string& path);
void write_queries_jsonl(const std::vector<Query>& queries, const std::string& path);
void write_pairs_tsv(const std::vector<LabeledPair>& pairs, const std::string& path);

}  // namespace entityrank
