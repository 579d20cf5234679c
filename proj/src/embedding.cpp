#include "entityrank/embedding.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "entityrank/errors.hpp"
#include "entityrank/rng.hpp"

namespace entityrank {

namespace {

double norm2(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x * x;
    return std::sqrt(sum);
}

void normalize(std::vector<double>& v, const std::string& word) {
    const double norm = norm2(v);
    if (norm < 1e-12) throw ZeroNormVector("zero-norm vector for word \"" + word + "\"");
    for (double& x : v) x /= norm;
}

}  // namespace

void EmbeddingTable::insert(const std::string& word, std::vector<double> vec) {
    if (vec.size() != dim_) {
        throw DimensionMismatch("vector for \"" + word + "\" has " + std::to_string(vec.size()) +
                                " components, expected " + std::to_string(dim_));
    }
    normalize(vec, word);
    auto [it, inserted] = vectors_.insert_or_assign(word, std::move(vec));
    (void)it;
    if (inserted) order_.push_back(word);
}

const std::vector<double>& EmbeddingTable::vector(const std::string& word) const {
    auto it = vectors_.find(word);
    if (it != vectors_.end()) return it->second;

    std::lock_guard<std::mutex> lock(oov_mutex_);
    auto cached = oov_cache_.find(word);
    if (cached != oov_cache_.end()) return cached->second;

    SplitMix64 rng(fnv1a64(word) ^ oov_seed_);
    std::vector<double> vec(dim_);
    double norm = 0.0;
    do {
        for (double& x : vec) x = rng.uniform(-0.25, 0.25);
        norm = norm2(vec);
    } while (norm < 1e-12);
    for (double& x : vec) x /= norm;
    return oov_cache_.emplace(word, std::move(vec)).first->second;
}

namespace {

// Header is "<vocab> <dim>" with nothing else on the line.
void parse_header(const std::string& line, const std::string& path, uint64_t& vocab,
                  size_t& dim) {
    std::istringstream ss(line);
    long long v = -1;
    long long d = -1;
    std::string extra;
    if (!(ss >> v >> d) || (ss >> extra) || v < 0 || d < 1) {
        throw MalformedHeader(path + ": expected header \"<vocab_size> <dim>\", got \"" + line +
                              "\"");
    }
    vocab = static_cast<uint64_t>(v);
    dim = static_cast<size_t>(d);
}

}  // namespace

EmbeddingTable load_word2vec_text(const std::string& path, uint64_t oov_seed) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw MalformedHeader(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    uint64_t vocab = 0;
    size_t dim = 0;
    parse_header(line, path, vocab, dim);

    EmbeddingTable table(dim, oov_seed);
    for (uint64_t i = 0; i < vocab; ++i) {
        if (!std::getline(in, line))
            throw UnexpectedEof(path + ": expected " + std::to_string(vocab) + " rows, got " +
                                std::to_string(i));
        const size_t lineno = i + 2;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ss(line);
        std::string word;
        if (!(ss >> word))
            throw DimensionMismatch(path + " line " + std::to_string(lineno) + ": empty row");
        std::vector<double> vec(dim);
        for (size_t k = 0; k < dim; ++k) {
            if (!(ss >> vec[k])) {
                throw DimensionMismatch(path + " line " + std::to_string(lineno) + ": expected " +
                                        std::to_string(dim) + " floats");
            }
        }
        std::string extra;
        if (ss >> extra) {
            throw DimensionMismatch(path + " line " + std::to_string(lineno) + ": expected " +
                                    std::to_string(dim) + " floats");
        }
        table.insert(word, std::move(vec));
    }
    return table;
}

EmbeddingTable load_word2vec_binary(const std::string& path, uint64_t oov_seed) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw MalformedHeader(path + ": empty file");
    uint64_t vocab = 0;
    size_t dim = 0;
    parse_header(line, path, vocab, dim);

    EmbeddingTable table(dim, oov_seed);
    for (uint64_t i = 0; i < vocab; ++i) {
        std::string word;
        char c = 0;
        // Skip record separators some writers emit between entries.
        while (in.get(c) && (c == '\n' || c == '\r')) {
        }
        if (!in) throw UnexpectedEof(path + ": truncated at word " + std::to_string(i));
        while (c != ' ') {
            word.push_back(c);
            if (!in.get(c)) throw UnexpectedEof(path + ": truncated at word " + std::to_string(i));
        }
        std::vector<float> raw(dim);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(dim * 4));
        if (in.gcount() != static_cast<std::streamsize>(dim * 4)) {
            throw UnexpectedEof(path + ": truncated vector for \"" + word + "\"");
        }
        std::vector<double> vec(raw.begin(), raw.end());
        table.insert(word, std::move(vec));
    }
    return table;
}

EmbeddingTable load_word2vec_auto(const std::string& path, uint64_t oov_seed) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::string header;
    if (!std::getline(in, header)) throw MalformedHeader(path + ": empty file");
    if (!header.empty() && header.back() == '\r') header.pop_back();
    uint64_t vocab = 0;
    size_t dim = 0;
    parse_header(header, path, vocab, dim);
    if (vocab == 0) return load_word2vec_text(path, oov_seed);

    // Text rows are newline-framed and fully numeric after the word; raw
    // float32 payloads are not.
    std::string chunk(65536, '\0');
    in.read(chunk.data(), static_cast<std::streamsize>(chunk.size()));
    chunk.resize(static_cast<size_t>(in.gcount()));
    const size_t nl = chunk.find('\n');
    bool looks_text = false;
    if (nl != std::string::npos) {
        std::istringstream ss(chunk.substr(0, nl));
        std::string word;
        looks_text = static_cast<bool>(ss >> word);
        for (size_t k = 0; looks_text && k < dim; ++k) {
            double value = 0.0;
            looks_text = static_cast<bool>(ss >> value);
        }
        if (looks_text) {
            std::string extra;
            if (ss >> extra) looks_text = false;
        }
    }
    return looks_text ? load_word2vec_text(path, oov_seed)
                      : load_word2vec_binary(path, oov_seed);
}

void save_word2vec_text(const EmbeddingTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << table.words().size() << " " << table.dim() << "\n";
    char buf[64];
    for (const std::string& word : table.words()) {
        out << word;
        for (double x : table.vector(word)) {
            std::snprintf(buf, sizeof(buf), " %.9g", x);
            out << buf;
        }
        out << "\n";
    }
}

void save_word2vec_binary(const EmbeddingTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << table.words().size() << " " << table.dim() << "\n";
    for (const std::string& word : table.words()) {
        out << word << ' ';
        for (double x : table.vector(word)) {
            const float f = static_cast<float>(x);
            out.write(reinterpret_cast<const char*>(&f), 4);
        }
    }
}

}  // namespace entityrank
