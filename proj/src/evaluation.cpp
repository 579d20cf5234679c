#include "entityrank/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "entityrank/errors.hpp"

namespace entityrank {

ApMode parse_ap_mode(std::string_view name) {
    if (name == "standard") return ApMode::Standard;
    if (name == "paper") return ApMode::PaperLiteral;
    throw Error("unknown ap-mode: " + std::string(name) + " (expected standard|paper)");
}

std::string_view to_string(ApMode mode) {
    return mode == ApMode::Standard ? "standard" : "paper";
}

double avgprec(const RankedList& list, ApMode mode) {
    if (list.entries.empty()) throw EmptyList("ranked list for query " + list.query_id + " is empty");
    size_t relevant_seen = 0;
    double sum = 0.0;
    for (size_t i = 0; i < list.entries.size(); ++i) {
        if (list.entries[i].relevance <= 0) continue;
        ++relevant_seen;
        const double pos = static_cast<double>(i + 1);
        sum += mode == ApMode::PaperLiteral ? 1.0 / pos
                                            : static_cast<double>(relevant_seen) / pos;
    }
    if (relevant_seen == 0) return 0.0;
    return mode == ApMode::PaperLiteral ? sum : sum / static_cast<double>(relevant_seen);
}

double map_score(const std::vector<RankedList>& lists, ApMode mode) {
    if (lists.empty()) throw EmptyList("map_score needs at least one ranked list");
    double sum = 0.0;
    for (const RankedList& list : lists) sum += avgprec(list, mode);
    return sum / static_cast<double>(lists.size());
}

double mrr(const std::vector<RankedList>& lists) {
    if (lists.empty()) throw EmptyList("mrr needs at least one ranked list");
    double sum = 0.0;
    for (const RankedList& list : lists) {
        for (size_t i = 0; i < list.entries.size(); ++i) {
            if (list.entries[i].relevance > 0) {
                sum += 1.0 / static_cast<double>(i + 1);
                break;
            }
        }
    }
    return sum / static_cast<double>(lists.size());
}

std::vector<Prediction> load_predictions_tsv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::vector<Prediction> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, '\t')) fields.push_back(field);
        if (lineno == 1) {
            if (fields.size() != 4 || fields[0] != "query_id" || fields[1] != "entity_id" ||
                fields[2] != "score" || fields[3] != "rank") {
                throw ParseError(path, lineno,
                                 "expected header \"query_id\\tentity_id\\tscore\\trank\"");
            }
            continue;
        }
        if (fields.size() != 4) throw ParseError(path, lineno, "expected 4 tab-separated fields");
        Prediction p;
        p.query_id = fields[0];
        p.entity_id = fields[1];
        try {
            p.score = std::stod(fields[2]);
            p.rank = static_cast<size_t>(std::stoul(fields[3]));
        } catch (const std::exception&) {
            throw ParseError(path, lineno, "bad score or rank");
        }
        if (p.rank == 0) throw ParseError(path, lineno, "rank must be >= 1");
        out.push_back(std::move(p));
    }
    return out;
}

void write_predictions_tsv(const std::vector<Prediction>& predictions, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << "query_id\tentity_id\tscore\trank\n";
    char buf[64];
    for (const Prediction& p : predictions) {
        std::snprintf(buf, sizeof(buf), "%.17g", p.score);
        out << p.query_id << "\t" << p.entity_id << "\t" << buf << "\t" << p.rank << "\n";
    }
}

std::vector<RankedList> build_ranked_lists(const std::vector<Prediction>& predictions,
                                           const std::vector<LabeledPair>& qrels) {
    std::unordered_map<std::string, int> label_by_pair;
    for (const LabeledPair& pair : qrels) {
        label_by_pair[pair.query_id + "\t" + pair.entity_id] = pair.label;
    }

    std::vector<RankedList> lists;
    std::unordered_map<std::string, size_t> list_index;
    for (const Prediction& p : predictions) {
        auto [it, inserted] = list_index.try_emplace(p.query_id, lists.size());
        if (inserted) lists.push_back(RankedList{p.query_id, {}});
        RankedList& list = lists[it->second];
        auto found = label_by_pair.find(p.query_id + "\t" + p.entity_id);
        const int rel = found == label_by_pair.end() ? 0 : found->second;
        list.entries.push_back(RankedEntry{p.entity_id, rel});
    }
    // Rows may arrive in any order; the rank column defines the list order.
    std::unordered_map<std::string, std::vector<size_t>> ranks;
    for (const Prediction& p : predictions) ranks[p.query_id].push_back(p.rank);
    for (RankedList& list : lists) {
        std::vector<std::pair<size_t, RankedEntry>> keyed;
        const std::vector<size_t>& rs = ranks[list.query_id];
        for (size_t i = 0; i < list.entries.size(); ++i) {
            keyed.emplace_back(rs[i], list.entries[i]);
        }
        std::sort(keyed.begin(), keyed.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (size_t i = 0; i < keyed.size(); ++i) list.entries[i] = keyed[i].second;
    }
    return lists;
}

}  // namespace entityrank
