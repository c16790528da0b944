#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pqe/errors.hpp"
#include "pqe/index.hpp"

namespace pqe {

// Graded relevance judgments keyed by (qid, doc_id).
struct Qrels {
  std::map<std::pair<std::string, std::string>, int> judgments;

  int relevance(const std::string& qid, const std::string& doc_id) const {
    auto it = judgments.find({qid, doc_id});
    return it == judgments.end() ? 0 : it->second;
  }

  // ids of documents judged relevant (grade >= 1) for one query
  std::vector<std::pair<std::string, int>> relevant_for(
      const std::string& qid) const {
    std::vector<std::pair<std::string, int>> out;
    auto it = judgments.lower_bound({qid, ""});
    for (; it != judgments.end() && it->first.first == qid; ++it)
      if (it->second >= 1) out.emplace_back(it->first.second, it->second);
    return out;
  }

  bool has_query(const std::string& qid) const {
    auto it = judgments.lower_bound({qid, ""});
    return it != judgments.end() && it->first.first == qid;
  }
};

// Reciprocal rank of the first relevant entry within the top k, 0 if none.
inline double mrr_at_k(const RankedList& ranked, const Qrels& qrels,
                       std::size_t k) {
  if (k < 1) throw ValidationError("mrr_at_k: k must be >= 1");
  for (const auto& e : ranked.entries) {
    if (e.rank > k) break;
    if (qrels.relevance(ranked.qid, e.doc_id) >= 1)
      return 1.0 / static_cast<double>(e.rank);
  }
  return 0.0;
}

// Fraction of this query's relevant documents found in the top k. Undefined
// (NaN) when the query has no relevant documents.
inline double recall_at_k(const RankedList& ranked, const Qrels& qrels,
                          std::size_t k) {
  if (k < 1) throw ValidationError("recall_at_k: k must be >= 1");
  auto relevant = qrels.relevant_for(ranked.qid);
  if (relevant.empty()) return std::nan("");
  std::size_t hits = 0;
  for (const auto& e : ranked.entries) {
    if (e.rank > k) break;
    if (qrels.relevance(ranked.qid, e.doc_id) >= 1) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(relevant.size());
}

// NDCG with gain 2^rel - 1 and discount log2(rank + 1). 0 when the query has
// no positive judgments.
inline double ndcg_at_k(const RankedList& ranked, const Qrels& qrels,
                        std::size_t k) {
  if (k < 1) throw ValidationError("ndcg_at_k: k must be >= 1");
  double dcg = 0.0;
  for (const auto& e : ranked.entries) {
    if (e.rank > k) break;
    int rel = qrels.relevance(ranked.qid, e.doc_id);
    if (rel > 0)
      dcg += (std::pow(2.0, rel) - 1.0) /
             std::log2(static_cast<double>(e.rank) + 1.0);
  }
  auto relevant = qrels.relevant_for(ranked.qid);
  std::vector<int> grades;
  for (const auto& [id, rel] : relevant) grades.push_back(rel);
  std::sort(grades.rbegin(), grades.rend());
  double ideal = 0.0;
  for (std::size_t i = 0; i < grades.size() && i < k; ++i)
    ideal += (std::pow(2.0, grades[i]) - 1.0) /
             std::log2(static_cast<double>(i) + 2.0);
  if (ideal <= 0.0) return 0.0;
  return dcg / ideal;
}

// Fraction of queries with at least one relevant document in the top k.
inline double topk_accuracy(const std::vector<RankedList>& lists,
                            const Qrels& qrels, std::size_t k) {
  if (k < 1) throw ValidationError("topk_accuracy: k must be >= 1");
  if (lists.empty()) throw ValidationError("topk_accuracy: no queries");
  std::size_t hits = 0;
  for (const auto& ranked : lists) {
    for (const auto& e : ranked.entries) {
      if (e.rank > k) break;
      if (qrels.relevance(ranked.qid, e.doc_id) >= 1) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(lists.size());
}

struct MetricReport {
  // metric name -> per-query values (order matches the run) and mean
  std::map<std::string, std::vector<double>> per_query;
  std::map<std::string, double> mean;
  std::size_t queries_skipped_no_relevant = 0;
  std::size_t queries_missing_from_qrels = 0;
};

// ---- TREC text formats -------------------------------------------------

inline Qrels read_qrels(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open qrels: " + path.string());
  Qrels out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string qid, iter, doc_id;
    long rel;
    if (!(ss >> qid >> iter >> doc_id >> rel) || rel < 0)
      throw FormatError("malformed qrels line " + std::to_string(lineno));
    if (out.judgments.count({qid, doc_id}))
      throw FormatError("duplicate qrels pair at line " +
                        std::to_string(lineno));
    out.judgments[{qid, doc_id}] = static_cast<int>(rel);
  }
  return out;
}

inline void write_run(const std::vector<RankedList>& lists,
                      const std::filesystem::path& path,
                      const std::string& tag) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot open run for writing: " + path.string());
  os.precision(17);
  for (const auto& ranked : lists)
    for (const auto& e : ranked.entries)
      os << ranked.qid << " Q0 " << e.doc_id << ' ' << e.rank << ' ' << e.score
         << ' ' << tag << '\n';
  if (!os) throw IoError("write failed: " + path.string());
}

inline std::vector<RankedList> read_run(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open run: " + path.string());
  std::vector<RankedList> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string qid, q0, doc_id, tag;
    std::size_t rank;
    double score;
    if (!(ss >> qid >> q0 >> doc_id >> rank >> score >> tag))
      throw FormatError("malformed run line " + std::to_string(lineno));
    if (out.empty() || out.back().qid != qid) {
      out.push_back({qid, {}});
    }
    out.back().entries.push_back({doc_id, score, rank});
  }
  return out;
}

}  // namespace pqe
