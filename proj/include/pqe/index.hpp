#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "pqe/cluster.hpp"
#include "pqe/errors.hpp"
#include "pqe/matrix.hpp"
#include "pqe/score.hpp"

namespace pqe {

// Flat inner-product index over every centroid of every document. Rows are
// laid out document-contiguously in corpus order.
struct CentroidIndex {
  std::size_t dim = 0;
  Mat rows;                              // N x dim
  std::vector<std::uint32_t> row_to_doc; // row -> document ordinal
  std::vector<std::string> doc_ids;      // ordinal -> id
  struct Span {
    std::size_t start = 0;
    std::size_t count = 0;
    friend bool operator==(const Span&, const Span&) = default;
  };
  std::vector<Span> doc_offsets;

  std::size_t num_docs() const { return doc_ids.size(); }

  Mat doc_centroids(std::size_t ordinal) const {
    const Span& s = doc_offsets[ordinal];
    Mat out(s.count, dim);
    std::copy_n(rows.data.begin() + s.start * dim, s.count * dim,
                out.data.begin());
    return out;
  }

  friend bool operator==(const CentroidIndex&, const CentroidIndex&) = default;
};

struct RankedEntry {
  std::string doc_id;
  double score = 0.0;
  std::size_t rank = 0;  // 1-based
};

struct RankedList {
  std::string qid;
  std::vector<RankedEntry> entries;
};

enum class RetrievalMode { two_step, argmax_only, exact };

inline std::string to_string(RetrievalMode m) {
  switch (m) {
    case RetrievalMode::two_step: return "two_step";
    case RetrievalMode::argmax_only: return "argmax_only";
    case RetrievalMode::exact: return "exact";
  }
  return "two_step";
}

inline RetrievalMode parse_mode(const std::string& s) {
  if (s == "two_step") return RetrievalMode::two_step;
  if (s == "argmax_only") return RetrievalMode::argmax_only;
  if (s == "exact") return RetrievalMode::exact;
  throw ValidationError("unknown retrieval mode: " + s);
}

struct RetrievalConfig {
  std::size_t candidates = 8000;  // R, default 1000*k with k=8
  std::size_t final_k = 1000;
  RetrievalMode mode = RetrievalMode::two_step;

  void validate() const {
    if (candidates < 1) throw ValidationError("retrieve: R must be >= 1");
    if (final_k < 1) throw ValidationError("retrieve: final_k must be >= 1");
    if (mode == RetrievalMode::two_step && final_k > candidates)
      throw ValidationError("retrieve: final_k must be <= R in two_step mode");
  }
};

inline CentroidIndex build_index(const std::vector<PseudoQuerySet>& pqs) {
  if (pqs.empty()) throw ValidationError("build_index: empty corpus");
  std::size_t dim = pqs.front().centroids.cols;
  std::size_t total = 0;
  std::unordered_set<std::string> seen;
  for (const auto& p : pqs) {
    if (p.centroids.cols != dim)
      throw ValidationError("build_index: dim mismatch for '" + p.doc_id + "'");
    if (!seen.insert(p.doc_id).second)
      throw ValidationError("build_index: duplicate doc_id '" + p.doc_id + "'");
    total += p.centroids.rows;
  }

  CentroidIndex idx;
  idx.dim = dim;
  idx.rows = Mat(total, dim);
  idx.row_to_doc.reserve(total);
  std::size_t at = 0;
  for (std::uint32_t ord = 0; ord < pqs.size(); ++ord) {
    const auto& p = pqs[ord];
    idx.doc_ids.push_back(p.doc_id);
    idx.doc_offsets.push_back({at, p.centroids.rows});
    std::copy(p.centroids.data.begin(), p.centroids.data.end(),
              idx.rows.data.begin() + at * dim);
    for (std::size_t r = 0; r < p.centroids.rows; ++r)
      idx.row_to_doc.push_back(ord);
    at += p.centroids.rows;
  }
  return idx;
}

struct Candidate {
  std::uint32_t ordinal = 0;
  double best_score = 0.0;  // max over the document's centroids
};

// Exhaustive scan with a per-document max reduction, then the R best
// documents. Ties break to the lower ordinal.
inline std::vector<Candidate> candidate_search(const CentroidIndex& index,
                                               const std::vector<double>& query,
                                               std::size_t R) {
  if (R < 1) throw ValidationError("candidate_search: R must be >= 1");
  if (query.size() != index.dim)
    throw ValidationError("candidate_search: dim mismatch");

  std::vector<Candidate> per_doc(index.num_docs());
  for (std::uint32_t ord = 0; ord < per_doc.size(); ++ord) {
    const auto& span = index.doc_offsets[ord];
    double best = -std::numeric_limits<double>::infinity();
    const float* base = index.rows.data.data() + span.start * index.dim;
    for (std::size_t r = 0; r < span.count; ++r) {
      double s = 0.0;
      const float* row = base + r * index.dim;
      for (std::size_t f = 0; f < index.dim; ++f)
        s += query[f] * static_cast<double>(row[f]);
      if (s > best) best = s;
    }
    per_doc[ord] = {ord, best};
  }

  auto better = [](const Candidate& a, const Candidate& b) {
    if (a.best_score != b.best_score) return a.best_score > b.best_score;
    return a.ordinal < b.ordinal;
  };
  if (R < per_doc.size()) {
    std::nth_element(per_doc.begin(), per_doc.begin() + R, per_doc.end(),
                     better);
    per_doc.resize(R);
  }
  std::sort(per_doc.begin(), per_doc.end(), better);
  return per_doc;
}

// Two-step retrieval: argmax-filter the top-R documents, rescore the
// survivors with the full softmax aggregation. argmax_only ranks by the
// filter score; exact rescoring of the whole corpus is the oracle path.
inline RankedList retrieve(const CentroidIndex& index,
                           const QueryEmbedding& query,
                           const RetrievalConfig& config) {
  config.validate();
  std::vector<Candidate> scored;
  switch (config.mode) {
    case RetrievalMode::argmax_only:
      scored = candidate_search(index, query.vector, config.candidates);
      break;
    case RetrievalMode::two_step: {
      scored = candidate_search(index, query.vector, config.candidates);
      for (auto& c : scored)
        c.best_score =
            softmax_score(query.vector, index.doc_centroids(c.ordinal)).score;
      break;
    }
    case RetrievalMode::exact: {
      scored.resize(index.num_docs());
      for (std::uint32_t ord = 0; ord < scored.size(); ++ord)
        scored[ord] = {
            ord, softmax_score(query.vector, index.doc_centroids(ord)).score};
      break;
    }
  }

  std::stable_sort(scored.begin(), scored.end(),
                   [](const Candidate& a, const Candidate& b) {
                     if (a.best_score != b.best_score)
                       return a.best_score > b.best_score;
                     return a.ordinal < b.ordinal;
                   });
  if (scored.size() > config.final_k) scored.resize(config.final_k);

  RankedList out;
  out.qid = query.qid;
  out.entries.reserve(scored.size());
  for (std::size_t i = 0; i < scored.size(); ++i)
    out.entries.push_back(
        {index.doc_ids[scored[i].ordinal], scored[i].best_score, i + 1});
  return out;
}

}  // namespace pqe
