#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pqe/embed.hpp"
#include "pqe/errors.hpp"
#include "pqe/matrix.hpp"

namespace pqe {

struct Assignment {
  std::vector<std::uint32_t> labels;  // one per clustered row, in [0, k)

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct PseudoQuerySet {
  std::string doc_id;
  std::uint32_t k_effective = 0;
  Mat centroids;  // k_effective x dim
  Assignment assignment;
  std::uint32_t iterations_run = 0;
  bool converged = false;

  friend bool operator==(const PseudoQuerySet&,
                         const PseudoQuerySet&) = default;
};

struct ClusterConfig {
  std::uint32_t k = 8;
  std::uint32_t max_iters = 20;
  double tol = 1e-4;
  bool include_cls = false;

  void validate() const {
    if (k < 1) throw ValidationError("cluster: k must be >= 1");
    if (max_iters < 1) throw ValidationError("cluster: max_iters must be >= 1");
    if (tol < 0) throw ValidationError("cluster: tol must be >= 0");
  }
};

// Initial centroid j is row floor(j*m/k). With fewer rows than clusters each
// row seeds its own centroid.
inline DMat equal_interval_init(const Mat& rows, std::uint32_t k) {
  if (k < 1) throw ValidationError("equal_interval_init: k must be >= 1");
  if (rows.rows < 1) throw ValidationError("equal_interval_init: no rows");
  std::uint32_t k_eff =
      std::min<std::uint64_t>(k, rows.rows);
  DMat centroids(k_eff, rows.cols);
  for (std::uint32_t j = 0; j < k_eff; ++j) {
    std::size_t src = (k_eff == rows.rows)
                          ? j
                          : static_cast<std::size_t>(
                                (static_cast<std::uint64_t>(j) * rows.rows) / k);
    auto r = rows.row(src);
    for (std::size_t f = 0; f < rows.cols; ++f) centroids.row(j)[f] = r[f];
  }
  return centroids;
}

// Label each row with the centroid of minimum squared Euclidean distance,
// ties to the lowest centroid index.
inline Assignment assign_step(const Mat& rows, const DMat& centroids) {
  if (centroids.rows < 1) throw ValidationError("assign_step: no centroids");
  if (centroids.cols != rows.cols)
    throw ValidationError("assign_step: dim mismatch");
  Assignment out;
  out.labels.resize(rows.rows);
  for (std::size_t i = 0; i < rows.rows; ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_j = 0;
    for (std::uint32_t j = 0; j < centroids.rows; ++j) {
      double d = squared_distance(rows.row(i), centroids.row(j));
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    out.labels[i] = best_j;
  }
  return out;
}

// Centroid j becomes the mean of its members; an empty cluster keeps its
// previous centroid.
inline DMat update_step(const Mat& rows, const Assignment& assignment,
                        const DMat& previous) {
  DMat next(previous.rows, previous.cols);
  std::vector<std::size_t> counts(previous.rows, 0);
  for (std::size_t i = 0; i < rows.rows; ++i) {
    std::uint32_t j = assignment.labels[i];
    if (j >= previous.rows)
      throw ValidationError("update_step: label out of range");
    ++counts[j];
    auto r = rows.row(i);
    for (std::size_t f = 0; f < rows.cols; ++f) next.row(j)[f] += r[f];
  }
  for (std::uint32_t j = 0; j < previous.rows; ++j) {
    if (counts[j] == 0) {
      for (std::size_t f = 0; f < previous.cols; ++f)
        next.row(j)[f] = previous.row(j)[f];
    } else {
      double inv = 1.0 / static_cast<double>(counts[j]);
      for (std::size_t f = 0; f < previous.cols; ++f) next.row(j)[f] *= inv;
    }
  }
  return next;
}

namespace detail {

inline double max_centroid_movement(const DMat& a, const DMat& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.rows; ++j) {
    double d2 = 0.0;
    for (std::size_t f = 0; f < a.cols; ++f) {
      double d = a.row(j)[f] - b.row(j)[f];
      d2 += d * d;
    }
    worst = std::max(worst, std::sqrt(d2));
  }
  return worst;
}

// Rows participating in clustering. The summary row is reserved for query
// pooling unless include_cls is set.
inline Mat eligible_rows(const TokenEmbeddingMatrix& doc, bool include_cls) {
  if (!doc.has_cls || include_cls || doc.rows.rows == 1) return doc.rows;
  Mat out(doc.rows.rows - 1, doc.rows.cols);
  for (std::size_t i = 1; i < doc.rows.rows; ++i) {
    auto src = doc.rows.row(i);
    auto dst = out.row(i - 1);
    for (std::size_t f = 0; f < doc.rows.cols; ++f) dst[f] = src[f];
  }
  return out;
}

}  // namespace detail

// Lloyd iteration from equal-interval init. Stops when labels are unchanged,
// when the largest centroid movement drops to tol, or at max_iters.
inline PseudoQuerySet cluster_document(const TokenEmbeddingMatrix& doc,
                                       const ClusterConfig& config) {
  config.validate();
  if (doc.rows.rows < 1) throw ValidationError("cluster: empty document");
  if (!doc.rows.all_finite())
    throw ValidationError("cluster: non-finite token embedding");

  Mat rows = detail::eligible_rows(doc, config.include_cls);
  DMat centroids = equal_interval_init(rows, config.k);

  PseudoQuerySet out;
  out.doc_id = doc.doc_id;
  out.k_effective = static_cast<std::uint32_t>(centroids.rows);

  Assignment labels;
  bool converged = false;
  std::uint32_t iters = 0;
  while (iters < config.max_iters) {
    Assignment next_labels = assign_step(rows, centroids);
    DMat next_centroids = update_step(rows, next_labels, centroids);
    ++iters;
    bool labels_stable = !labels.labels.empty() && next_labels == labels;
    double movement = detail::max_centroid_movement(centroids, next_centroids);
    labels = std::move(next_labels);
    centroids = std::move(next_centroids);
    if (labels_stable || movement <= config.tol) {
      converged = true;
      break;
    }
  }

  out.centroids = centroids.to_float();
  out.assignment = std::move(labels);
  out.iterations_run = iters;
  out.converged = converged;
  return out;
}

inline std::vector<PseudoQuerySet> cluster_corpus(
    const std::vector<TokenEmbeddingMatrix>& corpus,
    const ClusterConfig& config) {
  std::vector<PseudoQuerySet> out;
  out.reserve(corpus.size());
  for (const auto& doc : corpus) {
    try {
      out.push_back(cluster_document(doc, config));
    } catch (const std::exception& e) {
      throw ValidationError("cluster: document '" + doc.doc_id +
                            "': " + e.what());
    }
  }
  return out;
}

}  // namespace pqe
