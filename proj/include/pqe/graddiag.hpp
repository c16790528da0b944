#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pqe/cluster.hpp"
#include "pqe/embed.hpp"
#include "pqe/errors.hpp"
#include "pqe/matrix.hpp"
#include "pqe/score.hpp"

namespace pqe {

struct BatchInstance {
  QueryEmbedding query;
  PseudoQuerySet positive;
  std::vector<PseudoQuerySet> negatives;

  void validate() const {
    if (negatives.empty())
      throw ValidationError("batch instance needs at least one negative");
  }
};

struct RWeights {
  std::vector<double> values;  // sums to 1
};

struct DiagnosticsSample {
  std::size_t step = 0;
  double loss = 0.0;
  double max_r = 0.0;
  double var_r = 0.0;
};

// Softmax cross-entropy over the positive and negative document scores,
// log-sum-exp stabilized.
inline double batch_loss(const BatchInstance& instance) {
  instance.validate();
  std::vector<double> scores;
  scores.push_back(
      softmax_score(instance.query.vector, instance.positive.centroids).score);
  for (const auto& neg : instance.negatives)
    scores.push_back(softmax_score(instance.query.vector, neg.centroids).score);
  for (double s : scores)
    if (!std::isfinite(s)) throw ValidationError("batch_loss: non-finite score");
  double m = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double s : scores) sum += std::exp(s - m);
  return -(scores[0] - m - std::log(sum));
}

// Gradient contribution weight of each centroid:
//   r_j = [1 + sum_{j' != j} a_{j'} (z_j - z_{j'})] a_j    with z_j = q . c_j.
// The weights always sum to 1.
inline RWeights r_weights(const std::vector<double>& query,
                          const Mat& centroids) {
  std::vector<double> a = attention_weights(query, centroids);
  std::vector<double> z = detail::centroid_logits(query, centroids);
  RWeights out;
  out.values.resize(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    double interaction = 0.0;
    for (std::size_t jp = 0; jp < a.size(); ++jp) {
      if (jp == j) continue;
      interaction += a[jp] * (z[j] - z[jp]);
    }
    out.values[j] = (1.0 + interaction) * a[j];
  }
  return out;
}

// Gradient of the softmax aggregation score with respect to each centroid:
// row j is r_j * query.
inline DMat grad_score_wrt_centroids(const std::vector<double>& query,
                                     const Mat& centroids) {
  RWeights r = r_weights(query, centroids);
  DMat grad(centroids.rows, centroids.cols);
  for (std::size_t j = 0; j < centroids.rows; ++j)
    for (std::size_t f = 0; f < centroids.cols; ++f)
      grad.row(j)[f] = r.values[j] * query[f];
  return grad;
}

// Softmax probability assigned to the positive document within the batch.
inline double positive_probability(const BatchInstance& instance) {
  std::vector<double> scores;
  scores.push_back(
      softmax_score(instance.query.vector, instance.positive.centroids).score);
  for (const auto& neg : instance.negatives)
    scores.push_back(softmax_score(instance.query.vector, neg.centroids).score);
  double m = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double s : scores) sum += std::exp(s - m);
  return std::exp(scores[0] - m) / sum;
}

// Gradient of the batch loss with respect to the positive document's
// centroids: (p_pos - 1) times the score gradient.
inline DMat grad_loss_wrt_positive_centroids(const BatchInstance& instance) {
  instance.validate();
  double p = positive_probability(instance);
  DMat grad = grad_score_wrt_centroids(instance.query.vector,
                                       instance.positive.centroids);
  for (double& g : grad.data) g *= (p - 1.0);
  return grad;
}

// Central-difference check of grad_score_wrt_centroids over every centroid
// coordinate. Returns the worst absolute deviation relative to the
// gradient's own scale, so near-zero entries don't blow up the ratio.
inline double finite_difference_check(const std::vector<double>& query,
                                      const Mat& centroids, double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 1e-2)
    throw ValidationError("finite_difference_check: epsilon must be in (0, 1e-2]");
  DMat analytic = grad_score_wrt_centroids(query, centroids);
  DMat probe = DMat::from_float(centroids);
  double worst_abs = 0.0;
  double scale = 1e-12;
  for (std::size_t j = 0; j < centroids.rows; ++j) {
    for (std::size_t f = 0; f < centroids.cols; ++f) {
      double saved = probe.row(j)[f];
      probe.row(j)[f] = saved + epsilon;
      double up = softmax_score(query, probe).score;
      probe.row(j)[f] = saved - epsilon;
      double down = softmax_score(query, probe).score;
      probe.row(j)[f] = saved;
      double numeric = (up - down) / (2.0 * epsilon);
      double a = analytic.row(j)[f];
      worst_abs = std::max(worst_abs, std::abs(a - numeric));
      scale = std::max({scale, std::abs(a), std::abs(numeric)});
    }
  }
  return worst_abs / scale;
}

// Every other query's positive serves as a negative.
inline std::vector<BatchInstance> in_batch_negatives(
    const std::vector<std::pair<QueryEmbedding, PseudoQuerySet>>& batch) {
  if (batch.size() < 2)
    throw ValidationError("in_batch_negatives: batch size must be >= 2");
  std::vector<BatchInstance> out;
  out.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    BatchInstance inst;
    inst.query = batch[i].first;
    inst.positive = batch[i].second;
    for (std::size_t j = 0; j < batch.size(); ++j)
      if (j != i) inst.negatives.push_back(batch[j].second);
    out.push_back(std::move(inst));
  }
  return out;
}

// Ways of boiling a document's token matrix down to k vectors, for comparing
// gradient concentration across representations.
enum class RepresentationStrategy { centroids, first_k, random_k };

inline RepresentationStrategy parse_strategy(const std::string& s) {
  if (s == "centroids") return RepresentationStrategy::centroids;
  if (s == "first_k") return RepresentationStrategy::first_k;
  if (s == "random_k") return RepresentationStrategy::random_k;
  throw ValidationError("unknown representation strategy: " + s);
}

inline std::string to_string(RepresentationStrategy s) {
  switch (s) {
    case RepresentationStrategy::centroids: return "centroids";
    case RepresentationStrategy::first_k: return "first_k";
    case RepresentationStrategy::random_k: return "random_k";
  }
  return "centroids";
}

// k-row stand-in for a document: cluster centroids, the first k token rows,
// or k token rows sampled without replacement (seeded per document).
inline PseudoQuerySet represent(const TokenEmbeddingMatrix& doc,
                                RepresentationStrategy strategy,
                                const ClusterConfig& config,
                                std::uint64_t seed = 0) {
  if (strategy == RepresentationStrategy::centroids)
    return cluster_document(doc, config);

  Mat rows = detail::eligible_rows(doc, config.include_cls);
  std::size_t k_eff = std::min<std::size_t>(config.k, rows.rows);
  std::vector<std::size_t> picks(rows.rows);
  for (std::size_t i = 0; i < picks.size(); ++i) picks[i] = i;
  if (strategy == RepresentationStrategy::random_k) {
    std::mt19937_64 rng(detail::hash_str(doc.doc_id, seed));
    for (std::size_t i = 0; i < k_eff; ++i)
      std::swap(picks[i], picks[i + rng() % (picks.size() - i)]);
    std::sort(picks.begin(), picks.begin() + k_eff);
  }

  PseudoQuerySet out;
  out.doc_id = doc.doc_id;
  out.k_effective = static_cast<std::uint32_t>(k_eff);
  out.centroids = Mat(k_eff, rows.cols);
  for (std::size_t j = 0; j < k_eff; ++j)
    std::copy(rows.row(picks[j]).begin(), rows.row(picks[j]).end(),
              out.centroids.row(j).begin());
  out.converged = true;
  return out;
}

// Per-instance loss plus max and population variance of r over the positive
// document's centroids.
inline std::vector<DiagnosticsSample> run_diagnostics(
    const std::vector<BatchInstance>& instances) {
  if (instances.empty())
    throw ValidationError("run_diagnostics: no instances");
  std::vector<DiagnosticsSample> out;
  out.reserve(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    RWeights r = r_weights(inst.query.vector, inst.positive.centroids);
    double mean = 0.0;
    for (double v : r.values) mean += v;
    mean /= static_cast<double>(r.values.size());
    double var = 0.0;
    for (double v : r.values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(r.values.size());
    DiagnosticsSample s;
    s.step = i;
    s.loss = batch_loss(inst);
    s.max_r = *std::max_element(r.values.begin(), r.values.end());
    s.var_r = var;
    out.push_back(s);
  }
  return out;
}

}  // namespace pqe
