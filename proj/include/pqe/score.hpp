#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pqe/embed.hpp"
#include "pqe/errors.hpp"
#include "pqe/matrix.hpp"

namespace pqe {

enum class Pooling { first_token, mean };

inline Pooling parse_pooling(const std::string& s) {
  if (s == "first_token") return Pooling::first_token;
  if (s == "mean") return Pooling::mean;
  throw ValidationError("unknown pooling strategy: " + s);
}

struct QueryEmbedding {
  std::string qid;
  std::vector<double> vector;
};

struct ScoreBreakdown {
  std::vector<double> weights;     // softmax attention, sums to 1
  std::vector<double> aggregated;  // weighted sum of centroids
  double score = 0.0;
};

inline QueryEmbedding pool_query(const TokenEmbeddingMatrix& tokens,
                                 Pooling strategy) {
  if (tokens.rows.rows < 1) throw ValidationError("pool_query: empty matrix");
  QueryEmbedding out;
  out.qid = tokens.doc_id;
  out.vector.resize(tokens.dim);
  if (strategy == Pooling::first_token) {
    auto r = tokens.rows.row(0);
    for (std::size_t f = 0; f < tokens.dim; ++f) out.vector[f] = r[f];
  } else {
    for (std::size_t i = 0; i < tokens.rows.rows; ++i) {
      auto r = tokens.rows.row(i);
      for (std::size_t f = 0; f < tokens.dim; ++f) out.vector[f] += r[f];
    }
    double inv = 1.0 / static_cast<double>(tokens.rows.rows);
    for (double& v : out.vector) v *= inv;
  }
  return out;
}

namespace detail {

template <typename MatT>
std::vector<double> centroid_logits(const std::vector<double>& query,
                                    const MatT& centroids) {
  if (centroids.rows < 1) throw ValidationError("score: no centroids");
  if (centroids.cols != query.size())
    throw ValidationError("score: dim mismatch");
  std::vector<double> logits(centroids.rows);
  for (std::size_t j = 0; j < centroids.rows; ++j) {
    logits[j] = dot(query, centroids.row(j));
    if (!std::isfinite(logits[j]))
      throw ValidationError("score: non-finite logit");
  }
  return logits;
}

}  // namespace detail

// Softmax over the query/centroid dot products, max-subtracted.
template <typename MatT>
std::vector<double> attention_weights(const std::vector<double>& query,
                                      const MatT& centroids) {
  std::vector<double> logits = detail::centroid_logits(query, centroids);
  double zmax = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& z : logits) {
    z = std::exp(z - zmax);
    sum += z;
  }
  for (double& z : logits) z /= sum;
  return logits;
}

template <typename MatT>
std::vector<double> aggregate(const std::vector<double>& weights,
                              const MatT& centroids) {
  if (weights.size() != centroids.rows)
    throw ValidationError("aggregate: weight/centroid count mismatch");
  std::vector<double> out(centroids.cols, 0.0);
  for (std::size_t j = 0; j < centroids.rows; ++j) {
    auto c = centroids.row(j);
    for (std::size_t f = 0; f < centroids.cols; ++f)
      out[f] += weights[j] * static_cast<double>(c[f]);
  }
  return out;
}

// Full softmax aggregation score.
template <typename MatT>
ScoreBreakdown softmax_score(const std::vector<double>& query,
                             const MatT& centroids) {
  ScoreBreakdown out;
  out.weights = attention_weights(query, centroids);
  out.aggregated = aggregate(out.weights, centroids);
  out.score = 0.0;
  for (std::size_t f = 0; f < out.aggregated.size(); ++f)
    out.score += query[f] * out.aggregated[f];
  return out;
}

struct ArgmaxScore {
  std::size_t winner = 0;
  double score = 0.0;  // dot(query, best centroid), an upper bound on softmax
};

// Best single centroid by dot product, ties to the lowest index.
template <typename MatT>
ArgmaxScore argmax_score(const std::vector<double>& query,
                         const MatT& centroids) {
  std::vector<double> logits = detail::centroid_logits(query, centroids);
  ArgmaxScore out;
  out.score = logits[0];
  for (std::size_t j = 1; j < logits.size(); ++j) {
    if (logits[j] > out.score) {
      out.score = logits[j];
      out.winner = j;
    }
  }
  return out;
}

}  // namespace pqe
