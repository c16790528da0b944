#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pqe/errors.hpp"
#include "pqe/matrix.hpp"

namespace pqe {

inline constexpr std::size_t kDefaultTokenLimit = 512;
inline constexpr const char* kClsSurface = "[CLS]";

struct Token {
  std::string surface;
  std::size_t index = 0;  // position in the truncated sequence
};

struct TokenEmbeddingMatrix {
  std::string doc_id;
  std::size_t dim = 0;
  Mat rows;            // m x dim
  bool has_cls = false;  // row 0 is the whole-text summary row

  friend bool operator==(const TokenEmbeddingMatrix&,
                         const TokenEmbeddingMatrix&) = default;
};

// Lowercase, split on anything that is not a letter or digit, prepend [CLS].
// The limit counts the [CLS] token.
inline std::vector<Token> tokenize(std::string_view text, std::size_t limit) {
  if (limit < 1) throw ValidationError("tokenize: limit must be >= 1");
  std::vector<Token> out;
  out.push_back({kClsSurface, 0});
  std::string word;
  auto flush = [&] {
    if (!word.empty() && out.size() < limit) out.push_back({word, out.size()});
    word.clear();
  };
  for (char ch : text) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (std::isalnum(c))
      word.push_back(static_cast<char>(std::tolower(c)));
    else
      flush();
  }
  flush();
  if (out.size() == 1) throw ValidationError("empty document");
  return out;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_str(std::string_view s, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ splitmix64(seed);
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(h);
}

// Signed feature in [-1, 1) drawn from the hash stream of (surface, seed).
inline double hashed_feature(std::uint64_t base, std::size_t f) {
  std::uint64_t h = splitmix64(base + 0x51ed2701 * (f + 1));
  return static_cast<double>(h >> 11) * (2.0 / 9007199254740992.0) - 1.0;
}

inline void add_hashed(std::vector<double>& acc, std::uint64_t base,
                       double weight) {
  for (std::size_t f = 0; f < acc.size(); ++f)
    acc[f] += weight * hashed_feature(base, f);
}

// Unit-norm hash vector for one token surface, built from the whole word
// plus its character 3..5-grams (with boundary markers). Words sharing
// substrings get correlated vectors, which is what gives K-means cluster
// structure over the token matrix.
inline std::vector<double> surface_vector(std::string_view surface,
                                          std::uint64_t seed,
                                          std::size_t dim) {
  std::vector<double> v(dim, 0.0);
  add_hashed(v, hash_str(surface, seed), 1.0);
  std::string padded = "<" + std::string(surface) + ">";
  for (std::size_t n = 3; n <= 5; ++n) {
    if (padded.size() < n) break;
    for (std::size_t i = 0; i + n <= padded.size(); ++i)
      add_hashed(v, hash_str({padded.data() + i, n}, seed), 1.0);
  }
  double norm2 = 0.0;
  for (double x : v) norm2 += x * x;
  double inv = 1.0 / std::sqrt(norm2);
  for (double& x : v) x *= inv;
  return v;
}

}  // namespace detail

// Deterministic stub encoder. Each non-[CLS] token becomes its unit-norm
// surface hash vector plus a positional perturbation of L2 norm 0.01. The
// [CLS] row is the normalized sum of the other tokens' unperturbed surface
// vectors, acting as the whole-text summary row.
inline TokenEmbeddingMatrix embed(const std::vector<Token>& tokens,
                                  std::size_t dim, std::uint64_t seed,
                                  std::string doc_id = {}) {
  if (dim < 2) throw ValidationError("dim too small");
  if (tokens.empty()) throw ValidationError("embed: empty token sequence");

  bool has_cls = tokens.front().surface == kClsSurface;
  TokenEmbeddingMatrix out;
  out.doc_id = std::move(doc_id);
  out.dim = dim;
  out.has_cls = has_cls;
  out.rows = Mat(tokens.size(), dim);

  std::vector<double> cls_sum(dim, 0.0);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (has_cls && i == 0) continue;
    auto v = detail::surface_vector(tokens[i].surface, seed, dim);
    for (std::size_t f = 0; f < dim; ++f) cls_sum[f] += v[f];

    // positional perturbation, scaled to exactly 0.01
    std::uint64_t pbase =
        detail::hash_str(tokens[i].surface, seed ^ 0xa5a5a5a5ULL) +
        0x9e3779b9ULL * tokens[i].index;
    std::vector<double> p(dim);
    double pnorm2 = 0.0;
    for (std::size_t f = 0; f < dim; ++f) {
      p[f] = detail::hashed_feature(pbase, f);
      pnorm2 += p[f] * p[f];
    }
    double pscale = 0.01 / std::sqrt(pnorm2);
    for (std::size_t f = 0; f < dim; ++f)
      out.rows.row(i)[f] = static_cast<float>(v[f] + p[f] * pscale);
  }

  if (has_cls) {
    double norm2 = 0.0;
    for (double x : cls_sum) norm2 += x * x;
    if (norm2 < 1e-24) {
      // [CLS]-only input: fall back to hashing the [CLS] surface itself
      cls_sum = detail::surface_vector(kClsSurface, seed, dim);
      norm2 = 1.0;
    }
    double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t f = 0; f < dim; ++f)
      out.rows.row(0)[f] = static_cast<float>(cls_sum[f] * inv);
  } else {
    auto v = detail::surface_vector(tokens[0].surface, seed, dim);
    // no CLS marker: row 0 is an ordinary token row
    std::uint64_t pbase =
        detail::hash_str(tokens[0].surface, seed ^ 0xa5a5a5a5ULL);
    std::vector<double> p(dim);
    double pnorm2 = 0.0;
    for (std::size_t f = 0; f < dim; ++f) {
      p[f] = detail::hashed_feature(pbase, f);
      pnorm2 += p[f] * p[f];
    }
    double pscale = 0.01 / std::sqrt(pnorm2);
    for (std::size_t f = 0; f < dim; ++f)
      out.rows.row(0)[f] = static_cast<float>(v[f] + p[f] * pscale);
  }
  return out;
}

// tokenize + embed in one step
inline TokenEmbeddingMatrix embed_text(std::string doc_id,
                                       std::string_view text, std::size_t dim,
                                       std::uint64_t seed,
                                       std::size_t limit = kDefaultTokenLimit) {
  return embed(tokenize(text, limit), dim, seed, std::move(doc_id));
}

}  // namespace pqe
