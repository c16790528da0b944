#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "pqe/cluster.hpp"
#include "pqe/embed.hpp"
#include "pqe/errors.hpp"
#include "pqe/index.hpp"

namespace pqe {

// Binary formats are little-endian regardless of host.
namespace detail {

static_assert(sizeof(float) == 4);

template <typename T>
void put(std::ostream& os, T v) {
  static_assert(std::is_integral_v<T>);
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i)
    buf[i] = static_cast<unsigned char>(
        static_cast<std::make_unsigned_t<T>>(v) >> (8 * i));
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  unsigned char buf[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(buf), sizeof(T)))
    throw FormatError("unexpected EOF");
  std::make_unsigned_t<T> v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    v |= static_cast<std::make_unsigned_t<T>>(buf[i]) << (8 * i);
  return static_cast<T>(v);
}

inline void put_f32(std::ostream& os, float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, 4);
  put<std::uint32_t>(os, bits);
}

inline float get_f32(std::istream& is) {
  std::uint32_t bits = get<std::uint32_t>(is);
  float f;
  std::memcpy(&f, &bits, 4);
  return f;
}

inline void put_floats(std::ostream& os, const std::vector<float>& v) {
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * 4));
  } else {
    for (float f : v) put_f32(os, f);
  }
}

inline void get_floats(std::istream& is, std::vector<float>& v) {
  if constexpr (std::endian::native == std::endian::little) {
    if (!is.read(reinterpret_cast<char*>(v.data()),
                 static_cast<std::streamsize>(v.size() * 4)))
      throw FormatError("unexpected EOF");
  } else {
    for (float& f : v) f = get_f32(is);
  }
}

inline void put_id(std::ostream& os, const std::string& id) {
  if (id.size() > 0xffff) throw ValidationError("doc_id longer than 65535");
  put<std::uint16_t>(os, static_cast<std::uint16_t>(id.size()));
  os.write(id.data(), static_cast<std::streamsize>(id.size()));
}

inline std::string get_id(std::istream& is) {
  std::uint16_t len = get<std::uint16_t>(is);
  std::string id(len, '\0');
  if (len && !is.read(id.data(), len)) throw FormatError("unexpected EOF");
  return id;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path.string());
  return os;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open for reading: " + path.string());
  return is;
}

inline void check_magic(std::istream& is, const char expected[4]) {
  char m[4];
  if (!is.read(m, 4)) throw FormatError("unexpected EOF");
  if (std::memcmp(m, expected, 4) != 0) throw FormatError("bad magic");
}

inline void check_version(std::istream& is) {
  std::uint32_t version = get<std::uint32_t>(is);
  if (version != 1) throw FormatError("unsupported version");
}

inline void check_finite(const Mat& m, const std::string& id) {
  if (!m.all_finite())
    throw FormatError("non-finite value in record '" + id + "'");
}

}  // namespace detail

// ---- PQEB v1: token-embedding corpus ----------------------------------

inline void write_embeddings(const std::vector<TokenEmbeddingMatrix>& corpus,
                             const std::filesystem::path& path) {
  std::uint32_t dim = corpus.empty() ? 0 : static_cast<std::uint32_t>(corpus[0].dim);
  for (const auto& doc : corpus) {
    if (doc.dim != dim)
      throw ValidationError("write_embeddings: non-uniform dim");
    detail::check_finite(doc.rows, doc.doc_id);
  }
  auto os = detail::open_out(path);
  os.write("PQEB", 4);
  detail::put<std::uint32_t>(os, 1);
  detail::put<std::uint32_t>(os, dim);
  detail::put<std::uint64_t>(os, corpus.size());
  for (const auto& doc : corpus) {
    detail::put_id(os, doc.doc_id);
    detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(doc.rows.rows));
    detail::put<std::uint8_t>(os, doc.has_cls ? 1 : 0);
    detail::put_floats(os, doc.rows.data);
  }
  if (!os) throw IoError("write failed: " + path.string());
}

inline std::vector<TokenEmbeddingMatrix> read_embeddings(
    const std::filesystem::path& path) {
  auto is = detail::open_in(path);
  detail::check_magic(is, "PQEB");
  detail::check_version(is);
  std::uint32_t dim = detail::get<std::uint32_t>(is);
  std::uint64_t count = detail::get<std::uint64_t>(is);
  std::vector<TokenEmbeddingMatrix> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    TokenEmbeddingMatrix doc;
    doc.doc_id = detail::get_id(is);
    std::uint32_t m = detail::get<std::uint32_t>(is);
    doc.has_cls = detail::get<std::uint8_t>(is) != 0;
    doc.dim = dim;
    doc.rows = Mat(m, dim);
    detail::get_floats(is, doc.rows.data);
    detail::check_finite(doc.rows, doc.doc_id);
    out.push_back(std::move(doc));
  }
  return out;
}

// ---- PQEC v1: pseudo-query centroids ----------------------------------

inline void write_centroids(const std::vector<PseudoQuerySet>& pqs,
                            const std::filesystem::path& path) {
  std::uint32_t dim =
      pqs.empty() ? 0 : static_cast<std::uint32_t>(pqs[0].centroids.cols);
  for (const auto& p : pqs) {
    if (p.centroids.cols != dim)
      throw ValidationError("write_centroids: non-uniform dim");
    detail::check_finite(p.centroids, p.doc_id);
  }
  auto os = detail::open_out(path);
  os.write("PQEC", 4);
  detail::put<std::uint32_t>(os, 1);
  detail::put<std::uint32_t>(os, dim);
  detail::put<std::uint64_t>(os, pqs.size());
  for (const auto& p : pqs) {
    detail::put_id(os, p.doc_id);
    detail::put<std::uint32_t>(os, p.k_effective);
    detail::put<std::uint8_t>(os, p.converged ? 1 : 0);
    detail::put<std::uint32_t>(os, p.iterations_run);
    detail::put_floats(os, p.centroids.data);
  }
  if (!os) throw IoError("write failed: " + path.string());
}

// Assignments are not serialized; read-back sets have empty assignment.
inline std::vector<PseudoQuerySet> read_centroids(
    const std::filesystem::path& path) {
  auto is = detail::open_in(path);
  detail::check_magic(is, "PQEC");
  detail::check_version(is);
  std::uint32_t dim = detail::get<std::uint32_t>(is);
  std::uint64_t count = detail::get<std::uint64_t>(is);
  std::vector<PseudoQuerySet> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    PseudoQuerySet p;
    p.doc_id = detail::get_id(is);
    p.k_effective = detail::get<std::uint32_t>(is);
    p.converged = detail::get<std::uint8_t>(is) != 0;
    p.iterations_run = detail::get<std::uint32_t>(is);
    p.centroids = Mat(p.k_effective, dim);
    detail::get_floats(is, p.centroids.data);
    detail::check_finite(p.centroids, p.doc_id);
    out.push_back(std::move(p));
  }
  return out;
}

// ---- PQEI v1: centroid index ------------------------------------------

inline void save_index(const CentroidIndex& index,
                       const std::filesystem::path& path) {
  auto os = detail::open_out(path);
  os.write("PQEI", 4);
  detail::put<std::uint32_t>(os, 1);
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(index.dim));
  detail::put<std::uint64_t>(os, index.num_docs());
  detail::put<std::uint64_t>(os, index.rows.rows);
  for (std::size_t ord = 0; ord < index.num_docs(); ++ord) {
    detail::put_id(os, index.doc_ids[ord]);
    detail::put<std::uint32_t>(
        os, static_cast<std::uint32_t>(index.doc_offsets[ord].count));
  }
  detail::put_floats(os, index.rows.data);
  if (!os) throw IoError("write failed: " + path.string());
}

inline CentroidIndex load_index(const std::filesystem::path& path) {
  auto is = detail::open_in(path);
  detail::check_magic(is, "PQEI");
  detail::check_version(is);
  CentroidIndex idx;
  idx.dim = detail::get<std::uint32_t>(is);
  std::uint64_t docs = detail::get<std::uint64_t>(is);
  std::uint64_t total = detail::get<std::uint64_t>(is);
  std::size_t at = 0;
  for (std::uint64_t ord = 0; ord < docs; ++ord) {
    idx.doc_ids.push_back(detail::get_id(is));
    std::uint32_t k = detail::get<std::uint32_t>(is);
    idx.doc_offsets.push_back({at, k});
    for (std::uint32_t r = 0; r < k; ++r)
      idx.row_to_doc.push_back(static_cast<std::uint32_t>(ord));
    at += k;
  }
  if (at != total) throw FormatError("row count mismatch in doc table");
  idx.rows = Mat(total, idx.dim);
  detail::get_floats(is, idx.rows.data);
  detail::check_finite(idx.rows, "index");
  return idx;
}

}  // namespace pqe
