#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "pqe/embed.hpp"
#include "pqe/io.hpp"

using namespace pqe;

namespace {
std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}
}  // namespace

TEST_CASE("tokenize splits, lowercases and prepends [CLS]") {
  auto toks = tokenize("Hello, world", 512);
  REQUIRE(toks.size() == 3);
  CHECK(toks[0].surface == "[CLS]");
  CHECK(toks[1].surface == "hello");
  CHECK(toks[2].surface == "world");
  CHECK(toks[2].index == 2);
}

TEST_CASE("tokenize truncation counts the [CLS] token") {
  auto toks = tokenize("a a a", 2);
  REQUIRE(toks.size() == 2);
  CHECK(toks[0].surface == "[CLS]");
  CHECK(toks[1].surface == "a");
}

TEST_CASE("tokenize boundary: 511 words fill the 512 limit") {
  std::string text;
  for (int i = 0; i < 600; ++i) text += "w" + std::to_string(i) + " ";
  auto toks = tokenize(text, 512);
  CHECK(toks.size() == 512);
  CHECK(toks.back().index == 511);
}

TEST_CASE("tokenize rejects empty documents") {
  CHECK_THROWS_AS(tokenize("  .,;  ", 512), ValidationError);
  CHECK_THROWS_AS(tokenize("x", 0), ValidationError);
}

TEST_CASE("embed is deterministic") {
  auto toks = tokenize("the quick brown fox", 512);
  auto a = embed(toks, 16, 7, "d");
  auto b = embed(toks, 16, 7, "d");
  CHECK(a == b);
  auto c = embed(toks, 16, 8, "d");
  CHECK(a.rows.data != c.rows.data);
}

TEST_CASE("embed row norms stay within [0.99, 1.01]") {
  auto m = embed(tokenize("alpha beta gamma delta epsilon", 512), 16, 7);
  REQUIRE(m.rows.rows == 6);
  for (std::size_t i = 0; i < m.rows.rows; ++i) {
    double n = 0.0;
    for (float v : m.rows.row(i)) n += double(v) * v;
    n = std::sqrt(n);
    CHECK(n >= 0.99);
    CHECK(n <= 1.01);
  }
}

TEST_CASE("embed rejects dim < 2") {
  CHECK_THROWS_AS(embed(tokenize("x", 512), 1, 0), ValidationError);
}

TEST_CASE("disjoint vocabularies give low cross-document similarity") {
  auto a = embed_text("a", "garnet topaz opal beryl quartz", 64, 1);
  auto b = embed_text("b", "sparrow heron plover finch swift", 64, 1);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 1; i < a.rows.rows; ++i)
    for (std::size_t j = 1; j < b.rows.rows; ++j) {
      double ip = 0.0;
      for (std::size_t f = 0; f < 64; ++f)
        ip += double(a.rows.row(i)[f]) * b.rows.row(j)[f];
      sum += ip;
      ++count;
    }
  CHECK(std::abs(sum / double(count)) < 0.5);
}

TEST_CASE("[CLS] row summarizes the token multiset order-independently") {
  auto a = embed(tokenize("red green blue", 512), 32, 3);
  auto b = embed(tokenize("blue red green", 512), 32, 3);
  for (std::size_t f = 0; f < 32; ++f)
    CHECK(a.rows.row(0)[f] == b.rows.row(0)[f]);
}

TEST_CASE("PQEB round-trip is bit-exact") {
  std::vector<TokenEmbeddingMatrix> corpus;
  corpus.push_back(embed_text("doc-a", "one two three", 8, 5));
  corpus.push_back(embed_text("doc-b", "four five", 8, 5));
  corpus.push_back(embed_text("doc-c", "six", 8, 5));
  auto path = temp_file("pqe_test.pqeb");
  write_embeddings(corpus, path);
  auto back = read_embeddings(path);
  CHECK(back == corpus);
  std::filesystem::remove(path);
}

TEST_CASE("PQEB empty corpus round-trips") {
  auto path = temp_file("pqe_empty.pqeb");
  write_embeddings({}, path);
  CHECK(read_embeddings(path).empty());
  std::filesystem::remove(path);
}

TEST_CASE("PQEB read rejects bad magic, version and truncation") {
  auto path = temp_file("pqe_bad.pqeb");
  {
    std::ofstream os(path, std::ios::binary);
    os << "NOPE garbage";
  }
  CHECK_THROWS_WITH(read_embeddings(path), "bad magic");

  write_embeddings({embed_text("d", "a b c", 8, 1)}, path);
  // corrupt the version field
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(4);
    char two[4] = {2, 0, 0, 0};
    f.write(two, 4);
  }
  CHECK_THROWS_WITH(read_embeddings(path), "unsupported version");

  write_embeddings({embed_text("d", "a b c", 8, 1)}, path);
  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 7);
  CHECK_THROWS_WITH(read_embeddings(path), "unexpected EOF");
  std::filesystem::remove(path);
}

TEST_CASE("PQEB read rejects non-finite payload") {
  auto corpus = std::vector<TokenEmbeddingMatrix>{embed_text("d", "a b", 4, 1)};
  auto path = temp_file("pqe_nan.pqeb");
  write_embeddings(corpus, path);
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(-4, std::ios::end);
    std::uint32_t nan_bits = 0x7fc00000;
    f.write(reinterpret_cast<const char*>(&nan_bits), 4);
  }
  CHECK_THROWS_AS(read_embeddings(path), FormatError);
  std::filesystem::remove(path);
}
