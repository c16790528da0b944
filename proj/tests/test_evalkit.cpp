#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "pqe/evalkit.hpp"

using namespace pqe;
using Catch::Matchers::WithinAbs;

namespace {

RankedList make_list(std::string qid, std::initializer_list<std::string> docs) {
  RankedList l;
  l.qid = std::move(qid);
  std::size_t rank = 1;
  for (const auto& d : docs)
    l.entries.push_back({d, 1.0 / double(rank), rank}), ++rank;
  return l;
}

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name)
      : path(std::filesystem::temp_directory_path() / name) {}
  ~TempFile() { std::filesystem::remove(path); }
  void write(const std::string& text) const {
    std::ofstream os(path, std::ios::trunc);
    os << text;
  }
};

}  // namespace

TEST_CASE("mrr_at_k hand values") {
  Qrels q;
  q.judgments[{"q1", "d3"}] = 1;
  auto first = make_list("q1", {"d3", "a", "b"});
  CHECK(mrr_at_k(first, q, 10) == 1.0);

  auto third = make_list("q1", {"a", "b", "d3", "c"});
  CHECK_THAT(mrr_at_k(third, q, 10), WithinAbs(1.0 / 3.0, 1e-15));
  CHECK(mrr_at_k(third, q, 2) == 0.0);

  // unknown query id scores 0
  CHECK(mrr_at_k(make_list("q9", {"a"}), q, 10) == 0.0);
  CHECK_THROWS_AS(mrr_at_k(first, q, 0), ValidationError);
}

TEST_CASE("mrr ignores ordering below the first relevant entry") {
  Qrels q;
  q.judgments[{"q1", "rel"}] = 2;
  auto a = make_list("q1", {"x", "rel", "y", "z"});
  auto b = make_list("q1", {"x", "rel", "z", "y"});
  CHECK(mrr_at_k(a, q, 10) == mrr_at_k(b, q, 10));
}

TEST_CASE("recall_at_k hand values") {
  Qrels q;
  q.judgments[{"q1", "d1"}] = 1;
  q.judgments[{"q1", "d2"}] = 1;
  q.judgments[{"q1", "d3"}] = 0;  // judged non-relevant

  CHECK(recall_at_k(make_list("q1", {"d1", "d2"}), q, 10) == 1.0);
  CHECK(recall_at_k(make_list("q1", {"d1", "x"}), q, 10) == 0.5);
  CHECK(recall_at_k(make_list("q1", {"x", "y"}), q, 10) == 0.0);
  CHECK(recall_at_k(make_list("q1", {"x", "d1", "d2"}), q, 1) == 0.0);

  // query without relevant judgments is undefined
  CHECK(std::isnan(recall_at_k(make_list("q2", {"d1"}), q, 10)));
  CHECK_THROWS_AS(recall_at_k(make_list("q1", {"d1"}), q, 0), ValidationError);
}

TEST_CASE("ndcg_at_k hand values") {
  Qrels q;
  q.judgments[{"q1", "rel"}] = 1;

  // single relevant item at rank 2: DCG = 1/log2(3), ideal = 1
  auto second = make_list("q1", {"x", "rel", "y"});
  CHECK_THAT(ndcg_at_k(second, q, 10),
             WithinAbs(1.0 / std::log2(3.0), 1e-12));
  CHECK_THAT(ndcg_at_k(second, q, 10), WithinAbs(0.6309, 5e-5));

  CHECK(ndcg_at_k(make_list("q1", {"x", "y", "rel"}), q, 2) == 0.0);

  // ideal ordering of graded docs scores exactly 1
  Qrels graded;
  graded.judgments[{"q2", "a"}] = 3;
  graded.judgments[{"q2", "b"}] = 2;
  graded.judgments[{"q2", "c"}] = 1;
  CHECK(ndcg_at_k(make_list("q2", {"a", "b", "c", "x"}), graded, 10) == 1.0);

  // all-zero relevance
  CHECK(ndcg_at_k(make_list("q3", {"x"}), graded, 10) == 0.0);
  CHECK_THROWS_AS(ndcg_at_k(second, q, 0), ValidationError);
}

TEST_CASE("metrics are bounded and non-decreasing in k") {
  Qrels q;
  q.judgments[{"q1", "d2"}] = 2;
  q.judgments[{"q1", "d5"}] = 1;
  auto list = make_list("q1", {"d9", "d2", "d7", "d3", "d5", "d1"});
  double prev_mrr = 0.0, prev_recall = 0.0, prev_ndcg = 0.0;
  for (std::size_t k = 1; k <= 8; ++k) {
    double m = mrr_at_k(list, q, k);
    double r = recall_at_k(list, q, k);
    double n = ndcg_at_k(list, q, k);
    CHECK((m >= 0.0 && m <= 1.0));
    CHECK((r >= 0.0 && r <= 1.0));
    CHECK((n >= 0.0 && n <= 1.0));
    CHECK(m >= prev_mrr);
    CHECK(r >= prev_recall);
    CHECK(n >= prev_ndcg);
    prev_mrr = m;
    prev_recall = r;
    prev_ndcg = n;
  }
}

TEST_CASE("topk_accuracy counts queries with a hit") {
  Qrels q;
  q.judgments[{"q1", "d1"}] = 1;
  q.judgments[{"q2", "d2"}] = 1;
  std::vector<RankedList> lists{make_list("q1", {"d1", "x"}),
                                make_list("q2", {"x", "y"})};
  CHECK(topk_accuracy(lists, q, 20) == 0.5);

  lists[1] = make_list("q2", {"d2"});
  CHECK(topk_accuracy(lists, q, 20) == 1.0);
  CHECK(topk_accuracy({make_list("q1", {"x", "d1"})}, q, 1) == 0.0);
  CHECK_THROWS_AS(topk_accuracy({}, q, 20), ValidationError);
  CHECK_THROWS_AS(topk_accuracy(lists, q, 0), ValidationError);
}

TEST_CASE("read_qrels parses the four-column format") {
  TempFile f("pqe_test_qrels.txt");
  f.write("q1 0 d7 1\nq1 0 d9 0\nq2 0 d7 2\n\n");
  Qrels q = read_qrels(f.path);
  CHECK(q.judgments.size() == 3);
  CHECK(q.relevance("q1", "d7") == 1);
  CHECK(q.relevance("q1", "d9") == 0);
  CHECK(q.relevance("q2", "d7") == 2);
  CHECK(q.relevance("q2", "nope") == 0);
  CHECK(q.has_query("q1"));
  CHECK_FALSE(q.has_query("q3"));
}

TEST_CASE("read_qrels reports the offending line number") {
  TempFile f("pqe_test_qrels_bad.txt");
  f.write("q1 0 d7 1\nq1 0 d8\n");
  CHECK_THROWS_WITH(read_qrels(f.path),
                    Catch::Matchers::ContainsSubstring("line 2"));

  f.write("q1 0 d7 1\nq1 0 d7 2\n");
  CHECK_THROWS_WITH(read_qrels(f.path),
                    Catch::Matchers::ContainsSubstring("line 2"));

  f.write("q1 0 d7 -1\n");
  CHECK_THROWS_AS(read_qrels(f.path), FormatError);

  CHECK_THROWS_AS(read_qrels("/nonexistent/qrels"), IoError);
}

TEST_CASE("run files round-trip") {
  std::vector<RankedList> lists;
  lists.push_back({"q1", {{"d1", 3.25, 1}, {"d2", 0.12345678901234567, 2}}});
  lists.push_back({"q2", {{"d9", -1.5, 1}}});

  TempFile f("pqe_test_run.txt");
  write_run(lists, f.path, "mytag");
  auto back = read_run(f.path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].qid == "q1");
  REQUIRE(back[0].entries.size() == 2);
  CHECK(back[0].entries[0].doc_id == "d1");
  CHECK(back[0].entries[0].rank == 1);
  CHECK(back[0].entries[0].score == 3.25);
  CHECK(back[0].entries[1].score == 0.12345678901234567);
  CHECK(back[1].entries[0].score == -1.5);

  // format spot-check: qid Q0 docid rank score tag
  std::ifstream is(f.path);
  std::string qid, q0, doc, tag;
  std::size_t rank;
  double score;
  is >> qid >> q0 >> doc >> rank >> score >> tag;
  CHECK(qid == "q1");
  CHECK(q0 == "Q0");
  CHECK(tag == "mytag");
}

TEST_CASE("read_run rejects malformed lines with line numbers") {
  TempFile f("pqe_test_run_bad.txt");
  f.write("q1 Q0 d1 1 0.5 tag\nq1 Q0 d2\n");
  CHECK_THROWS_WITH(read_run(f.path),
                    Catch::Matchers::ContainsSubstring("line 2"));
  CHECK_THROWS_AS(read_run("/nonexistent/run"), IoError);
}
