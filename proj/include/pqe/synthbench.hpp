#pragma once

#include <chrono>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pqe/cluster.hpp"
#include "pqe/embed.hpp"
#include "pqe/errors.hpp"
#include "pqe/evalkit.hpp"
#include "pqe/index.hpp"
#include "pqe/score.hpp"

namespace pqe {

// Multi-topic synthetic corpus: each document concatenates topics_per_doc
// segments with disjoint per-segment vocabularies, so a query drawn from one
// segment has exactly one relevant document.
struct SynthSpec {
  std::size_t num_docs = 2000;
  std::size_t topics_per_doc = 4;
  std::size_t tokens_per_topic = 24;
  std::size_t vocab_per_topic = 96;
  std::size_t num_queries = 500;
  std::uint64_t seed = 42;

  void validate() const {
    if (!num_docs || !topics_per_doc || !tokens_per_topic || !num_queries)
      throw ValidationError("synth spec: all counts must be positive");
    if (!vocab_per_topic)
      throw ValidationError("synth spec: vocabulary exhausted (vocab_per_topic = 0)");
  }
};

struct SynthDoc {
  std::string doc_id;
  std::string text;
};

struct SynthQuery {
  std::string qid;
  std::string text;
};

struct SynthCorpus {
  std::vector<SynthDoc> documents;
  std::vector<SynthQuery> queries;
  Qrels qrels;
};

namespace detail {

// engine-deterministic bounded draw (std distributions are not portable)
inline std::size_t bounded(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

// shared topical vocabulary
inline std::string topic_word(std::size_t topic, std::size_t word) {
  return "t" + std::to_string(topic) + "w" + std::to_string(word);
}

// segment-private vocabulary under a random per-segment prefix; these words
// make the source document the unique relevant one for its queries, and the
// shared prefix keeps them in one tight cluster
inline std::string salt_word(std::mt19937_64& rng, std::string& prefix,
                             std::size_t word) {
  if (word == 0) {
    prefix.clear();
    for (int i = 0; i < 8; ++i)
      prefix.push_back(static_cast<char>('a' + bounded(rng, 26)));
  }
  return prefix + static_cast<char>('a' + word % 26);
}

inline std::size_t num_global_topics(const SynthSpec& spec) {
  return std::max<std::size_t>(spec.topics_per_doc + 1,
                               std::min<std::size_t>(spec.num_docs, 200));
}

}  // namespace detail

// Segments mix words from a shared global topic with words private to the
// (document, segment) pair. Words within a segment are distinct, so no
// cluster anywhere concentrates a repeated token. Queries replay one segment
// verbatim: the topic words recall the neighborhood and the private words
// single out the one relevant document.
inline SynthCorpus generate(const SynthSpec& spec) {
  spec.validate();
  SynthCorpus out;
  std::mt19937_64 rng(spec.seed);
  std::size_t topics = detail::num_global_topics(spec);
  std::size_t salt_count = std::max<std::size_t>(2, spec.tokens_per_topic / 6);
  if (spec.vocab_per_topic < spec.tokens_per_topic)
    throw ValidationError(
        "synth spec: vocabulary exhausted (vocab_per_topic < tokens_per_topic)");

  // each document draws distinct global topics for its segments
  std::vector<std::vector<std::size_t>> doc_topics(spec.num_docs);
  for (std::size_t d = 0; d < spec.num_docs; ++d) {
    std::vector<std::size_t>& mine = doc_topics[d];
    while (mine.size() < spec.topics_per_doc) {
      std::size_t t = detail::bounded(rng, topics);
      if (std::find(mine.begin(), mine.end(), t) == mine.end())
        mine.push_back(t);
    }
  }

  // distinct topic-word sample per segment, Fisher-Yates prefix
  auto draw_topic_words = [&](std::size_t topic, std::size_t n) {
    std::vector<std::size_t> ids(spec.vocab_per_topic);
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    for (std::size_t i = 0; i < n; ++i)
      std::swap(ids[i], ids[i + detail::bounded(rng, ids.size() - i)]);
    std::vector<std::string> words;
    for (std::size_t i = 0; i < n; ++i)
      words.push_back(detail::topic_word(topic, ids[i]));
    return words;
  };

  out.documents.reserve(spec.num_docs);
  // remember each segment's word lists for query construction
  std::vector<std::vector<std::vector<std::string>>> seg_topic_words(
      spec.num_docs);
  for (std::size_t d = 0; d < spec.num_docs; ++d) {
    std::string text;
    seg_topic_words[d].resize(spec.topics_per_doc);
    for (std::size_t s = 0; s < spec.topics_per_doc; ++s) {
      std::size_t topic_n = spec.tokens_per_topic - salt_count;
      auto words = draw_topic_words(doc_topics[d][s], topic_n);
      std::string prefix;
      for (std::size_t i = 0; i < salt_count; ++i)
        words.push_back(detail::salt_word(rng, prefix, i));
      seg_topic_words[d][s] = words;
      for (const auto& w : words) {
        if (!text.empty()) text.push_back(' ');
        text += w;
      }
    }
    out.documents.push_back({"doc" + std::to_string(d), std::move(text)});
  }

  out.queries.reserve(spec.num_queries);
  for (std::size_t q = 0; q < spec.num_queries; ++q) {
    std::size_t d = detail::bounded(rng, spec.num_docs);
    std::size_t s = detail::bounded(rng, spec.topics_per_doc);
    const auto& words = seg_topic_words[d][s];
    // the segment's topic-word sample (salt words stay in the document)
    std::string text;
    for (std::size_t i = 0; i + salt_count < words.size(); ++i) {
      if (!text.empty()) text.push_back(' ');
      text += words[i];
    }
    std::string qid = "q" + std::to_string(q);
    out.qrels.judgments[{qid, "doc" + std::to_string(d)}] = 1;
    out.queries.push_back({std::move(qid), std::move(text)});
  }
  return out;
}

struct BenchConfig {
  std::uint32_t k = 8;
  RetrievalMode mode = RetrievalMode::two_step;
  std::size_t candidates = 0;  // 0 means the 1000*k default
};

struct BenchRow {
  std::uint32_t k = 0;
  RetrievalMode mode = RetrievalMode::two_step;
  std::size_t candidates = 0;
  std::size_t topics_per_doc = 0;
  double mrr10 = 0.0;
  double recall100 = 0.0;
  double top20 = 0.0;
  double cluster_ms = 0.0;
  double index_ms = 0.0;
  double search_ms_median = 0.0;  // per-query
};

struct BenchReport {
  std::vector<BenchRow> rows;

  // one CSV row per configuration, header included
  std::string to_csv() const {
    std::ostringstream os;
    os << "k,mode,candidates,topics_per_doc,mrr@10,recall@100,top20_acc,"
          "cluster_ms,index_ms,search_ms_median\n";
    os.precision(6);
    for (const auto& r : rows) {
      os << r.k << ',' << to_string(r.mode) << ',' << r.candidates << ','
         << r.topics_per_doc << ',' << r.mrr10 << ',' << r.recall100 << ','
         << r.top20 << ',' << r.cluster_ms << ',' << r.index_ms << ','
         << r.search_ms_median << '\n';
    }
    return os.str();
  }
};

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point from) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - from)
      .count();
}

}  // namespace detail

// Embed once per spec, then cluster/index/search per configuration.
inline BenchReport run_benchmark(const SynthSpec& spec,
                                 const std::vector<BenchConfig>& configs,
                                 std::size_t dim = 32,
                                 std::size_t final_k = 100) {
  if (configs.empty()) throw ValidationError("run_benchmark: no configs");
  SynthCorpus corpus = generate(spec);

  std::vector<TokenEmbeddingMatrix> embedded;
  embedded.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents)
    embedded.push_back(embed_text(doc.doc_id, doc.text, dim, spec.seed));
  std::vector<QueryEmbedding> queries;
  queries.reserve(corpus.queries.size());
  for (const auto& q : corpus.queries) {
    auto m = embed_text(q.qid, q.text, dim, spec.seed);
    queries.push_back(pool_query(m, Pooling::first_token));
  }

  BenchReport report;
  for (const auto& cfg : configs) {
    BenchRow row;
    row.k = cfg.k;
    row.mode = cfg.mode;
    row.topics_per_doc = spec.topics_per_doc;

    ClusterConfig cc;
    cc.k = cfg.k;
    auto t0 = std::chrono::steady_clock::now();
    auto pqs = cluster_corpus(embedded, cc);
    row.cluster_ms = detail::elapsed_ms(t0);

    t0 = std::chrono::steady_clock::now();
    CentroidIndex index = build_index(pqs);
    row.index_ms = detail::elapsed_ms(t0);

    RetrievalConfig rc;
    rc.mode = cfg.mode;
    rc.candidates = cfg.candidates ? cfg.candidates : 1000ULL * cfg.k;
    rc.final_k = final_k;
    row.candidates = rc.candidates;

    std::vector<RankedList> lists;
    std::vector<double> latencies;
    lists.reserve(queries.size());
    for (const auto& q : queries) {
      t0 = std::chrono::steady_clock::now();
      lists.push_back(retrieve(index, q, rc));
      latencies.push_back(detail::elapsed_ms(t0));
    }
    std::sort(latencies.begin(), latencies.end());
    row.search_ms_median = latencies[latencies.size() / 2];

    double mrr = 0.0;
    std::size_t counted = 0;
    double recall = 0.0;
    for (const auto& l : lists) {
      mrr += mrr_at_k(l, corpus.qrels, 10);
      double r = recall_at_k(l, corpus.qrels, 100);
      if (!std::isnan(r)) {
        recall += r;
        ++counted;
      }
    }
    row.mrr10 = mrr / static_cast<double>(lists.size());
    row.recall100 = counted ? recall / static_cast<double>(counted) : 0.0;
    row.top20 = topk_accuracy(lists, corpus.qrels, 20);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace pqe
