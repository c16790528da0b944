// pqe — pseudo-query-embedding retrieval pipeline driver.
//
// Subcommands wire the library stages into reproducible pipelines that talk
// to each other only through the on-disk formats (PQEB token embeddings,
// PQEC centroids, PQEI flat index, TREC qrels/run text files). Every output
// artifact gets a <output>.manifest.json recording the resolved
// configuration so a run can be reproduced exactly.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pqe/cluster.hpp"
#include "pqe/embed.hpp"
#include "pqe/errors.hpp"
#include "pqe/evalkit.hpp"
#include "pqe/graddiag.hpp"
#include "pqe/index.hpp"
#include "pqe/io.hpp"
#include "pqe/score.hpp"
#include "pqe/synthbench.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitFormat = 3;
constexpr int kExitValidation = 4;

using nlohmann::json;

std::size_t resolve_threads(std::size_t flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("PQE_THREADS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 1;
}

void write_manifest(const std::filesystem::path& output,
                    const std::string& subcommand, const json& config,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
  json m;
  m["tool"] = "pqe";
  m["version"] = kVersion;
  m["subcommand"] = subcommand;
  m["config"] = config;
  m["inputs"] = inputs;
  m["outputs"] = outputs;
  std::filesystem::path path = output;
  path += ".manifest.json";
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw pqe::IoError("cannot write manifest: " + path.string());
  os << m.dump(2) << '\n';
  if (!os) throw pqe::IoError("write failed: " + path.string());
}

struct TsvRecord {
  std::string id;
  std::string text;
};

// one `id<TAB>text` record per line
std::vector<TsvRecord> read_tsv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw pqe::IoError("cannot open: " + path.string());
  std::vector<TsvRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw pqe::FormatError("malformed TSV line " + std::to_string(lineno) +
                             " in " + path.string());
    out.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  if (out.empty())
    throw pqe::FormatError("no records in " + path.string());
  return out;
}

std::vector<pqe::QueryEmbedding> embed_queries(
    const std::vector<TsvRecord>& queries, std::size_t dim, std::uint64_t seed,
    std::size_t limit, pqe::Pooling pooling) {
  std::vector<pqe::QueryEmbedding> out;
  out.reserve(queries.size());
  for (const auto& q : queries) {
    auto m = pqe::embed_text(q.id, q.text, dim, seed, limit);
    out.push_back(pqe::pool_query(m, pooling));
  }
  return out;
}

// ---- embed -------------------------------------------------------------

struct EmbedArgs {
  std::string input;
  std::string output;
  std::size_t dim = 64;
  std::uint64_t seed = 42;
  std::size_t limit = pqe::kDefaultTokenLimit;
  // synthetic corpus generation instead of an input file
  std::size_t synth_docs = 0;
  std::size_t synth_topics = 4;
  std::size_t synth_tokens = 24;
  std::size_t synth_vocab = 96;
  std::size_t synth_queries = 500;
};

int cmd_embed(const EmbedArgs& a, std::size_t threads) {
  std::vector<TsvRecord> docs;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs{a.output};
  if (a.synth_docs > 0) {
    pqe::SynthSpec spec;
    spec.num_docs = a.synth_docs;
    spec.topics_per_doc = a.synth_topics;
    spec.tokens_per_topic = a.synth_tokens;
    spec.vocab_per_topic = a.synth_vocab;
    spec.num_queries = a.synth_queries;
    spec.seed = a.seed;
    pqe::SynthCorpus corpus = pqe::generate(spec);
    for (auto& d : corpus.documents) docs.push_back({d.doc_id, d.text});

    // sidecar queries + qrels so the synthetic corpus is searchable end to end
    std::filesystem::path qpath = a.output;
    qpath += ".queries.tsv";
    std::ofstream qs(qpath, std::ios::trunc);
    if (!qs) throw pqe::IoError("cannot write: " + qpath.string());
    for (const auto& q : corpus.queries) qs << q.qid << '\t' << q.text << '\n';
    outputs.push_back(qpath.string());

    std::filesystem::path rpath = a.output;
    rpath += ".qrels";
    std::ofstream rs(rpath, std::ios::trunc);
    if (!rs) throw pqe::IoError("cannot write: " + rpath.string());
    for (const auto& [key, rel] : corpus.qrels.judgments)
      rs << key.first << " 0 " << key.second << ' ' << rel << '\n';
    outputs.push_back(rpath.string());
  } else {
    if (a.input.empty())
      throw pqe::ValidationError(
          "embed: provide an input TSV or --synth-docs");
    docs = read_tsv(a.input);
    inputs.push_back(a.input);
  }

  std::vector<pqe::TokenEmbeddingMatrix> corpus;
  corpus.reserve(docs.size());
  for (const auto& d : docs)
    corpus.push_back(pqe::embed_text(d.id, d.text, a.dim, a.seed, a.limit));
  pqe::write_embeddings(corpus, a.output);

  json config{{"dim", a.dim},       {"seed", a.seed},
              {"limit", a.limit},   {"threads", threads},
              {"synth_docs", a.synth_docs}};
  if (a.synth_docs > 0) {
    config["synth_topics"] = a.synth_topics;
    config["synth_tokens"] = a.synth_tokens;
    config["synth_vocab"] = a.synth_vocab;
    config["synth_queries"] = a.synth_queries;
  }
  write_manifest(a.output, "embed", config, inputs, outputs);
  std::cout << "embedded " << corpus.size() << " documents -> " << a.output
            << '\n';
  return kExitOk;
}

// ---- cluster -----------------------------------------------------------

struct ClusterArgs {
  std::string input;
  std::string output;
  pqe::ClusterConfig config;
};

int cmd_cluster(const ClusterArgs& a, std::size_t threads) {
  auto corpus = pqe::read_embeddings(a.input);
  auto pqs = pqe::cluster_corpus(corpus, a.config);
  pqe::write_centroids(pqs, a.output);
  json config{{"k", a.config.k},
              {"max_iters", a.config.max_iters},
              {"tol", a.config.tol},
              {"include_cls", a.config.include_cls},
              {"threads", threads}};
  write_manifest(a.output, "cluster", config, {a.input}, {a.output});
  std::cout << "clustered " << pqs.size() << " documents -> " << a.output
            << '\n';
  return kExitOk;
}

// ---- index -------------------------------------------------------------

int cmd_index(const std::string& input, const std::string& output,
              std::size_t threads) {
  auto pqs = pqe::read_centroids(input);
  pqe::CentroidIndex index = pqe::build_index(pqs);
  pqe::save_index(index, output);
  json config{{"threads", threads}};
  write_manifest(output, "index", config, {input}, {output});
  std::cout << "indexed " << index.num_docs() << " documents ("
            << index.rows.rows << " centroids) -> " << output << '\n';
  return kExitOk;
}

// ---- search ------------------------------------------------------------

struct SearchArgs {
  std::string index;
  std::string queries;
  std::string output;
  std::string mode = "two_step";
  std::size_t candidates = 0;  // 0 resolves to 1000 * max k
  std::size_t final_k = 1000;
  std::string pooling = "first_token";
  std::uint64_t seed = 42;
  std::size_t limit = pqe::kDefaultTokenLimit;
  std::string tag = "pqe";
};

int cmd_search(const SearchArgs& a, std::size_t threads) {
  pqe::CentroidIndex index = pqe::load_index(a.index);
  auto query_rows = read_tsv(a.queries);
  auto queries = embed_queries(query_rows, index.dim, a.seed, a.limit,
                               pqe::parse_pooling(a.pooling));

  pqe::RetrievalConfig config;
  config.mode = pqe::parse_mode(a.mode);
  std::size_t max_k = 0;
  for (const auto& span : index.doc_offsets)
    max_k = std::max(max_k, span.count);
  config.candidates = a.candidates ? a.candidates : 1000 * max_k;
  config.final_k = a.final_k;
  config.validate();

  std::vector<pqe::RankedList> lists;
  lists.reserve(queries.size());
  for (const auto& q : queries)
    lists.push_back(pqe::retrieve(index, q, config));
  pqe::write_run(lists, a.output, a.tag);

  json manifest_config{{"mode", a.mode},
                       {"candidates", config.candidates},
                       {"final_k", config.final_k},
                       {"pooling", a.pooling},
                       {"seed", a.seed},
                       {"limit", a.limit},
                       {"tag", a.tag},
                       {"dim", index.dim},
                       {"threads", threads}};
  write_manifest(a.output, "search", manifest_config, {a.index, a.queries},
                 {a.output});
  std::cout << "searched " << queries.size() << " queries -> " << a.output
            << '\n';
  return kExitOk;
}

// ---- eval --------------------------------------------------------------

struct EvalArgs {
  std::string run;
  std::string qrels;
  std::string metrics = "mrr@10,recall@1000,ndcg@10,top@20";
  std::string output;  // optional JSON report
};

int cmd_eval(const EvalArgs& a, std::size_t threads) {
  auto lists = pqe::read_run(a.run);
  pqe::Qrels qrels = pqe::read_qrels(a.qrels);

  std::vector<std::pair<std::string, std::size_t>> requested;
  std::stringstream ss(a.metrics);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto at = item.find('@');
    if (at == std::string::npos || at == 0 || at + 1 >= item.size())
      throw pqe::ValidationError("eval: bad metric spec: " + item);
    std::size_t k = std::stoul(item.substr(at + 1));
    std::string name = item.substr(0, at);
    if (name != "mrr" && name != "recall" && name != "ndcg" && name != "top")
      throw pqe::ValidationError("eval: unknown metric: " + name);
    requested.push_back({name, k});
  }
  if (requested.empty())
    throw pqe::ValidationError("eval: no metrics requested");

  pqe::MetricReport report;
  for (const auto& l : lists)
    if (!qrels.has_query(l.qid)) ++report.queries_missing_from_qrels;

  for (const auto& [name, k] : requested) {
    std::string label = name + "@" + std::to_string(k);
    if (name == "top") {
      report.mean[label] = pqe::topk_accuracy(lists, qrels, k);
      continue;
    }
    auto& values = report.per_query[label];
    double sum = 0.0;
    std::size_t counted = 0;
    for (const auto& l : lists) {
      double v = name == "mrr"      ? pqe::mrr_at_k(l, qrels, k)
                 : name == "recall" ? pqe::recall_at_k(l, qrels, k)
                                    : pqe::ndcg_at_k(l, qrels, k);
      values.push_back(v);
      if (std::isnan(v)) continue;  // recall without relevant judgments
      sum += v;
      ++counted;
    }
    if (name == "recall")
      report.queries_skipped_no_relevant = values.size() - counted;
    report.mean[label] = counted ? sum / double(counted) : 0.0;
  }

  json out;
  for (const auto& [label, mean] : report.mean) {
    std::cout << label << ' ' << mean << '\n';
    out["mean"][label] = mean;
  }
  out["queries"] = lists.size();
  out["queries_skipped_no_relevant"] = report.queries_skipped_no_relevant;
  out["queries_missing_from_qrels"] = report.queries_missing_from_qrels;
  if (report.queries_missing_from_qrels > 0)
    std::cerr << "warning: " << report.queries_missing_from_qrels
              << " queries missing from qrels\n";

  if (!a.output.empty()) {
    std::ofstream os(a.output, std::ios::trunc);
    if (!os) throw pqe::IoError("cannot write: " + a.output);
    os << out.dump(2) << '\n';
    json config{{"metrics", a.metrics}, {"threads", threads}};
    write_manifest(a.output, "eval", config, {a.run, a.qrels}, {a.output});
  }
  return kExitOk;
}

// ---- diagnose ----------------------------------------------------------

struct DiagnoseArgs {
  std::string embeddings;
  std::string queries;
  std::string output;
  std::string strategies = "centroids,first_k,random_k";
  std::size_t k = 8;
  std::uint64_t seed = 42;
  std::size_t batch = 8;
  std::string pooling = "first_token";
};

// Pair query i with document i (mod corpus), form in-batch negatives in
// groups of `batch`, and emit one CSV row per (strategy, instance).
int cmd_diagnose(const DiagnoseArgs& a, std::size_t threads) {
  auto corpus = pqe::read_embeddings(a.embeddings);
  auto query_rows = read_tsv(a.queries);
  if (corpus.empty())
    throw pqe::ValidationError("diagnose: empty embedding corpus");
  std::size_t dim = corpus.front().dim;
  auto queries = embed_queries(query_rows, dim, a.seed,
                               pqe::kDefaultTokenLimit,
                               pqe::parse_pooling(a.pooling));
  if (a.batch < 2)
    throw pqe::ValidationError("diagnose: batch must be >= 2");

  std::vector<pqe::RepresentationStrategy> strategies;
  std::stringstream ss(a.strategies);
  std::string item;
  while (std::getline(ss, item, ','))
    strategies.push_back(pqe::parse_strategy(item));
  if (strategies.empty())
    throw pqe::ValidationError("diagnose: no strategies");

  std::ofstream os(a.output, std::ios::trunc);
  if (!os) throw pqe::IoError("cannot write: " + a.output);
  os << "strategy,step,loss,max_r,var_r\n";
  os.precision(10);

  pqe::ClusterConfig cc;
  cc.k = static_cast<std::uint32_t>(a.k);
  json summary;
  for (auto strategy : strategies) {
    std::vector<pqe::DiagnosticsSample> all;
    for (std::size_t start = 0; start + a.batch <= queries.size();
         start += a.batch) {
      std::vector<std::pair<pqe::QueryEmbedding, pqe::PseudoQuerySet>> batch;
      for (std::size_t i = start; i < start + a.batch; ++i)
        batch.push_back({queries[i],
                         pqe::represent(corpus[i % corpus.size()], strategy,
                                        cc, a.seed)});
      for (auto& s : pqe::run_diagnostics(pqe::in_batch_negatives(batch))) {
        s.step = all.size();
        all.push_back(s);
      }
    }
    if (all.empty())
      throw pqe::ValidationError("diagnose: need at least one full batch");
    double mean_max = 0.0, mean_var = 0.0;
    for (const auto& s : all) {
      os << pqe::to_string(strategy) << ',' << s.step << ',' << s.loss << ','
         << s.max_r << ',' << s.var_r << '\n';
      mean_max += s.max_r;
      mean_var += s.var_r;
    }
    mean_max /= double(all.size());
    mean_var /= double(all.size());
    summary[pqe::to_string(strategy)] = {{"mean_max_r", mean_max},
                                         {"mean_var_r", mean_var}};
    std::cout << pqe::to_string(strategy) << " mean_max_r " << mean_max
              << " mean_var_r " << mean_var << '\n';
  }
  if (!os) throw pqe::IoError("write failed: " + a.output);

  json config{{"strategies", a.strategies}, {"k", a.k},
              {"seed", a.seed},             {"batch", a.batch},
              {"pooling", a.pooling},       {"threads", threads},
              {"summary", summary}};
  write_manifest(a.output, "diagnose", config, {a.embeddings, a.queries},
                 {a.output});
  return kExitOk;
}

// ---- bench -------------------------------------------------------------

struct BenchArgs {
  std::string output;
  std::size_t docs = 2000;
  std::size_t topics = 4;
  std::size_t tokens = 24;
  std::size_t vocab = 96;
  std::size_t queries = 500;
  std::uint64_t seed = 42;
  std::vector<std::size_t> k_list{1, 4, 8, 16, 32};
  std::string mode = "two_step";
  std::size_t candidates = 0;
  std::size_t dim = 64;
  std::size_t final_k = 100;
};

int cmd_bench(const BenchArgs& a, std::size_t threads) {
  pqe::SynthSpec spec;
  spec.num_docs = a.docs;
  spec.topics_per_doc = a.topics;
  spec.tokens_per_topic = a.tokens;
  spec.vocab_per_topic = a.vocab;
  spec.num_queries = a.queries;
  spec.seed = a.seed;

  std::vector<pqe::BenchConfig> configs;
  for (std::size_t k : a.k_list)
    configs.push_back({static_cast<std::uint32_t>(k), pqe::parse_mode(a.mode),
                       a.candidates});
  pqe::BenchReport report = pqe::run_benchmark(spec, configs, a.dim,
                                               a.final_k);

  std::string csv = report.to_csv();
  std::ofstream os(a.output, std::ios::trunc);
  if (!os) throw pqe::IoError("cannot write: " + a.output);
  os << csv;
  if (!os) throw pqe::IoError("write failed: " + a.output);
  std::cout << csv;

  json config{{"docs", a.docs},       {"topics", a.topics},
              {"tokens", a.tokens},   {"vocab", a.vocab},
              {"queries", a.queries}, {"seed", a.seed},
              {"k_list", a.k_list},   {"mode", a.mode},
              {"candidates", a.candidates},
              {"dim", a.dim},         {"final_k", a.final_k},
              {"threads", threads}};
  write_manifest(a.output, "bench", config, {}, {a.output});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudo-query-embedding retrieval pipeline"};
  app.require_subcommand(1);
  std::size_t threads_flag = 0;
  app.add_option("--threads", threads_flag,
                 "worker cap (default: PQE_THREADS env, else 1)");

  EmbedArgs embed_args;
  auto* embed = app.add_subcommand("embed", "token-embed a document corpus");
  embed->add_option("input", embed_args.input, "docs TSV: doc_id<TAB>text");
  embed->add_option("-o,--output", embed_args.output, "output PQEB path")
      ->required();
  embed->add_option("--dim", embed_args.dim, "embedding width")
      ->default_val(64);
  embed->add_option("--seed", embed_args.seed, "hash seed")->default_val(42);
  embed->add_option("--limit", embed_args.limit, "token truncation limit")
      ->default_val(pqe::kDefaultTokenLimit);
  embed->add_option("--synth-docs", embed_args.synth_docs,
                    "generate a synthetic corpus of this many docs instead "
                    "of reading input");
  embed->add_option("--synth-topics", embed_args.synth_topics,
                    "topics per synthetic doc")->default_val(4);
  embed->add_option("--synth-tokens", embed_args.synth_tokens,
                    "tokens per topic segment")->default_val(24);
  embed->add_option("--synth-vocab", embed_args.synth_vocab,
                    "words per topic vocabulary")->default_val(96);
  embed->add_option("--synth-queries", embed_args.synth_queries,
                    "synthetic queries to emit")->default_val(500);

  ClusterArgs cluster_args;
  auto* cluster = app.add_subcommand("cluster",
                                     "k-means centroids per document");
  cluster->add_option("input", cluster_args.input, "input PQEB")->required();
  cluster->add_option("-o,--output", cluster_args.output, "output PQEC path")
      ->required();
  cluster->add_option("--k", cluster_args.config.k, "clusters per document")
      ->default_val(8);
  cluster->add_option("--max-iters", cluster_args.config.max_iters,
                      "iteration cap")->default_val(20);
  cluster->add_option("--tol", cluster_args.config.tol,
                      "centroid movement tolerance")->default_val(1e-4);
  cluster->add_flag("--include-cls", cluster_args.config.include_cls,
                    "cluster the [CLS] row too");

  std::string index_in, index_out;
  auto* index = app.add_subcommand("index", "flat inner-product index");
  index->add_option("input", index_in, "input PQEC")->required();
  index->add_option("-o,--output", index_out, "output PQEI path")->required();

  SearchArgs search_args;
  auto* search = app.add_subcommand("search", "retrieve ranked documents");
  search->add_option("index", search_args.index, "input PQEI")->required();
  search->add_option("queries", search_args.queries,
                     "queries TSV: qid<TAB>text")->required();
  search->add_option("-o,--output", search_args.output, "output run file")
      ->required();
  search->add_option("--mode", search_args.mode,
                     "two_step | argmax_only | exact")
      ->default_val("two_step");
  search->add_option("--R", search_args.candidates,
                     "first-step candidate count (default 1000*k)");
  search->add_option("--final-k", search_args.final_k, "results per query")
      ->default_val(1000);
  search->add_option("--pooling", search_args.pooling, "first_token | mean")
      ->default_val("first_token");
  search->add_option("--seed", search_args.seed, "query embedding hash seed")
      ->default_val(42);
  search->add_option("--limit", search_args.limit, "query token limit")
      ->default_val(pqe::kDefaultTokenLimit);
  search->add_option("--tag", search_args.tag, "run tag")->default_val("pqe");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "score a run against qrels");
  eval->add_option("run", eval_args.run, "run file")->required();
  eval->add_option("qrels", eval_args.qrels, "qrels file")->required();
  eval->add_option("--metrics", eval_args.metrics,
                   "comma list of mrr@K, recall@K, ndcg@K, top@K")
      ->default_val("mrr@10,recall@1000,ndcg@10,top@20");
  eval->add_option("-o,--output", eval_args.output,
                   "optional JSON report path");

  DiagnoseArgs diagnose_args;
  auto* diagnose = app.add_subcommand(
      "diagnose", "gradient-weight concentration per representation");
  diagnose->add_option("embeddings", diagnose_args.embeddings, "input PQEB")
      ->required();
  diagnose->add_option("queries", diagnose_args.queries,
                       "queries TSV: qid<TAB>text")->required();
  diagnose->add_option("-o,--output", diagnose_args.output, "output CSV")
      ->required();
  diagnose->add_option("--strategies", diagnose_args.strategies,
                       "comma list of centroids, first_k, random_k")
      ->default_val("centroids,first_k,random_k");
  diagnose->add_option("--k", diagnose_args.k, "vectors per document")
      ->default_val(8);
  diagnose->add_option("--seed", diagnose_args.seed, "sampling seed")
      ->default_val(42);
  diagnose->add_option("--batch", diagnose_args.batch,
                       "in-batch negative group size")->default_val(8);
  diagnose->add_option("--pooling", diagnose_args.pooling,
                       "first_token | mean")->default_val("first_token");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench",
                                   "synthetic corpus benchmark sweep");
  bench->add_option("-o,--output", bench_args.output, "output CSV")
      ->required();
  bench->add_option("--docs", bench_args.docs, "corpus size")
      ->default_val(2000);
  bench->add_option("--topics", bench_args.topics, "topics per doc")
      ->default_val(4);
  bench->add_option("--tokens", bench_args.tokens, "tokens per topic")
      ->default_val(24);
  bench->add_option("--vocab", bench_args.vocab, "words per topic vocabulary")
      ->default_val(96);
  bench->add_option("--queries", bench_args.queries, "query count")
      ->default_val(500);
  bench->add_option("--seed", bench_args.seed, "corpus seed")->default_val(42);
  bench->add_option("--k-list", bench_args.k_list, "cluster counts to sweep")
      ->delimiter(',');
  bench->add_option("--mode", bench_args.mode,
                    "two_step | argmax_only | exact")
      ->default_val("two_step");
  bench->add_option("--R", bench_args.candidates,
                    "first-step candidate count (default 1000*k)");
  bench->add_option("--dim", bench_args.dim, "embedding width")
      ->default_val(64);
  bench->add_option("--final-k", bench_args.final_k, "results per query")
      ->default_val(100);

  CLI11_PARSE(app, argc, argv);

  std::size_t threads = resolve_threads(threads_flag);
  try {
    if (embed->parsed()) return cmd_embed(embed_args, threads);
    if (cluster->parsed()) return cmd_cluster(cluster_args, threads);
    if (index->parsed()) return cmd_index(index_in, index_out, threads);
    if (search->parsed()) return cmd_search(search_args, threads);
    if (eval->parsed()) return cmd_eval(eval_args, threads);
    if (diagnose->parsed()) return cmd_diagnose(diagnose_args, threads);
    if (bench->parsed()) return cmd_bench(bench_args, threads);
  } catch (const pqe::IoError& e) {
    std::cerr << "error: io: " << e.what() << '\n';
    return kExitIo;
  } catch (const pqe::FormatError& e) {
    std::cerr << "error: format: " << e.what() << '\n';
    return kExitFormat;
  } catch (const pqe::ValidationError& e) {
    std::cerr << "error: validation: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
