// Command-line front end: ingest, index, ask, eval, train-rerank, sweep.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "quasar/answer.hpp"
#include "quasar/benchmark.hpp"
#include "quasar/config.hpp"
#include "quasar/engine.hpp"
#include "quasar/error.hpp"
#include "quasar/http.hpp"
#include "quasar/ingest.hpp"
#include "quasar/io.hpp"
#include "quasar/metrics.hpp"
#include "quasar/synthetic.hpp"
#include "quasar/training.hpp"

namespace fs = std::filesystem;
using namespace quasar;

namespace {

struct GlobalFlags {
  std::string config_path;
  int jobs = 0;
  std::int64_t seed = -1;
  std::string generator;
  std::string rf;
  std::vector<std::size_t> ks;
  std::size_t pool_p = 0;
  std::size_t topk_final = 0;
};

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kInternal: return 1;
    case ErrorCategory::kUsage: return 2;
    case ErrorCategory::kParse: return 3;
    case ErrorCategory::kIo: return 4;
    case ErrorCategory::kCatalog: return 5;
    case ErrorCategory::kTransport: return 6;
    case ErrorCategory::kConfig: return 7;
  }
  return 1;
}

int fail(ErrorCategory c, const std::string& message) {
  std::cerr << "error[" << category_name(c) << "]: " << message << "\n";
  return exit_code(c);
}

Config resolve_config(const GlobalFlags& f) {
  Config c = f.config_path.empty() ? Config{} : Config::load(f.config_path);
  c.apply_environment();
  if (f.jobs > 0) c.eval.jobs = f.jobs;
  if (f.seed >= 0) c.seed = static_cast<std::uint64_t>(f.seed);
  if (!f.generator.empty()) c.answer.generator = f.generator;
  if (!f.rf.empty()) c.rerank.mode = f.rf;
  if (!f.ks.empty()) c.eval.ks = f.ks;
  if (f.pool_p > 0) c.set_pool_p(f.pool_p);
  if (f.topk_final > 0) c.set_final_k(f.topk_final);
  c.validate();
  return c;
}

std::string fixed(double v, int precision = 4) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << v;
  return out.str();
}

std::string describe(const Provenance& p) {
  std::string out = p.doc;
  if (p.index >= 0) out += "#" + std::to_string(p.index);
  if (!p.title.empty()) out += " \"" + p.title + "\"";
  return out;
}

int cmd_ingest(const std::string& catalog_path, const std::string& kg_path,
               const std::string& tables_path, const std::string& text_path,
               const std::string& out_dir) {
  Catalog catalog = read_catalog(catalog_path);
  std::vector<KgFact> facts;
  std::vector<TableDoc> tables;
  std::vector<TextDoc> docs;
  if (!kg_path.empty()) facts = read_kg_facts(kg_path);
  if (!tables_path.empty()) tables = read_tables(tables_path);
  if (!text_path.empty()) docs = read_text_docs(text_path);
  EvidenceList pool = verbalize_corpus(facts, tables, docs, catalog);
  if (pool.empty()) log_warning("no evidence pieces ingested; writing an empty pool");

  std::size_t counts[3] = {0, 0, 0};
  for (const auto& p : pool) ++counts[static_cast<int>(p.source)];
  fs::create_directories(out_dir);
  write_pool(fs::path(out_dir) / kPoolFile, pool);
  write_catalog(fs::path(out_dir) / kCatalogFile, catalog);
  std::cout << "pool: " << pool.size() << " pieces (kg " << counts[0] << ", table " << counts[2]
            << ", text " << counts[1] << ")\n"
            << "catalog: " << catalog.size() << " entities\n"
            << "written to " << out_dir << "\n";
  return 0;
}

int cmd_index(const GlobalFlags& flags, const std::string& dir) {
  Config config = resolve_config(flags);
  EvidenceList pool = read_pool(fs::path(dir) / kPoolFile);
  if (pool.empty()) throw Error(ErrorCategory::kUsage, "cannot index an empty pool");
  Bm25Index index = Bm25Index::build(pool, config.retrieval.bm25());
  index.save(fs::path(dir) / kIndexFile);
  std::cout << "index: " << index.doc_count() << " documents, " << index.term_count()
            << " terms, avg length " << fixed(index.avg_doc_length(), 2) << "\n";
  return 0;
}

int cmd_ask(const GlobalFlags& flags, const std::string& dir,
            const std::vector<std::string>& words) {
  Config config = resolve_config(flags);
  Corpus corpus = Corpus::load(dir);
  Pipeline pipeline = make_pipeline(config, *corpus.catalog, make_evidence_source(config, corpus));
  std::string text;
  for (const auto& w : words) text += (text.empty() ? "" : " ") + w;
  PipelineTrace trace = pipeline.run(Question{"ask", text, {}});

  const AnswerResult& r = trace.result;
  std::cout << "answer: " << r.answer() << "\n"
            << "refrained: " << (r.refrained() ? "yes" : "no") << "\n"
            << "si: " << si_concat(trace.si, text) << "\n"
            << "support:";
  for (const auto& id : r.supporting_evidence()) std::cout << " " << id;
  std::cout << "\nevidence (" << trace.final_evidence.size() << "):\n";
  for (std::size_t i = 0; i < trace.final_evidence.size(); ++i) {
    const auto& p = trace.final_evidence[i];
    std::cout << "  " << i + 1 << ". [" << fixed(p.score) << "] " << to_string(p.source) << " "
              << describe(p.provenance) << ": " << p.text << "\n";
  }
  return 0;
}

int cmd_eval(const GlobalFlags& flags, const std::string& dir, const std::string& bench_path,
             const std::string& out_prefix) {
  Config config = resolve_config(flags);
  auto questions = read_benchmark(bench_path);
  Corpus corpus = Corpus::load(dir);
  Pipeline pipeline = make_pipeline(config, *corpus.catalog, make_evidence_source(config, corpus));
  EvalReport report = run_benchmark(pipeline, questions, config.eval.ks, config.eval.jobs);
  std::string table = report.to_table();
  std::cout << table;
  if (!out_prefix.empty()) {
    write_text_file(out_prefix + ".jsonl", report.to_jsonl());
    write_text_file(out_prefix + ".txt", table);
  }
  return 0;
}

int cmd_train_rerank(const GlobalFlags& flags, const std::string& dir,
                     const std::string& train_path, const std::string& dev_path,
                     const std::string& out_path) {
  Config config = resolve_config(flags);
  Corpus corpus = Corpus::load(dir);
  if (corpus.pool.empty()) throw Error(ErrorCategory::kUsage, "cannot train on an empty pool");
  if (config.rerank.stages.empty()) {
    throw ConfigError("no pruning stages: --topk-final must be below the pool size");
  }
  auto intent = make_intent_stage(config, *corpus.catalog);
  auto source = make_evidence_source(config, corpus);
  auto label_all = [&](const std::string& path) {
    std::vector<LabeledPool> out;
    for (const auto& q : read_benchmark(path)) out.push_back(label_question(*intent, *source, q));
    return out;
  };
  auto train = label_all(train_path);
  std::vector<LabeledPool> dev;
  if (!dev_path.empty()) dev = label_all(dev_path);

  RerankTrainingOptions options;
  options.stages = config.rerank.stages;
  options.training_caps = config.rerank.training_caps;
  options.inference_caps = config.rerank.inference_caps;
  options.layers = config.rerank.layers;
  options.dim = config.rerank.dim;
  options.seed = config.seed;
  options.train.epochs = config.rerank.epochs;
  options.train.learning_rate = config.rerank.learning_rate;

  std::vector<TrainResult> results;
  auto models = train_rerankers(train, dev, *corpus.catalog, options, &results);
  save_checkpoint(fs::path(out_path), models);
  for (std::size_t s = 0; s < results.size(); ++s) {
    const auto& r = results[s];
    std::cout << "stage " << s + 1 << ": loss";
    for (double l : r.train_loss) std::cout << " " << fixed(l);
    std::cout << " | dev AP@" << options.train.dev_k;
    for (double d : r.dev_metric) std::cout << " " << fixed(d);
    std::cout << " | best epoch " << r.best_epoch << "\n";
  }
  std::cout << "checkpoint: " << out_path << " (" << models.size() << " models)\n";
  return 0;
}

int cmd_sweep(const GlobalFlags& flags, std::size_t questions, std::size_t max_distractors) {
  Config config = resolve_config(flags);
  std::vector<std::size_t> ks = flags.ks.empty() ? std::vector<std::size_t>{5, 10, 30} : flags.ks;
  SyntheticOptions options;
  options.questions = questions;
  options.pool_size = 200;
  options.min_distractors = 0;
  options.max_distractors = max_distractors;
  options.seed = config.seed + 1;
  SyntheticBenchmark bench = make_synthetic_benchmark(options);

  std::cout << "# synthetic sweep: " << questions << " questions, seed " << options.seed
            << ", rf " << config.rerank.mode << ", extractive oracle\n";
  std::cout << "k     P@1     AP@k\n";
  for (std::size_t k : ks) {
    Config c = config;
    c.answer.generator = "oracle";
    c.set_pool_p(options.pool_size);
    c.set_final_k(k);
    Pipeline replay(*bench.catalog, synthetic_intents(bench), synthetic_pools(bench),
                    c.schedule(), make_scorer(c, *bench.catalog),
                    make_answer_stage(c, *bench.catalog));
    std::vector<Question> qs;
    for (const auto& item : bench.items) qs.push_back(item.question);
    EvalReport report = run_benchmark(replay, qs, {k}, c.eval.jobs);
    std::string label = std::to_string(k);
    label.resize(6, ' ');
    std::cout << label << fixed(report.p_at_1) << "  " << fixed(report.ap_at.at(k)) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasar: question answering over text, tables and knowledge graphs"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags flags;
  app.add_option("--config", flags.config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--jobs", flags.jobs, "parallel questions during eval")->check(CLI::PositiveNumber);
  app.add_option("--seed", flags.seed, "seed for training and synthetic data")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--generator", flags.generator, "answer generator")
      ->check(CLI::IsMember({"oracle", "remote"}));
  app.add_option("--rf", flags.rf, "re-ranking and filtering")
      ->check(CLI::IsMember({"gnn", "ce", "bm25"}));
  app.add_option("--k", flags.ks, "answer-presence cutoffs, comma separated")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  app.add_option("--pool-p", flags.pool_p, "retrieved pool size")->check(CLI::PositiveNumber);
  app.add_option("--topk-final", flags.topk_final, "evidence pieces handed to the generator")
      ->check(CLI::PositiveNumber);

  std::string catalog_path, kg_path, tables_path, text_path, out;
  auto* ingest = app.add_subcommand("ingest", "verbalize KG facts, tables and text into a pool");
  ingest->add_option("--catalog", catalog_path, "entity catalog (JSONL)")->required();
  ingest->add_option("--kg", kg_path, "KG facts (JSONL)");
  ingest->add_option("--tables", tables_path, "tables (JSONL)");
  ingest->add_option("--text", text_path, "text documents (JSONL)");
  ingest->add_option("--out", out, "output corpus directory")->required();

  std::string dir;
  auto* index = app.add_subcommand("index", "build the BM25 index of a corpus directory");
  index->add_option("dir", dir, "corpus directory")->required();

  std::vector<std::string> words;
  auto* ask = app.add_subcommand("ask", "answer one question");
  ask->add_option("--data", dir, "corpus directory")->required();
  ask->add_option("question", words, "question text")->required();

  std::string bench_path;
  auto* eval = app.add_subcommand("eval", "run a benchmark file and report metrics");
  eval->add_option("--data", dir, "corpus directory")->required();
  eval->add_option("benchmark", bench_path, "benchmark (JSONL)")->required();
  eval->add_option("--out", out, "report prefix (.jsonl and .txt)");

  std::string train_path, dev_path;
  auto* train = app.add_subcommand("train-rerank", "train the GNN re-rankers");
  train->add_option("--data", dir, "corpus directory")->required();
  train->add_option("--train", train_path, "training benchmark (JSONL)")->required();
  train->add_option("--dev", dev_path, "dev benchmark (JSONL)");
  train->add_option("--out", out, "checkpoint path")->required();

  std::size_t sweep_questions = 100;
  std::size_t sweep_distractors = 25;
  auto* sweep = app.add_subcommand("sweep", "P@1 against final evidence count on synthetic data");
  sweep->add_option("--questions", sweep_questions, "synthetic questions")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--max-distractors", sweep_distractors, "lexical distractors per question")
      ->check(CLI::Range(0, 27));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(ErrorCategory::kUsage, e.what());
  }

  try {
    if (ingest->parsed()) return cmd_ingest(catalog_path, kg_path, tables_path, text_path, out);
    if (index->parsed()) return cmd_index(flags, dir);
    if (ask->parsed()) return cmd_ask(flags, dir, words);
    if (eval->parsed()) return cmd_eval(flags, dir, bench_path, out);
    if (train->parsed()) return cmd_train_rerank(flags, dir, train_path, dev_path, out);
    if (sweep->parsed()) return cmd_sweep(flags, sweep_questions, sweep_distractors);
  } catch (const Error& e) {
    return fail(e.category(), e.what());
  } catch (const std::exception& e) {
    return fail(ErrorCategory::kInternal, e.what());
  }
  return 0;
}
