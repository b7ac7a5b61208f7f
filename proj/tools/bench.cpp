// Throughput benchmark: the same training run with one worker (the serial
// reference path) and with several, plus the parallel nearest-neighbor scan
// against a serial loop.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cewe/corpus.hpp"
#include "cewe/math.hpp"
#include "cewe/model.hpp"
#include "cewe/rng.hpp"
#include "cewe/trainer.hpp"

using namespace cewe;

namespace {

// Wide vocabulary and category pool: shared-row write collisions between
// workers stay rare, as they are on real corpora.
std::string make_corpus(int docs, int tokens_per_doc, uint64_t seed) {
  const int topics = 20, words_per_topic = 1000;
  Rng rng(seed);
  std::vector<RawDocument> records;
  records.reserve(docs);
  for (int d = 0; d < docs; ++d) {
    int topic = static_cast<int>(rng.index(topics));
    RawDocument doc;
    doc.categories.push_back("topic" + std::to_string(topic));
    doc.categories.push_back("extra" + std::to_string(rng.index(200)));
    for (int t = 0; t < tokens_per_doc; ++t) {
      int w = static_cast<int>(rng.index(words_per_topic));
      doc.tokens.push_back("w" + std::to_string(topic) + "_" + std::to_string(w));
    }
    records.push_back(std::move(doc));
  }
  auto path = std::filesystem::temp_directory_path() / "cewe_bench_corpus.txt";
  write_corpus(path.string(), records);
  return path.string();
}

// Paper-scale arithmetic (dim 300, 20 negatives) so the kernels rather than
// corpus parsing dominate the measurement.
double run_train(const std::string& corpus, const Vocabulary& vocab,
                 const CategoryVocabulary& cats, ModelType type, int workers,
                 int64_t* tokens) {
  TrainConfig cfg;
  cfg.model = type;
  cfg.dim = 300;
  cfg.window = 5;
  cfg.negatives_words = 20;
  cfg.negatives_categories = 20;
  cfg.epochs = 1;
  cfg.workers = workers;
  cfg.subsample_t = 0.0;
  cfg.seed = 7;
  cfg.unigram_table_size = 1 << 20;
  Model model = init_model({cfg.dim, cfg.seed}, vocab.size(), cats.size());
  RunReport report = train(model, corpus, vocab, cats, cfg);
  *tokens = report.tokens;
  return report.wall_seconds;
}

void bench_training(const std::string& corpus, int max_workers) {
  VocabularyOptions opt;
  opt.min_count = 1;
  opt.min_category_docs = 2;
  auto [vocab, cats] = build_vocabularies(corpus, opt);
  std::printf("corpus: %lld tokens, %d words, %d categories\n",
              static_cast<long long>(vocab.total_tokens()), vocab.size(), cats.size());

  for (ModelType type : {ModelType::kCbow, ModelType::kCewe, ModelType::kGcewe}) {
    int64_t tokens = 0;
    double serial = run_train(corpus, vocab, cats, type, 1, &tokens);
    std::printf("%-6s workers=1  %7.2fs  %8.0f tokens/s\n", to_string(type).c_str(),
                serial, tokens / serial);
    for (int workers = 2; workers <= max_workers; workers *= 2) {
      double t = run_train(corpus, vocab, cats, type, workers, &tokens);
      std::printf("%-6s workers=%-2d %7.2fs  %8.0f tokens/s  speedup %.2fx\n",
                  to_string(type).c_str(), workers, t, tokens / t, serial / t);
    }
  }
}

// Serial scan kept as the reference for the OpenMP one inside
// nearest_neighbors.
std::vector<Neighbor> serial_scan(std::span<const double> query, const Matrix& m,
                                  int k) {
  std::vector<Neighbor> all;
  double qn = norm(query);
  for (int i = 0; i < m.rows; ++i) {
    double rn = norm(m.row(i));
    if (rn == 0.0) continue;
    all.push_back({i, dot(query, m.row(i)) / (qn * rn)});
  }
  std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.id < b.id;
  });
  if (static_cast<int>(all.size()) > k) all.resize(k);
  return all;
}

void bench_nn() {
  const int rows = 200000, dim = 128, queries = 50;
  Matrix m(rows, dim);
  Rng rng(11);
  for (auto& v : m.data) v = rng.real() - 0.5;

  auto time = [&](auto&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    for (int q = 0; q < queries; ++q) fn(m.row(q));
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  double serial = time([&](std::span<const double> q) { serial_scan(q, m, 10); });
  double parallel = time([&](std::span<const double> q) { nearest_neighbors(q, m, 10); });
  std::printf("nn scan %dx%d, %d queries: serial %.2fs, parallel %.2fs, speedup %.2fx\n",
              rows, dim, queries, serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  int max_workers = 4;
#ifdef _OPENMP
  max_workers = std::min(8, omp_get_num_procs());
#endif
  if (argc > 1) max_workers = std::atoi(argv[1]);

  std::string corpus = make_corpus(2000, 250, 3);
  bench_training(corpus, max_workers);
  bench_nn();
  std::filesystem::remove(corpus);
  return 0;
}
