#include "cewe/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cewe/math.hpp"

namespace cewe {

ModelType model_type_from_string(const std::string& name) {
  if (name == "cbow") return ModelType::kCbow;
  if (name == "cewe") return ModelType::kCewe;
  if (name == "gcewe") return ModelType::kGcewe;
  throw ConfigError("unknown model type: " + name);
}

std::string to_string(ModelType type) {
  switch (type) {
    case ModelType::kCbow: return "cbow";
    case ModelType::kCewe: return "cewe";
    case ModelType::kGcewe: return "gcewe";
  }
  return "?";
}

double learning_rate(double initial, int64_t tokens_processed, int64_t total_tokens,
                     int epochs, double floor_ratio) {
  double span = static_cast<double>(epochs) * static_cast<double>(total_tokens) + 1.0;
  double remain = 1.0 - static_cast<double>(tokens_processed) / span;
  return initial * std::max(remain, floor_ratio);
}

ContextWeights composite_context_into(std::span<const int> context_words,
                                      std::span<const int> category_ids,
                                      const Model& model, double lambda_cat,
                                      std::vector<double>& h) {
  if (context_words.empty())
    throw ConfigError("composite context requires at least one context word");
  ContextWeights weights;
  h.assign(model.dim, 0.0);
  weights.word_weight = 1.0 / static_cast<double>(context_words.size());
  for (int j : context_words) axpy(1.0, model.W.row(j), h);
  for (auto& v : h) v *= weights.word_weight;

  if (!category_ids.empty()) {
    weights.category_weight = lambda_cat / static_cast<double>(category_ids.size());
    for (int i : category_ids) axpy(weights.category_weight, model.C.row(i), h);
  }
  return weights;
}

CompositeContext composite_context(std::span<const int> context_words,
                                   std::span<const int> category_ids,
                                   const Model& model, double lambda_cat) {
  CompositeContext cc;
  ContextWeights weights =
      composite_context_into(context_words, category_ids, model, lambda_cat, cc.h);
  cc.word_weight = weights.word_weight;
  cc.category_weight = weights.category_weight;
  return cc;
}

double negative_sampling_step(std::span<const double> h, int target,
                              std::span<const int> negatives, double lr,
                              Matrix& outputs, std::vector<double>& e,
                              std::vector<double>& g_scratch) {
  double loss = 0.0;
  e.assign(outputs.cols, 0.0);
  g_scratch.resize(negatives.size());

  // Gradients for the target and every negative are computed from pre-update
  // rows before any row moves; duplicates among the negatives then still get
  // the exact joint gradient.
  double score = dot(outputs.row(target), h);
  double g_target = sigmoid(score) - 1.0;
  loss -= log_sigmoid(score);
  axpy(lr * g_target, outputs.row(target), e);

  for (std::size_t i = 0; i < negatives.size(); ++i) {
    double s = dot(outputs.row(negatives[i]), h);
    g_scratch[i] = sigmoid(s);
    loss -= log_sigmoid(-s);
    axpy(lr * g_scratch[i], outputs.row(negatives[i]), e);
  }

  axpy(-lr * g_target, h, outputs.row(target));
  for (std::size_t i = 0; i < negatives.size(); ++i)
    axpy(-lr * g_scratch[i], h, outputs.row(negatives[i]));
  return loss;
}

UpdateResult negative_sampling_update(std::span<const double> h, int target,
                                      std::span<const int> negatives, double lr,
                                      Matrix& outputs) {
  UpdateResult res;
  std::vector<double> g;
  res.loss = negative_sampling_step(h, target, negatives, lr, outputs, res.e, g);
  return res;
}

DocStats train_document_local(Model& model, const Document& doc,
                              const TrainConfig& cfg, const UnigramTable& noise,
                              const Vocabulary& vocab, Rng& rng, double lr_alpha,
                              TrainScratch* scratch) {
  DocStats stats;
  TrainScratch local;
  TrainScratch& s = scratch ? *scratch : local;

  // One keep coin per occurrence; discarded tokens vanish both as targets and
  // as context members.
  s.kept.clear();
  if (cfg.subsample_t > 0.0) {
    for (int id : doc.word_ids) {
      double keep = subsample_keep_probability(vocab.frequency(id), cfg.subsample_t);
      if (rng.real() < keep) s.kept.push_back(id);
    }
  } else {
    s.kept.assign(doc.word_ids.begin(), doc.word_ids.end());
  }
  const int n = static_cast<int>(s.kept.size());
  if (n < 2) return stats;

  const bool with_categories =
      cfg.model != ModelType::kCbow && !doc.category_ids.empty();
  std::span<const int> cats =
      with_categories ? std::span<const int>(doc.category_ids) : std::span<const int>();

  s.negatives.resize(cfg.negatives_words);
  for (int t = 0; t < n; ++t) {
    s.context.clear();
    int lo = std::max(0, t - cfg.window);
    int hi = std::min(n - 1, t + cfg.window);
    for (int j = lo; j <= hi; ++j)
      if (j != t) s.context.push_back(s.kept[j]);
    if (s.context.empty()) continue;

    double lambda = cfg.lambda_mode == LambdaMode::kReciprocalContext
                        ? 1.0 / static_cast<double>(s.context.size())
                        : cfg.lambda_value;
    ContextWeights weights = composite_context_into(s.context, cats, model, lambda, s.h);
    for (int k = 0; k < cfg.negatives_words; ++k)
      s.negatives[k] = noise.sample_excluding(rng, s.kept[t]);

    stats.loss_sum +=
        negative_sampling_step(s.h, s.kept[t], s.negatives, lr_alpha, model.Wout,
                               s.e, s.g);
    for (int j : s.context) axpy(-weights.word_weight, s.e, model.W.row(j));
    if (weights.category_weight != 0.0)
      for (int i : doc.category_ids) axpy(-weights.category_weight, s.e, model.C.row(i));

    ++stats.updates;
  }
  return stats;
}

RankIndexController::RankIndexController(const Matrix& categories, int64_t interval)
    : index_(std::make_shared<const CategoryRankIndex>(refresh_rank_index(categories, 1))),
      interval_(interval) {}

std::shared_ptr<const CategoryRankIndex> RankIndexController::snapshot() const {
  std::lock_guard<std::mutex> g(ptr_mu_);
  return index_;
}

bool RankIndexController::on_step(int64_t steps, const Matrix& categories) {
  if (interval_ <= 0 || steps % interval_ != 0) return false;
  std::unique_lock<std::mutex> rebuild(refresh_mu_, std::try_to_lock);
  if (!rebuild.owns_lock()) return false;  // another worker is already on it
  int64_t version;
  {
    std::lock_guard<std::mutex> g(ptr_mu_);
    version = index_->version;
  }
  auto next = std::make_shared<const CategoryRankIndex>(
      refresh_rank_index(categories, version + 1));
  {
    std::lock_guard<std::mutex> g(ptr_mu_);
    index_ = std::move(next);
  }
  return true;
}

DocStats train_document_global(Model& model, const Document& doc,
                               const std::vector<int>& selected,
                               const TrainConfig& cfg, GlobalContext& ctx,
                               Rng& rng, double lr_beta, TrainScratch* scratch) {
  DocStats stats;
  TrainScratch local;
  TrainScratch& s = scratch ? *scratch : local;
  if (selected.empty() || doc.category_ids.empty()) return stats;
  // Negatives must exist outside the document's own categories.
  if (static_cast<int>(doc.category_ids.size()) >= ctx.index->category_count())
    return stats;

  s.negatives.resize(cfg.negatives_categories);
  for (int l : selected) {
    for (int i : doc.category_ids) {
      auto word_vec = model.W.row(l);
      for (int k = 0; k < cfg.negatives_categories; ++k)
        s.negatives[k] = sample_negative_category(word_vec, *ctx.index,
                                                  doc.category_ids, *ctx.ranks, rng);
      stats.loss_sum +=
          negative_sampling_step(word_vec, i, s.negatives, lr_beta, model.C, s.e, s.g);
      axpy(-1.0, s.e, model.W.row(l));
      ++stats.updates;

      if (ctx.progress) {
        int64_t steps = ctx.progress->global_steps.fetch_add(1) + 1;
        if (ctx.controller && ctx.controller->on_step(steps, model.C))
          ctx.index = ctx.controller->snapshot();
      }
    }
  }
  return stats;
}

namespace {

// Counts in-vocabulary tokens; also surfaces parse errors before any
// parameter is touched.
int64_t scan_corpus_tokens(const std::string& path, const Vocabulary& vocab) {
  int64_t total = 0;
  CorpusReader reader(path);
  while (auto doc = reader.next()) {
    for (const auto& t : doc->tokens)
      if (vocab.lookup(t) >= 0) ++total;
  }
  return total;
}

}  // namespace

RunReport train(Model& model, const std::string& corpus_path, const Vocabulary& vocab,
                const CategoryVocabulary& categories, const TrainConfig& cfg) {
  if (cfg.epochs < 1) throw ConfigError("epochs must be >= 1");
  if (cfg.window < 1) throw ConfigError("window must be >= 1");
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  if (cfg.alpha <= 0.0 || cfg.beta <= 0.0) throw ConfigError("learning rates must be positive");
  if (cfg.negatives_words < 1) throw ConfigError("negatives_words must be >= 1");
  if (model.W.rows != vocab.size() || model.C.rows != categories.size())
    throw ConfigError("model size does not match the vocabularies");

  const int64_t total_tokens = scan_corpus_tokens(corpus_path, vocab);
  if (total_tokens == 0)
    throw DataError("corpus has no in-vocabulary tokens: " + corpus_path);

  UnigramTable noise(vocab, cfg.unigram_power, cfg.unigram_table_size);

  const bool global_pass = cfg.model == ModelType::kGcewe && categories.size() > 0;
  std::unique_ptr<GeometricRankSampler> ranks;
  std::unique_ptr<RankIndexController> controller;
  if (global_pass) {
    ranks = std::make_unique<GeometricRankSampler>(cfg.lambda_rank, categories.size());
    controller = std::make_unique<RankIndexController>(model.C, cfg.refresh_interval);
  }

  TrainProgress progress;
  std::vector<Rng> rngs;
  rngs.reserve(cfg.workers);
  for (int w = 0; w < cfg.workers; ++w) rngs.push_back(Rng::for_worker(cfg.seed, w));

  RunReport report;
  report.epochs.resize(cfg.epochs);
  auto t0 = std::chrono::steady_clock::now();

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<EpochStats> worker_stats(cfg.workers);

#pragma omp parallel num_threads(cfg.workers)
    {
#ifdef _OPENMP
      const int wid = omp_get_thread_num();
#else
      const int wid = 0;
#endif
      Rng& rng = rngs[wid];
      EpochStats& stats = worker_stats[wid];
      TrainScratch scratch;
      CorpusReader reader(corpus_path);
      int64_t doc_index = 0;
      while (auto raw = reader.next()) {
        if (doc_index++ % cfg.workers != wid) continue;
        Document doc = tokenize_document(*raw, vocab, categories);
        if (doc.word_ids.empty()) continue;

        int64_t done = progress.tokens_processed.fetch_add(
            static_cast<int64_t>(doc.word_ids.size()));
        double lr_alpha =
            learning_rate(cfg.alpha, done, total_tokens, cfg.epochs, cfg.lr_floor_ratio);

        DocStats local = train_document_local(model, doc, cfg, noise, vocab, rng,
                                              lr_alpha, &scratch);
        stats.local_loss_sum += local.loss_sum;
        stats.local_updates += local.updates;

        if (global_pass && !doc.category_ids.empty()) {
          std::vector<int> selected = select_global_words(doc, vocab);
          if (!selected.empty()) {
            double lr_beta = learning_rate(cfg.beta, done, total_tokens, cfg.epochs,
                                           cfg.lr_floor_ratio);
            GlobalContext ctx{ranks.get(), controller->snapshot(), controller.get(),
                              &progress};
            DocStats global = train_document_global(model, doc, selected, cfg, ctx,
                                                    rng, lr_beta, &scratch);
            stats.global_loss_sum += global.loss_sum;
            stats.global_updates += global.updates;
          }
        }

        if (cfg.verbose && done / 1000000 !=
                               (done + static_cast<int64_t>(doc.word_ids.size())) / 1000000) {
          std::fprintf(stderr, "epoch %d tokens %lld lr_alpha %.6f\n", epoch + 1,
                       static_cast<long long>(done),
                       static_cast<double>(lr_alpha));
        }
      }
    }

    EpochStats& merged = report.epochs[epoch];
    for (const auto& s : worker_stats) {
      merged.local_loss_sum += s.local_loss_sum;
      merged.local_updates += s.local_updates;
      merged.global_loss_sum += s.global_loss_sum;
      merged.global_updates += s.global_updates;
    }
    if (!model_is_finite(model))
      throw DataError("training diverged: non-finite parameter after epoch " +
                      std::to_string(epoch + 1));
  }

  auto t1 = std::chrono::steady_clock::now();
  report.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  report.tokens = progress.tokens_processed.load();

  double local_sum = 0.0, global_sum = 0.0;
  int64_t local_n = 0, global_n = 0;
  for (const auto& e : report.epochs) {
    local_sum += e.local_loss_sum;
    local_n += e.local_updates;
    global_sum += e.global_loss_sum;
    global_n += e.global_updates;
  }
  report.steps = local_n + global_n;
  report.mean_local_loss = local_n ? local_sum / static_cast<double>(local_n) : 0.0;
  report.mean_global_loss = global_n ? global_sum / static_cast<double>(global_n) : 0.0;
  report.final_lr_alpha = learning_rate(cfg.alpha, report.tokens, total_tokens,
                                        cfg.epochs, cfg.lr_floor_ratio);
  report.final_lr_beta = learning_rate(cfg.beta, report.tokens, total_tokens,
                                       cfg.epochs, cfg.lr_floor_ratio);
  return report;
}

std::string RunReport::to_text() const {
  char buf[512];
  std::string out;
  auto add = [&](const char* key, const char* fmt, auto value) {
    std::snprintf(buf, sizeof(buf), fmt, value);
    out += key;
    out += '=';
    out += buf;
    out += '\n';
  };
  add("tokens", "%lld", static_cast<long long>(tokens));
  add("steps", "%lld", static_cast<long long>(steps));
  add("final_lr_alpha", "%.8g", final_lr_alpha);
  add("final_lr_beta", "%.8g", final_lr_beta);
  add("mean_local_loss", "%.8g", mean_local_loss);
  add("mean_global_loss", "%.8g", mean_global_loss);
  add("wall_seconds", "%.3f", wall_seconds);
  return out;
}

}  // namespace cewe
