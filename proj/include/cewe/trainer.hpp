#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "cewe/corpus.hpp"
#include "cewe/model.hpp"
#include "cewe/rng.hpp"
#include "cewe/sampling.hpp"

namespace cewe {

enum class ModelType { kCbow, kCewe, kGcewe };

ModelType model_type_from_string(const std::string& name);
std::string to_string(ModelType type);

// Weight of the category average inside the composite context: reciprocal of
// the context size, or a fixed constant.
enum class LambdaMode { kReciprocalContext, kFixed };

struct TrainConfig {
  ModelType model = ModelType::kCewe;
  int dim = 300;
  int window = 5;  // context words taken on each side of the target
  int negatives_words = 20;
  int negatives_categories = 20;
  double alpha = 0.02;  // local-pass learning rate
  double beta = 0.015;  // global-pass learning rate
  LambdaMode lambda_mode = LambdaMode::kReciprocalContext;
  double lambda_value = 1.0;  // used in kFixed mode
  double lambda_rank = 5.0;
  double subsample_t = 1e-4;  // <= 0 disables subsampling
  int epochs = 2;
  int workers = 1;
  int64_t refresh_interval = 50000;  // global steps between rank-index rebuilds
  uint64_t seed = 1;
  double lr_floor_ratio = 1e-4;
  double unigram_power = 0.75;
  int64_t unigram_table_size = 10000000;
  bool verbose = false;
};

struct TrainProgress {
  std::atomic<int64_t> tokens_processed{0};
  std::atomic<int64_t> global_steps{0};
};

struct EpochStats {
  double local_loss_sum = 0.0;
  int64_t local_updates = 0;
  double global_loss_sum = 0.0;
  int64_t global_updates = 0;

  double mean_local() const {
    return local_updates ? local_loss_sum / static_cast<double>(local_updates) : 0.0;
  }
  double mean_global() const {
    return global_updates ? global_loss_sum / static_cast<double>(global_updates) : 0.0;
  }
};

struct RunReport {
  int64_t tokens = 0;
  int64_t steps = 0;
  double final_lr_alpha = 0.0;
  double final_lr_beta = 0.0;
  double mean_local_loss = 0.0;
  double mean_global_loss = 0.0;
  double wall_seconds = 0.0;
  std::vector<EpochStats> epochs;

  std::string to_text() const;  // key=value lines
};

// Linear decay over the whole run with a floor:
// initial * max(1 - processed / (epochs * total + 1), floor_ratio).
double learning_rate(double initial, int64_t tokens_processed, int64_t total_tokens,
                     int epochs, double floor_ratio);

struct CompositeContext {
  std::vector<double> h;
  double word_weight = 0.0;      // 1/cw, applied to each context word
  double category_weight = 0.0;  // lambda/n_c, 0 when no categories take part
};

struct ContextWeights {
  double word_weight = 0.0;
  double category_weight = 0.0;
};

// Buffers one worker reuses across updates; the training loops do no heap
// allocation per window.
struct TrainScratch {
  std::vector<double> h;
  std::vector<double> e;
  std::vector<double> g;
  std::vector<int> kept;
  std::vector<int> context;
  std::vector<int> negatives;
};

// h = mean of context word vectors plus lambda_cat times the mean of category
// vectors. With no categories this is exactly the plain context average.
CompositeContext composite_context(std::span<const int> context_words,
                                   std::span<const int> category_ids,
                                   const Model& model, double lambda_cat);

// In-place variant writing into a reused buffer.
ContextWeights composite_context_into(std::span<const int> context_words,
                                      std::span<const int> category_ids,
                                      const Model& model, double lambda_cat,
                                      std::vector<double>& h);

struct UpdateResult {
  double loss;
  // lr * sum of g_i * (pre-update) output vectors; subtract a weighted copy
  // from each input that contributed to h.
  std::vector<double> e;
};

// One negative-sampling step against the rows of `outputs`. All gradients use
// pre-update values; the target row moves by -lr*(sigmoid(s)-1)*h and each
// negative row by -lr*sigmoid(s)*h.
UpdateResult negative_sampling_update(std::span<const double> h, int target,
                                      std::span<const int> negatives, double lr,
                                      Matrix& outputs);

// In-place variant: accumulates e into a reused buffer, returns the loss.
double negative_sampling_step(std::span<const double> h, int target,
                              std::span<const int> negatives, double lr,
                              Matrix& outputs, std::vector<double>& e,
                              std::vector<double>& g_scratch);

// Shared, periodically rebuilt rank index. Readers take snapshots; rebuilds
// happen at refresh-interval boundaries and never block readers.
class RankIndexController {
 public:
  RankIndexController(const Matrix& categories, int64_t interval);

  std::shared_ptr<const CategoryRankIndex> snapshot() const;

  // `steps` is the just-incremented global step count. Rebuilds the index at
  // interval boundaries; returns true when this call refreshed it.
  bool on_step(int64_t steps, const Matrix& categories);

 private:
  mutable std::mutex ptr_mu_;
  std::mutex refresh_mu_;
  std::shared_ptr<const CategoryRankIndex> index_;
  int64_t interval_;
};

struct DocStats {
  double loss_sum = 0.0;
  int64_t updates = 0;
};

// Window loop over the subsample-filtered token sequence; one negative
// sampling step per surviving position, context gradient fanned out to the
// contributing word and category vectors.
DocStats train_document_local(Model& model, const Document& doc,
                              const TrainConfig& cfg, const UnigramTable& noise,
                              const Vocabulary& vocab, Rng& rng, double lr_alpha,
                              TrainScratch* scratch = nullptr);

// Everything the per-document global pass reads; controller and progress are
// optional so the pass can run standalone against a fixed index.
struct GlobalContext {
  const GeometricRankSampler* ranks = nullptr;
  std::shared_ptr<const CategoryRankIndex> index;
  RankIndexController* controller = nullptr;
  TrainProgress* progress = nullptr;
};

// Each selected word predicts every positive category of its document, with
// adaptively sampled negative categories.
DocStats train_document_global(Model& model, const Document& doc,
                               const std::vector<int>& selected,
                               const TrainConfig& cfg, GlobalContext& ctx,
                               Rng& rng, double lr_beta,
                               TrainScratch* scratch = nullptr);

// Full run: epochs passes over the corpus, documents sharded round-robin
// across workers, lock-free shared-parameter updates. Deterministic for
// workers=1.
RunReport train(Model& model, const std::string& corpus_path, const Vocabulary& vocab,
                const CategoryVocabulary& categories, const TrainConfig& cfg);

}  // namespace cewe
