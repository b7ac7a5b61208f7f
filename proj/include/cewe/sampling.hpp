#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "cewe/corpus.hpp"
#include "cewe/model.hpp"
#include "cewe/rng.hpp"

namespace cewe {

// Noise distribution for negative words: unigram counts raised to `power`,
// laid out as a lookup table so a draw is one random index.
class UnigramTable {
 public:
  UnigramTable(const Vocabulary& vocab, double power, int64_t table_size);

  int sample(Rng& rng) const {
    return table_[rng.index(static_cast<uint64_t>(table_.size()))];
  }

  // A word != exclude, via rejection on the table distribution.
  int sample_excluding(Rng& rng, int exclude) const;

  int64_t size() const { return static_cast<int64_t>(table_.size()); }
  int entry(int64_t i) const { return table_[i]; }
  double power() const { return power_; }

 private:
  std::vector<int32_t> table_;
  double power_;
  int vocab_size_;
};

// Per-occurrence keep probability min(1, sqrt(t / word_freq)).
double subsample_keep_probability(double word_freq, double t);

// Rank distribution p(r) proportional to exp(-r / lambda), truncated to
// {0 .. max_rank-1}.
class GeometricRankSampler {
 public:
  GeometricRankSampler(double lambda_rank, int max_rank);

  int sample(Rng& rng) const;
  double pmf(int r) const;
  int max_rank() const { return static_cast<int>(cdf_.size()); }
  double lambda() const { return lambda_; }

 private:
  std::vector<double> cdf_;
  double lambda_;
};

// For every factor f: all category ids sorted by descending C[.][f], plus the
// population standard deviation of that factor over all categories. Rebuilt
// periodically during training; readers hold a snapshot.
struct CategoryRankIndex {
  std::vector<std::vector<int32_t>> order;  // [dim][category_count]
  std::vector<double> sigma;                // [dim]
  int64_t version = 0;

  int category_count() const {
    return order.empty() ? 0 : static_cast<int>(order[0].size());
  }
  int dim() const { return static_cast<int>(order.size()); }
};

CategoryRankIndex refresh_rank_index(const Matrix& categories, int64_t version = 0);

// Factor f with probability |w_f| * sigma_f, normalized. nullopt when every
// weight is zero; callers fall back to a uniform factor.
std::optional<int> sample_factor(std::span<const double> word_vec,
                                 const CategoryRankIndex& index, Rng& rng);

// Draw factor and rank; take the rank-th largest category along the factor
// when w_f >= 0, rank-th smallest otherwise. Positive categories are rejected
// and redrawn up to max_attempts, then the draw falls back to a uniform
// choice among non-positive categories.
int sample_negative_category(std::span<const double> word_vec,
                             const CategoryRankIndex& index,
                             const std::vector<int>& positives,
                             const GeometricRankSampler& ranks, Rng& rng,
                             int max_attempts = 16);

}  // namespace cewe
