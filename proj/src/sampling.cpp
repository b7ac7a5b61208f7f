#include "cewe/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cewe {

UnigramTable::UnigramTable(const Vocabulary& vocab, double power, int64_t table_size)
    : power_(power), vocab_size_(vocab.size()) {
  if (table_size < vocab.size())
    throw ConfigError("unigram table smaller than the vocabulary");

  double total = 0.0;
  for (int i = 0; i < vocab.size(); ++i)
    total += std::pow(static_cast<double>(vocab.count(i)), power);

  // Slot boundaries are the rounded cumulative masses, so each word's slot
  // share is within 1/table_size of its probability.
  table_.resize(table_size);
  double cum = 0.0;
  int64_t begin = 0;
  for (int i = 0; i < vocab.size(); ++i) {
    cum += std::pow(static_cast<double>(vocab.count(i)), power);
    int64_t end = i + 1 == vocab.size()
                      ? table_size
                      : std::llround(cum / total * static_cast<double>(table_size));
    end = std::clamp<int64_t>(end, begin, table_size);
    std::fill(table_.begin() + begin, table_.begin() + end, i);
    begin = end;
  }
}

int UnigramTable::sample_excluding(Rng& rng, int exclude) const {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    int w = sample(rng);
    if (w != exclude) return w;
  }
  // Degenerate table where exclude owns nearly every slot.
  int w = static_cast<int>(rng.index(static_cast<uint64_t>(vocab_size_ - 1)));
  return w >= exclude ? w + 1 : w;
}

double subsample_keep_probability(double word_freq, double t) {
  return std::min(1.0, std::sqrt(t / word_freq));
}

GeometricRankSampler::GeometricRankSampler(double lambda_rank, int max_rank)
    : lambda_(lambda_rank) {
  if (lambda_rank <= 0.0) throw ConfigError("lambda_rank must be positive");
  if (max_rank < 1) throw ConfigError("max_rank must be >= 1");
  cdf_.resize(max_rank);
  double cum = 0.0;
  for (int r = 0; r < max_rank; ++r) {
    cum += std::exp(-static_cast<double>(r) / lambda_);
    cdf_[r] = cum;
  }
  for (auto& c : cdf_) c /= cum;
  cdf_.back() = 1.0;
}

int GeometricRankSampler::sample(Rng& rng) const {
  double u = rng.real();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return static_cast<int>(it - cdf_.begin());
}

double GeometricRankSampler::pmf(int r) const {
  double total = 0.0;
  for (int i = 0; i < max_rank(); ++i) total += std::exp(-static_cast<double>(i) / lambda_);
  return std::exp(-static_cast<double>(r) / lambda_) / total;
}

CategoryRankIndex refresh_rank_index(const Matrix& categories, int64_t version) {
  const int count = categories.rows;
  const int dim = categories.cols;
  CategoryRankIndex index;
  index.version = version;
  index.order.resize(dim);
  index.sigma.assign(dim, 0.0);

#pragma omp parallel for schedule(static)
  for (int f = 0; f < dim; ++f) {
    auto& order = index.order[f];
    order.resize(count);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int32_t a, int32_t b) {
      double va = categories.row(a)[f], vb = categories.row(b)[f];
      if (va != vb) return va > vb;
      return a < b;
    });

    double mean = 0.0;
    for (int i = 0; i < count; ++i) mean += categories.row(i)[f];
    mean /= std::max(count, 1);
    double var = 0.0;
    for (int i = 0; i < count; ++i) {
      double d = categories.row(i)[f] - mean;
      var += d * d;
    }
    index.sigma[f] = count > 0 ? std::sqrt(var / count) : 0.0;
  }
  return index;
}

std::optional<int> sample_factor(std::span<const double> word_vec,
                                 const CategoryRankIndex& index, Rng& rng) {
  double total = 0.0;
  for (std::size_t f = 0; f < word_vec.size(); ++f)
    total += std::abs(word_vec[f]) * index.sigma[f];
  if (total <= 0.0) return std::nullopt;

  double u = rng.real() * total;
  double cum = 0.0;
  for (std::size_t f = 0; f < word_vec.size(); ++f) {
    cum += std::abs(word_vec[f]) * index.sigma[f];
    if (u < cum) return static_cast<int>(f);
  }
  return static_cast<int>(word_vec.size()) - 1;
}

namespace {

bool is_positive(const std::vector<int>& positives, int id) {
  return std::find(positives.begin(), positives.end(), id) != positives.end();
}

}  // namespace

int sample_negative_category(std::span<const double> word_vec,
                             const CategoryRankIndex& index,
                             const std::vector<int>& positives,
                             const GeometricRankSampler& ranks, Rng& rng,
                             int max_attempts) {
  const int count = index.category_count();
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    int f;
    if (auto drawn = sample_factor(word_vec, index, rng))
      f = *drawn;
    else
      f = static_cast<int>(rng.index(static_cast<uint64_t>(word_vec.size())));
    int r = ranks.sample(rng);
    int candidate = word_vec[f] >= 0.0 ? index.order[f][r]
                                       : index.order[f][count - 1 - r];
    if (!is_positive(positives, candidate)) return candidate;
  }

  // Uniform over the non-positive categories.
  int survivors = count - static_cast<int>(positives.size());
  int pick = static_cast<int>(rng.index(static_cast<uint64_t>(survivors)));
  for (int id = 0;; ++id) {
    if (is_positive(positives, id)) continue;
    if (pick-- == 0) return id;
  }
}

}  // namespace cewe
