#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace cewe::test {

namespace {

double pearson_two_pass(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double num = 0.0, dx = 0.0, dy = 0.0;
  for (int i = 0; i < n; ++i) {
    num += (x[i] - mx) * (y[i] - my);
    dx += (x[i] - mx) * (x[i] - mx);
    dy += (y[i] - my) * (y[i] - my);
  }
  return num / std::sqrt(dx * dy);
}

double cosine_ref(std::span<const double> a, std::span<const double> b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

}  // namespace

double oracle_spearman(std::span<const double> x, std::span<const double> y) {
  const int n = static_cast<int>(x.size());
  auto ranks = [&](std::span<const double> v) {
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) {
      int smaller = 0, equal = 0;
      for (int j = 0; j < n; ++j) {
        smaller += v[j] < v[i];
        equal += v[j] == v[i];
      }
      r[i] = smaller + (equal - 1) / 2.0 + 1.0;
    }
    return r;
  };
  return pearson_two_pass(ranks(x), ranks(y));
}

std::vector<Neighbor> oracle_nearest(std::span<const double> query, const Matrix& m,
                                     int k, const std::vector<int>& exclude) {
  std::set<int> excluded(exclude.begin(), exclude.end());
  std::vector<Neighbor> all;
  for (int i = 0; i < m.rows; ++i) {
    if (excluded.count(i)) continue;
    double nn = 0.0;
    for (double v : m.row(i)) nn += v * v;
    if (nn == 0.0) continue;
    all.push_back({i, cosine_ref(query, m.row(i))});
  }
  std::stable_sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.id < b.id;
  });
  if (static_cast<int>(all.size()) > k) all.resize(k);
  return all;
}

OracleAnalogyCounts oracle_analogy(const EmbeddingTable& table,
                                   const AnalogyDataset& dataset) {
  OracleAnalogyCounts counts;
  const Matrix& m = table.vectors;
  for (const auto& section : dataset.sections) {
    for (const auto& q : section.questions) {
      int a = table.lookup(q.a), b = table.lookup(q.b), c = table.lookup(q.c),
          d = table.lookup(q.d);
      if (a < 0 || b < 0 || c < 0 || d < 0) {
        ++counts.skipped;
        continue;
      }
      std::vector<double> target(m.cols);
      for (int j = 0; j < m.cols; ++j)
        target[j] = m.row(b)[j] - m.row(a)[j] + m.row(c)[j];

      int best = -1;
      double best_sim = -2.0;
      for (int x = 0; x < m.rows; ++x) {
        if (x == a || x == b || x == c) continue;
        double nn = 0.0;
        for (double v : m.row(x)) nn += v * v;
        if (nn == 0.0) continue;
        double tn = 0.0;
        for (double v : target) tn += v * v;
        if (tn == 0.0) continue;
        double sim = cosine_ref(m.row(x), target);
        if (sim > best_sim) {
          best_sim = sim;
          best = x;
        }
      }
      bool ok = best == d;
      if (section.syntactic) {
        ++counts.syntactic_total;
        counts.syntactic_correct += ok;
      } else {
        ++counts.semantic_total;
        counts.semantic_correct += ok;
      }
    }
  }
  return counts;
}

std::vector<double> oracle_document_embedding(const Model& model, const Document& doc,
                                              const Vocabulary& vocab) {
  std::map<int, int> counts;
  for (int id : doc.word_ids) ++counts[id];

  double sum = 0.0;
  for (const auto& [id, n] : counts) sum += n * vocab.idf(id);
  double avgt = sum / counts.size();

  std::vector<int> picked;
  for (const auto& [id, n] : counts)
    if (n * vocab.idf(id) > avgt) picked.push_back(id);
  if (picked.empty())
    for (const auto& [id, n] : counts) picked.push_back(id);

  std::vector<double> mean(model.dim, 0.0);
  for (int id : picked)
    for (int j = 0; j < model.dim; ++j) mean[j] += model.W.row(id)[j];
  for (auto& v : mean) v /= picked.size();
  return mean;
}

double oracle_population_std(std::span<const double> values) {
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= values.size();
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / values.size());
}

std::vector<double> oracle_geometric_pmf(double lambda, int max_rank) {
  std::vector<double> pmf(max_rank);
  double total = 0.0;
  for (int r = 0; r < max_rank; ++r) {
    pmf[r] = std::exp(-r / lambda);
    total += pmf[r];
  }
  for (auto& p : pmf) p /= total;
  return pmf;
}

std::vector<double> oracle_negative_category_pmf(std::span<const double> word_vec,
                                                 const CategoryRankIndex& index,
                                                 const std::vector<int>& positives,
                                                 const GeometricRankSampler& ranks,
                                                 int max_attempts) {
  const int dim = index.dim();
  const int count = index.category_count();

  std::vector<double> factor_p(dim, 0.0);
  double total = 0.0;
  for (int f = 0; f < dim; ++f) {
    factor_p[f] = std::abs(word_vec[f]) * index.sigma[f];
    total += factor_p[f];
  }
  if (total > 0.0)
    for (auto& p : factor_p) p /= total;
  else
    for (auto& p : factor_p) p = 1.0 / dim;

  std::vector<double> attempt(count, 0.0);
  for (int f = 0; f < dim; ++f) {
    for (int r = 0; r < ranks.max_rank(); ++r) {
      int candidate =
          word_vec[f] >= 0.0 ? index.order[f][r] : index.order[f][count - 1 - r];
      attempt[candidate] += factor_p[f] * ranks.pmf(r);
    }
  }

  double p_pos = 0.0;
  for (int c : positives) p_pos += attempt[c];
  // Probability any of the first max_attempts draws succeeds, split per
  // candidate, plus the uniform fallback after max_attempts rejections.
  double series = p_pos < 1.0
                      ? (1.0 - std::pow(p_pos, max_attempts)) / (1.0 - p_pos)
                      : 0.0;
  double all_fail = std::pow(p_pos, max_attempts);
  int survivors = count - static_cast<int>(positives.size());

  std::vector<double> pmf(count, 0.0);
  for (int c = 0; c < count; ++c) {
    if (std::find(positives.begin(), positives.end(), c) != positives.end()) continue;
    pmf[c] = attempt[c] * series + all_fail / survivors;
  }
  return pmf;
}

double chi_square_quantile(int dof, double upper_tail) {
  // Wilson-Hilferty; z for the few tail levels the tests use.
  double z;
  if (upper_tail <= 0.001)
    z = 3.090232;
  else if (upper_tail <= 0.01)
    z = 2.326348;
  else
    z = 1.644854;
  double k = static_cast<double>(dof);
  double t = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
  return k * t * t * t;
}

namespace {

double ns_loss(std::span<const double> h, const Matrix& outputs, int target,
               const std::vector<int>& negatives) {
  auto dotp = [&](std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  auto log_sig = [](double x) {
    if (x >= 0.0) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
  };
  double loss = -log_sig(dotp(outputs.row(target), h));
  for (int n : negatives) loss -= log_sig(-dotp(outputs.row(n), h));
  return loss;
}

std::vector<double> local_h(const LocalInstance& inst) {
  const Model& m = inst.model;
  std::vector<double> h(m.dim, 0.0);
  for (int j : inst.context)
    for (int d = 0; d < m.dim; ++d) h[d] += m.W.row(j)[d];
  for (auto& v : h) v /= inst.context.size();
  if (!inst.categories.empty()) {
    for (int c : inst.categories)
      for (int d = 0; d < m.dim; ++d)
        h[d] += inst.lambda / inst.categories.size() * m.C.row(c)[d];
  }
  return h;
}

}  // namespace

double oracle_local_loss(const LocalInstance& inst) {
  return ns_loss(local_h(inst), inst.model.Wout, inst.target, inst.negatives);
}

double oracle_global_loss(const GlobalInstance& inst) {
  return ns_loss(inst.model.W.row(inst.word), inst.model.C, inst.target_category,
                 inst.negatives);
}

ModelGrads implementation_local_gradients(const LocalInstance& inst) {
  Model work = inst.model;
  CompositeContext cc =
      composite_context(inst.context, inst.categories, work, inst.lambda);
  UpdateResult res =
      negative_sampling_update(cc.h, inst.target, inst.negatives, 1.0, work.Wout);
  for (int j : inst.context)
    for (int d = 0; d < work.dim; ++d)
      work.W.row(j)[d] -= cc.word_weight * res.e[d];
  if (cc.category_weight != 0.0)
    for (int c : inst.categories)
      for (int d = 0; d < work.dim; ++d)
        work.C.row(c)[d] -= cc.category_weight * res.e[d];

  ModelGrads grads;
  grads.W = Matrix(work.W.rows, work.W.cols);
  grads.Wout = Matrix(work.Wout.rows, work.Wout.cols);
  grads.C = Matrix(work.C.rows, work.C.cols);
  for (std::size_t i = 0; i < work.W.data.size(); ++i)
    grads.W.data[i] = inst.model.W.data[i] - work.W.data[i];
  for (std::size_t i = 0; i < work.Wout.data.size(); ++i)
    grads.Wout.data[i] = inst.model.Wout.data[i] - work.Wout.data[i];
  for (std::size_t i = 0; i < work.C.data.size(); ++i)
    grads.C.data[i] = inst.model.C.data[i] - work.C.data[i];
  return grads;
}

ModelGrads implementation_global_gradients(const GlobalInstance& inst) {
  Model work = inst.model;
  UpdateResult res = negative_sampling_update(
      work.W.row(inst.word), inst.target_category, inst.negatives, 1.0, work.C);
  for (int d = 0; d < work.dim; ++d) work.W.row(inst.word)[d] -= res.e[d];

  ModelGrads grads;
  grads.W = Matrix(work.W.rows, work.W.cols);
  grads.Wout = Matrix(work.Wout.rows, work.Wout.cols);
  grads.C = Matrix(work.C.rows, work.C.cols);
  for (std::size_t i = 0; i < work.W.data.size(); ++i)
    grads.W.data[i] = inst.model.W.data[i] - work.W.data[i];
  for (std::size_t i = 0; i < work.C.data.size(); ++i)
    grads.C.data[i] = inst.model.C.data[i] - work.C.data[i];
  return grads;
}

namespace {

double relative_error(double a, double b) {
  double scale = std::max({1e-8, std::abs(a), std::abs(b)});
  return std::abs(a - b) / scale;
}

// Central finite difference of `loss` wrt one coordinate of `storage`.
template <typename Loss>
double central_difference(std::vector<double>& storage, std::size_t index, double step,
                          Loss&& loss) {
  double saved = storage[index];
  storage[index] = saved + step;
  double up = loss();
  storage[index] = saved - step;
  double down = loss();
  storage[index] = saved;
  return (up - down) / (2.0 * step);
}

}  // namespace

double max_gradient_error_local(const LocalInstance& instance, double step) {
  LocalInstance inst = instance;
  ModelGrads grads = implementation_local_gradients(inst);
  auto loss = [&]() { return oracle_local_loss(inst); };

  double worst = 0.0;
  const int dim = inst.model.dim;
  std::set<int> context_ids(inst.context.begin(), inst.context.end());
  std::set<int> category_ids(inst.categories.begin(), inst.categories.end());
  std::set<int> output_ids(inst.negatives.begin(), inst.negatives.end());
  output_ids.insert(inst.target);

  for (int id : context_ids)
    for (int d = 0; d < dim; ++d) {
      std::size_t k = static_cast<std::size_t>(id) * dim + d;
      double fd = central_difference(inst.model.W.data, k, step, loss);
      worst = std::max(worst, relative_error(grads.W.data[k], fd));
    }
  for (int id : category_ids)
    for (int d = 0; d < dim; ++d) {
      std::size_t k = static_cast<std::size_t>(id) * dim + d;
      double fd = central_difference(inst.model.C.data, k, step, loss);
      worst = std::max(worst, relative_error(grads.C.data[k], fd));
    }
  for (int id : output_ids)
    for (int d = 0; d < dim; ++d) {
      std::size_t k = static_cast<std::size_t>(id) * dim + d;
      double fd = central_difference(inst.model.Wout.data, k, step, loss);
      worst = std::max(worst, relative_error(grads.Wout.data[k], fd));
    }
  return worst;
}

double max_gradient_error_global(const GlobalInstance& instance, double step) {
  GlobalInstance inst = instance;
  ModelGrads grads = implementation_global_gradients(inst);
  auto loss = [&]() { return oracle_global_loss(inst); };

  double worst = 0.0;
  const int dim = inst.model.dim;
  std::set<int> category_ids(inst.negatives.begin(), inst.negatives.end());
  category_ids.insert(inst.target_category);

  for (int d = 0; d < dim; ++d) {
    std::size_t k = static_cast<std::size_t>(inst.word) * dim + d;
    double fd = central_difference(inst.model.W.data, k, step, loss);
    worst = std::max(worst, relative_error(grads.W.data[k], fd));
  }
  for (int id : category_ids)
    for (int d = 0; d < dim; ++d) {
      std::size_t k = static_cast<std::size_t>(id) * dim + d;
      double fd = central_difference(inst.model.C.data, k, step, loss);
      worst = std::max(worst, relative_error(grads.C.data[k], fd));
    }
  return worst;
}

}  // namespace cewe::test
