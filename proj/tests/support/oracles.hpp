#pragma once

// Independently coded reference implementations used only to generate
// expected values for tests. None of these call the library code paths they
// are checking.

#include <cstdint>
#include <span>
#include <vector>

#include "cewe/corpus.hpp"
#include "cewe/eval.hpp"
#include "cewe/model.hpp"
#include "cewe/sampling.hpp"
#include "cewe/trainer.hpp"

namespace cewe::test {

// Average ranks by counting smaller/equal values (O(n^2)), then a two-pass
// Pearson correlation.
double oracle_spearman(std::span<const double> x, std::span<const double> y);

// Plain full scan with stable sort.
std::vector<Neighbor> oracle_nearest(std::span<const double> query, const Matrix& m,
                                     int k, const std::vector<int>& exclude = {});

struct OracleAnalogyCounts {
  int semantic_total = 0, semantic_correct = 0;
  int syntactic_total = 0, syntactic_correct = 0;
  int skipped = 0;
};

OracleAnalogyCounts oracle_analogy(const EmbeddingTable& table,
                                   const AnalogyDataset& dataset);

// TF-IDF selection and mean recomputed from scratch.
std::vector<double> oracle_document_embedding(const Model& model, const Document& doc,
                                              const Vocabulary& vocab);

double oracle_population_std(std::span<const double> values);

std::vector<double> oracle_geometric_pmf(double lambda, int max_rank);

// Exact distribution of sample_negative_category: per-attempt candidate pmf
// from the factor and rank distributions, a truncated rejection series over
// the positives, then the uniform fallback.
std::vector<double> oracle_negative_category_pmf(std::span<const double> word_vec,
                                                 const CategoryRankIndex& index,
                                                 const std::vector<int>& positives,
                                                 const GeometricRankSampler& ranks,
                                                 int max_attempts);

// Upper chi-square quantile via the Wilson-Hilferty approximation.
double chi_square_quantile(int dof, double upper_tail);

// ---- gradient checking -----------------------------------------------------

struct LocalInstance {
  Model model;
  std::vector<int> context;
  std::vector<int> categories;
  double lambda = 1.0;
  int target = 0;
  std::vector<int> negatives;
};

struct GlobalInstance {
  Model model;
  int word = 0;
  int target_category = 0;
  std::vector<int> negatives;
};

// Straight-line recomputations of the two negative-sampling objectives.
double oracle_local_loss(const LocalInstance& instance);
double oracle_global_loss(const GlobalInstance& instance);

struct ModelGrads {
  Matrix W, Wout, C;
};

// Gradients as the implementation realizes them: one update step at rate 1
// on a copy of the model, parameter deltas negated.
ModelGrads implementation_local_gradients(const LocalInstance& instance);
ModelGrads implementation_global_gradients(const GlobalInstance& instance);

// Max relative error between the implementation gradients and central finite
// differences of the oracle loss over every participating coordinate.
double max_gradient_error_local(const LocalInstance& instance, double step = 1e-5);
double max_gradient_error_global(const GlobalInstance& instance, double step = 1e-5);

}  // namespace cewe::test
