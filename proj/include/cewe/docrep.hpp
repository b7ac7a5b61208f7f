#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cewe/corpus.hpp"
#include "cewe/model.hpp"

namespace cewe {

// Classification corpus: the regular record format with the first category of
// each record read as the class label. Records without categories are dropped
// and counted.
struct LabeledDocumentSet {
  std::vector<Document> documents;
  std::vector<int> labels;
  std::vector<std::string> class_names;
  int dropped = 0;

  int classes() const { return static_cast<int>(class_names.size()); }
};

LabeledDocumentSet load_labeled_corpus(const std::string& path, const Vocabulary& vocab,
                                       const CategoryVocabulary& categories);

// Mean input vector over the document's tf-idf-selected words; falls back to
// the mean over all distinct in-vocabulary words when nothing exceeds the
// threshold. nullopt when the document has no in-vocabulary words.
std::optional<std::vector<double>> document_embedding(const Model& model,
                                                      const Document& doc,
                                                      const Vocabulary& vocab);

struct LinearClassifier {
  Matrix weights;  // one row per class
  std::vector<double> bias;

  int classes() const { return weights.rows; }
  int dim() const { return weights.cols; }
};

// One-vs-rest logistic regression, SGD with L2 penalty on the weights,
// per-epoch shuffling driven by the seed.
LinearClassifier train_classifier(const std::vector<std::vector<double>>& features,
                                  const std::vector<int>& labels, int epochs,
                                  double lr, double l2, uint64_t seed);

// Total one-vs-rest log loss plus the L2 penalty, for monitoring.
double classifier_loss(const LinearClassifier& clf,
                       const std::vector<std::vector<double>>& features,
                       const std::vector<int>& labels, double l2);

// Argmax class score w_k . x + b_k; ties break toward the lowest class id.
int classify(const LinearClassifier& clf, std::span<const double> feature);

}  // namespace cewe
