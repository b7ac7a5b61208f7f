#include "cewe/docrep.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "cewe/math.hpp"
#include "cewe/rng.hpp"

namespace cewe {

LabeledDocumentSet load_labeled_corpus(const std::string& path, const Vocabulary& vocab,
                                       const CategoryVocabulary& categories) {
  LabeledDocumentSet set;
  std::unordered_map<std::string, int> class_ids;
  CorpusReader reader(path);
  while (auto raw = reader.next()) {
    if (raw->categories.empty()) {
      ++set.dropped;
      continue;
    }
    const std::string& label = raw->categories.front();
    auto [it, inserted] = class_ids.emplace(label, static_cast<int>(set.class_names.size()));
    if (inserted) set.class_names.push_back(label);
    set.documents.push_back(tokenize_document(*raw, vocab, categories));
    set.labels.push_back(it->second);
  }
  return set;
}

std::optional<std::vector<double>> document_embedding(const Model& model,
                                                      const Document& doc,
                                                      const Vocabulary& vocab) {
  if (doc.word_ids.empty()) return std::nullopt;

  std::vector<int> words = select_global_words(doc, vocab);
  if (words.empty()) {
    std::set<int> distinct(doc.word_ids.begin(), doc.word_ids.end());
    words.assign(distinct.begin(), distinct.end());
  }

  std::vector<double> mean(model.dim, 0.0);
  for (int id : words) axpy(1.0, model.W.row(id), mean);
  double inv = 1.0 / static_cast<double>(words.size());
  for (auto& v : mean) v *= inv;
  return mean;
}

LinearClassifier train_classifier(const std::vector<std::vector<double>>& features,
                                  const std::vector<int>& labels, int epochs,
                                  double lr, double l2, uint64_t seed) {
  if (features.empty() || features.size() != labels.size())
    throw DataError("classifier needs matching nonempty features and labels");
  const int dim = static_cast<int>(features.front().size());
  int classes = 0;
  for (int y : labels) classes = std::max(classes, y + 1);
  std::vector<int64_t> per_class(classes, 0);
  for (int y : labels) ++per_class[y];
  if (classes < 2 || std::count(per_class.begin(), per_class.end(), 0) > 0)
    throw DataError("classifier needs at least two classes with examples");

  LinearClassifier clf;
  clf.weights = Matrix(classes, dim);
  clf.bias.assign(classes, 0.0);

  Rng rng(seed);
  std::vector<int> order(features.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  for (int epoch = 0; epoch < epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.index(i)]);
    for (int idx : order) {
      const auto& x = features[idx];
      for (int k = 0; k < classes; ++k) {
        double score = dot(clf.weights.row(k), x) + clf.bias[k];
        double g = sigmoid(score) - (labels[idx] == k ? 1.0 : 0.0);
        auto w = clf.weights.row(k);
        for (int j = 0; j < dim; ++j) w[j] -= lr * (g * x[j] + l2 * w[j]);
        clf.bias[k] -= lr * g;
      }
    }
  }
  return clf;
}

double classifier_loss(const LinearClassifier& clf,
                       const std::vector<std::vector<double>>& features,
                       const std::vector<int>& labels, double l2) {
  double loss = 0.0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    for (int k = 0; k < clf.classes(); ++k) {
      double score = dot(clf.weights.row(k), features[i]) + clf.bias[k];
      loss -= labels[i] == k ? log_sigmoid(score) : log_sigmoid(-score);
    }
  }
  double penalty = 0.0;
  for (double w : clf.weights.data) penalty += w * w;
  return loss + 0.5 * l2 * penalty;
}

int classify(const LinearClassifier& clf, std::span<const double> feature) {
  if (static_cast<int>(feature.size()) != clf.dim())
    throw DataError("feature dimension does not match the classifier");
  int best = 0;
  double best_score = dot(clf.weights.row(0), feature) + clf.bias[0];
  for (int k = 1; k < clf.classes(); ++k) {
    double score = dot(clf.weights.row(k), feature) + clf.bias[k];
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  return best;
}

}  // namespace cewe
