#pragma once

#include <span>
#include <string>
#include <vector>

#include "cewe/model.hpp"

namespace cewe {

struct SimilarityPair {
  std::string word1;
  std::string word2;
  double score;
};

struct SimilarityDataset {
  std::vector<SimilarityPair> pairs;
};

// One pair per line: word1 word2 score, separated by tabs or spaces.
SimilarityDataset load_similarity_dataset(const std::string& path, bool lowercase);

struct AnalogyQuestion {
  std::string a, b, c, d;
};

struct AnalogySection {
  std::string name;
  bool syntactic;  // section names starting with "gram"
  std::vector<AnalogyQuestion> questions;
};

struct AnalogyDataset {
  std::vector<AnalogySection> sections;
  int total_questions() const;
};

// Section headers ": name", then four words per line.
AnalogyDataset load_analogy_dataset(const std::string& path, bool lowercase);

// Rank correlation with average ranks for ties. Throws DataError when either
// list has no rank variance or fewer than two entries.
double spearman(std::span<const double> x, std::span<const double> y);

struct SimilarityResult {
  double rho = 0.0;
  int pairs_used = 0;
  int pairs_skipped = 0;
};

// Model score per pair is the cosine of the two word vectors; pairs with an
// out-of-vocabulary word are skipped and counted.
SimilarityResult evaluate_similarity(const EmbeddingTable& vectors,
                                     const SimilarityDataset& dataset);

struct AnalogyResult {
  double semantic_accuracy = 0.0;
  double syntactic_accuracy = 0.0;
  double total_accuracy = 0.0;
  int semantic_total = 0, semantic_correct = 0;
  int syntactic_total = 0, syntactic_correct = 0;
  int answered = 0;
  int skipped = 0;  // questions with an out-of-vocabulary slot
  double coverage = 0.0;
};

// Answer = argmax over the vocabulary (excluding a, b, c) of
// cosine(x, b - a + c); a question counts only when all four words are known.
AnalogyResult evaluate_analogy(const EmbeddingTable& vectors,
                               const AnalogyDataset& dataset);

// Nearest word vectors to a category vector (cross-matrix query).
std::vector<Neighbor> nearest_words_to_category(const Model& model, int category, int k);

// Nearest other categories to a category.
std::vector<Neighbor> nearest_categories_to_category(const Model& model, int category,
                                                     int k);

}  // namespace cewe
