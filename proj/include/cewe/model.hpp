#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cewe/corpus.hpp"
#include "cewe/errors.hpp"

namespace cewe {

// Row-major dense matrix of doubles.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  std::span<double> row(int i) {
    return {data.data() + static_cast<std::size_t>(i) * cols,
            static_cast<std::size_t>(cols)};
  }
  std::span<const double> row(int i) const {
    return {data.data() + static_cast<std::size_t>(i) * cols,
            static_cast<std::size_t>(cols)};
  }
};

struct ModelConfig {
  int dim = 300;
  uint64_t seed = 1;
};

// Shared trainable state: input word vectors W, output word vectors Wout,
// category vectors C. All three share one dimension.
struct Model {
  Matrix W;
  Matrix Wout;
  Matrix C;
  int dim = 0;
};

// W and C uniform on [-0.5/dim, 0.5/dim] (quantized to float32 so the binary
// file format round-trips a fresh model exactly), Wout zero.
Model init_model(const ModelConfig& config, int vocab_size, int category_count);

bool model_is_finite(const Model& model);

// Throws DataError on a zero-norm input.
double cosine(std::span<const double> a, std::span<const double> b);

struct Neighbor {
  int id;
  double similarity;
};

// Top-k rows of `matrix` by cosine similarity to `query`, descending, ties
// broken by ascending id. Excluded ids and zero-norm rows are skipped; fewer
// than k results are returned when fewer candidates exist.
std::vector<Neighbor> nearest_neighbors(std::span<const double> query,
                                        const Matrix& matrix, int k,
                                        const std::vector<int>& exclude = {});

enum class EmbeddingFormat { kText, kBinary };

// One embedding file as loaded from disk: token strings, their vectors, and
// a token -> row index.
struct EmbeddingTable {
  std::vector<std::string> tokens;
  Matrix vectors;
  std::unordered_map<std::string, int> index;

  void build_index();
  int lookup(const std::string& token) const {
    auto it = index.find(token);
    return it == index.end() ? -1 : it->second;
  }
};

// Text: "V D" header then one "token v_1 ... v_D" line per row.
// Binary: "V D\n" header then per row: token bytes, space, D little-endian
// float32 values, newline.
void save_embedding_table(const EmbeddingTable& table, const std::string& path,
                          EmbeddingFormat format);
EmbeddingTable load_embedding_table(const std::string& path, EmbeddingFormat format);

// Writes <stem>.words.<ext> (W) and, when categories exist, <stem>.cats.<ext>
// (C). ext is "txt" or "bin".
void save_embeddings(const Model& model, const Vocabulary& vocab,
                     const CategoryVocabulary& categories, const std::string& stem,
                     EmbeddingFormat format);

EmbeddingTable table_from_rows(std::vector<std::string> tokens, const Matrix& m);

}  // namespace cewe
