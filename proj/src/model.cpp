#include "cewe/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "cewe/math.hpp"
#include "cewe/rng.hpp"

namespace cewe {

Model init_model(const ModelConfig& config, int vocab_size, int category_count) {
  if (config.dim < 1) throw ConfigError("dimension must be >= 1");
  if (vocab_size < 1) throw ConfigError("vocabulary must be nonempty");

  Model model;
  model.dim = config.dim;
  model.W = Matrix(vocab_size, config.dim);
  model.Wout = Matrix(vocab_size, config.dim);
  model.C = Matrix(category_count, config.dim);

  Rng rng(config.seed);
  double half = 0.5 / config.dim;
  auto draw = [&]() {
    return static_cast<double>(static_cast<float>((rng.real() - 0.5) * 2.0 * half));
  };
  for (auto& v : model.W.data) v = draw();
  for (auto& v : model.C.data) v = draw();
  return model;
}

bool model_is_finite(const Model& model) {
  auto ok = [](const Matrix& m) {
    return std::all_of(m.data.begin(), m.data.end(),
                       [](double v) { return std::isfinite(v); });
  };
  return ok(model.W) && ok(model.Wout) && ok(model.C);
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double na = norm(a), nb = norm(b);
  if (na == 0.0 || nb == 0.0)
    throw DataError("cosine similarity undefined for zero-norm vector");
  return dot(a, b) / (na * nb);
}

std::vector<Neighbor> nearest_neighbors(std::span<const double> query,
                                        const Matrix& matrix, int k,
                                        const std::vector<int>& exclude) {
  if (k < 1) throw ConfigError("k must be >= 1");
  double qn = norm(query);
  if (qn == 0.0) throw DataError("cosine similarity undefined for zero-norm query");

  std::vector<char> skip(matrix.rows, 0);
  for (int id : exclude)
    if (id >= 0 && id < matrix.rows) skip[id] = 1;

  std::vector<double> sims(matrix.rows);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < matrix.rows; ++i) {
    double rn = norm(matrix.row(i));
    sims[i] = (skip[i] || rn == 0.0) ? -2.0 : dot(query, matrix.row(i)) / (qn * rn);
  }

  std::vector<int> ids;
  ids.reserve(matrix.rows);
  for (int i = 0; i < matrix.rows; ++i)
    if (sims[i] > -2.0) ids.push_back(i);

  int take = std::min<int>(k, static_cast<int>(ids.size()));
  std::partial_sort(ids.begin(), ids.begin() + take, ids.end(),
                    [&](int a, int b) {
                      if (sims[a] != sims[b]) return sims[a] > sims[b];
                      return a < b;
                    });
  std::vector<Neighbor> out;
  out.reserve(take);
  for (int i = 0; i < take; ++i) out.push_back({ids[i], sims[ids[i]]});
  return out;
}

void EmbeddingTable::build_index() {
  index.clear();
  for (int i = 0; i < static_cast<int>(tokens.size()); ++i) index.emplace(tokens[i], i);
}

EmbeddingTable table_from_rows(std::vector<std::string> tokens, const Matrix& m) {
  EmbeddingTable t;
  t.tokens = std::move(tokens);
  t.vectors = m;
  t.build_index();
  return t;
}

namespace {

void save_text(const EmbeddingTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write embedding file: " + path);
  out << table.vectors.rows << ' ' << table.vectors.cols << '\n';
  char buf[32];
  for (int i = 0; i < table.vectors.rows; ++i) {
    out << table.tokens[i];
    for (double v : table.vectors.row(i)) {
      std::snprintf(buf, sizeof(buf), " %.6e", v);
      out << buf;
    }
    out << '\n';
  }
}

void save_binary(const EmbeddingTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write embedding file: " + path);
  out << table.vectors.rows << ' ' << table.vectors.cols << '\n';
  for (int i = 0; i < table.vectors.rows; ++i) {
    out << table.tokens[i] << ' ';
    for (double v : table.vectors.row(i)) {
      float f = static_cast<float>(v);
      uint32_t bits;
      std::memcpy(&bits, &f, sizeof(bits));
      char b[4] = {static_cast<char>(bits & 0xff),
                   static_cast<char>((bits >> 8) & 0xff),
                   static_cast<char>((bits >> 16) & 0xff),
                   static_cast<char>((bits >> 24) & 0xff)};
      out.write(b, 4);
    }
    out << '\n';
  }
}

long long stream_offset(std::istream& in) {
  in.clear();
  return static_cast<long long>(in.tellg());
}

// Header shared by both formats: "V D\n" in ASCII decimals.
std::pair<int, int> read_header(std::istream& in, const std::string& path) {
  long long v = -1, d = -1;
  in >> v >> d;
  if (!in || v < 0 || v > 2000000000LL || d < 1 || d > 1000000LL)
    throw FormatError("bad embedding header in " + path, stream_offset(in));
  if (in.get() != '\n')
    throw FormatError("expected newline after header in " + path, stream_offset(in));
  return {static_cast<int>(v), static_cast<int>(d)};
}

EmbeddingTable load_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open embedding file: " + path);
  auto [rows, dim] = read_header(in, path);

  EmbeddingTable table;
  table.tokens.resize(rows);
  table.vectors = Matrix(rows, dim);
  for (int i = 0; i < rows; ++i) {
    if (!(in >> table.tokens[i]))
      throw FormatError("truncated embedding file " + path,
                        stream_offset(in));
    auto row = table.vectors.row(i);
    for (int j = 0; j < dim; ++j) {
      std::string field;
      if (!(in >> field))
        throw FormatError("truncated embedding file " + path,
                          stream_offset(in));
      try {
        std::size_t used = 0;
        row[j] = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw FormatError("non-numeric value '" + field + "' in " + path,
                          stream_offset(in));
      }
    }
  }
  table.build_index();
  return table;
}

EmbeddingTable load_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open embedding file: " + path);
  auto [rows, dim] = read_header(in, path);

  EmbeddingTable table;
  table.tokens.resize(rows);
  table.vectors = Matrix(rows, dim);
  for (int i = 0; i < rows; ++i) {
    std::string token;
    int ch;
    while ((ch = in.get()) != ' ') {
      if (ch == EOF)
        throw FormatError("truncated embedding file " + path,
                          stream_offset(in));
      token.push_back(static_cast<char>(ch));
    }
    table.tokens[i] = std::move(token);
    auto row = table.vectors.row(i);
    for (int j = 0; j < dim; ++j) {
      unsigned char b[4];
      if (!in.read(reinterpret_cast<char*>(b), 4))
        throw FormatError("truncated embedding file " + path,
                          stream_offset(in));
      uint32_t bits = static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
                      (static_cast<uint32_t>(b[2]) << 16) |
                      (static_cast<uint32_t>(b[3]) << 24);
      float f;
      std::memcpy(&f, &bits, sizeof(f));
      row[j] = static_cast<double>(f);
    }
    if (in.get() != '\n')
      throw FormatError("expected newline after row in " + path,
                        stream_offset(in));
  }
  table.build_index();
  return table;
}

}  // namespace

void save_embedding_table(const EmbeddingTable& table, const std::string& path,
                          EmbeddingFormat format) {
  if (format == EmbeddingFormat::kText)
    save_text(table, path);
  else
    save_binary(table, path);
}

EmbeddingTable load_embedding_table(const std::string& path, EmbeddingFormat format) {
  return format == EmbeddingFormat::kText ? load_text(path) : load_binary(path);
}

void save_embeddings(const Model& model, const Vocabulary& vocab,
                     const CategoryVocabulary& categories, const std::string& stem,
                     EmbeddingFormat format) {
  const char* ext = format == EmbeddingFormat::kText ? "txt" : "bin";
  {
    std::vector<std::string> tokens(vocab.size());
    for (int i = 0; i < vocab.size(); ++i) tokens[i] = vocab.word(i);
    EmbeddingTable t = table_from_rows(std::move(tokens), model.W);
    save_embedding_table(t, stem + ".words." + ext, format);
  }
  if (categories.size() > 0) {
    // Category names may contain spaces; the row format is space-delimited,
    // so spaces become underscores on disk (the usual phrase convention).
    std::vector<std::string> names(categories.size());
    for (int i = 0; i < categories.size(); ++i) {
      names[i] = categories.name(i);
      std::replace(names[i].begin(), names[i].end(), ' ', '_');
    }
    EmbeddingTable t = table_from_rows(std::move(names), model.C);
    save_embedding_table(t, stem + ".cats." + ext, format);
  }
}

}  // namespace cewe
