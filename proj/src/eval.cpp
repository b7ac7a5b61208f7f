#include "cewe/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "cewe/errors.hpp"
#include "cewe/math.hpp"

namespace cewe {

namespace {

std::string fold(std::string s, bool lowercase) {
  if (lowercase)
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<double> average_ranks(std::span<const double> values) {
  const int n = static_cast<int>(values.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return values[a] < values[b]; });

  std::vector<double> ranks(n);
  int i = 0;
  while (i < n) {
    int j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (int k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const int n = static_cast<int>(x.size());
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0)
    throw DataError("rank correlation undefined: zero rank variance");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

SimilarityDataset load_similarity_dataset(const std::string& path, bool lowercase) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open similarity dataset: " + path);
  SimilarityDataset ds;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    for (auto& c : line)
      if (c == '\t') c = ' ';
    std::istringstream ss(line);
    SimilarityPair pair;
    std::string score;
    if (!(ss >> pair.word1 >> pair.word2 >> score))
      throw ParseError("similarity pair needs two words and a score", line_no);
    try {
      pair.score = std::stod(score);
    } catch (const std::exception&) {
      throw ParseError("non-numeric similarity score '" + score + "'", line_no);
    }
    if (!std::isfinite(pair.score))
      throw ParseError("similarity score must be finite", line_no);
    pair.word1 = fold(std::move(pair.word1), lowercase);
    pair.word2 = fold(std::move(pair.word2), lowercase);
    ds.pairs.push_back(std::move(pair));
  }
  return ds;
}

int AnalogyDataset::total_questions() const {
  int n = 0;
  for (const auto& s : sections) n += static_cast<int>(s.questions.size());
  return n;
}

AnalogyDataset load_analogy_dataset(const std::string& path, bool lowercase) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open analogy dataset: " + path);
  AnalogyDataset ds;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == ':') {
      AnalogySection section;
      std::istringstream ss(line.substr(1));
      ss >> section.name;
      section.syntactic = section.name.rfind("gram", 0) == 0;
      ds.sections.push_back(std::move(section));
      continue;
    }
    if (ds.sections.empty())
      throw ParseError("analogy question before any section header", line_no);
    std::istringstream ss(line);
    AnalogyQuestion q;
    std::string extra;
    if (!(ss >> q.a >> q.b >> q.c >> q.d) || (ss >> extra))
      throw ParseError("analogy question needs exactly four words", line_no);
    q.a = fold(std::move(q.a), lowercase);
    q.b = fold(std::move(q.b), lowercase);
    q.c = fold(std::move(q.c), lowercase);
    q.d = fold(std::move(q.d), lowercase);
    ds.sections.back().questions.push_back(std::move(q));
  }
  return ds;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("rank correlation needs equal lengths");
  if (x.size() < 2) throw DataError("rank correlation needs at least two points");
  auto rx = average_ranks(x);
  auto ry = average_ranks(y);
  return pearson(rx, ry);
}

SimilarityResult evaluate_similarity(const EmbeddingTable& vectors,
                                     const SimilarityDataset& dataset) {
  SimilarityResult result;
  std::vector<double> model_scores, human_scores;
  for (const auto& pair : dataset.pairs) {
    int i = vectors.lookup(pair.word1);
    int j = vectors.lookup(pair.word2);
    if (i < 0 || j < 0) {
      ++result.pairs_skipped;
      continue;
    }
    model_scores.push_back(cosine(vectors.vectors.row(i), vectors.vectors.row(j)));
    human_scores.push_back(pair.score);
    ++result.pairs_used;
  }
  if (result.pairs_used == 0)
    throw DataError("no similarity pair is covered by the vocabulary");
  result.rho = spearman(model_scores, human_scores);
  return result;
}

namespace {

struct FlatQuestion {
  int a, b, c, d;
  bool syntactic;
};

// Argmax of cosine(x, query) over unit rows, excluding the question words and
// zero-norm rows; ties resolve to the lowest id.
int predict(const Matrix& units, const std::vector<char>& valid,
            std::span<const double> query, int a, int b, int c) {
  double qn = norm(query);
  if (qn == 0.0) return -1;
  int best = -1;
  double best_score = -2.0;
  for (int x = 0; x < units.rows; ++x) {
    if (!valid[x] || x == a || x == b || x == c) continue;
    double score = dot(units.row(x), query) / qn;
    if (score > best_score) {
      best_score = score;
      best = x;
    }
  }
  return best;
}

}  // namespace

AnalogyResult evaluate_analogy(const EmbeddingTable& vectors,
                               const AnalogyDataset& dataset) {
  const Matrix& m = vectors.vectors;

  Matrix units(m.rows, m.cols);
  std::vector<char> valid(m.rows, 0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m.rows; ++i) {
    double rn = norm(m.row(i));
    if (rn > 0.0) {
      valid[i] = 1;
      auto out = units.row(i);
      auto in = m.row(i);
      for (int j = 0; j < m.cols; ++j) out[j] = in[j] / rn;
    }
  }

  std::vector<FlatQuestion> questions;
  AnalogyResult result;
  for (const auto& section : dataset.sections) {
    for (const auto& q : section.questions) {
      FlatQuestion f{vectors.lookup(q.a), vectors.lookup(q.b), vectors.lookup(q.c),
                     vectors.lookup(q.d), section.syntactic};
      if (f.a < 0 || f.b < 0 || f.c < 0 || f.d < 0) {
        ++result.skipped;
        continue;
      }
      questions.push_back(f);
    }
  }

  std::vector<char> correct(questions.size(), 0);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t qi = 0; qi < questions.size(); ++qi) {
    const auto& q = questions[qi];
    std::vector<double> query(m.cols);
    for (int j = 0; j < m.cols; ++j)
      query[j] = m.row(q.b)[j] - m.row(q.a)[j] + m.row(q.c)[j];
    int predicted = predict(units, valid, query, q.a, q.b, q.c);
    correct[qi] = predicted == q.d;
  }

  for (std::size_t qi = 0; qi < questions.size(); ++qi) {
    if (questions[qi].syntactic) {
      ++result.syntactic_total;
      result.syntactic_correct += correct[qi];
    } else {
      ++result.semantic_total;
      result.semantic_correct += correct[qi];
    }
  }
  result.answered = static_cast<int>(questions.size());
  int total = result.answered + result.skipped;
  result.semantic_accuracy =
      result.semantic_total
          ? static_cast<double>(result.semantic_correct) / result.semantic_total
          : 0.0;
  result.syntactic_accuracy =
      result.syntactic_total
          ? static_cast<double>(result.syntactic_correct) / result.syntactic_total
          : 0.0;
  result.total_accuracy =
      result.answered
          ? static_cast<double>(result.semantic_correct + result.syntactic_correct) /
                result.answered
          : 0.0;
  result.coverage =
      total ? static_cast<double>(result.answered) / static_cast<double>(total) : 0.0;
  return result;
}

std::vector<Neighbor> nearest_words_to_category(const Model& model, int category,
                                                int k) {
  if (category < 0 || category >= model.C.rows)
    throw ConfigError("category id out of range");
  return nearest_neighbors(model.C.row(category), model.W, k);
}

std::vector<Neighbor> nearest_categories_to_category(const Model& model, int category,
                                                     int k) {
  if (category < 0 || category >= model.C.rows)
    throw ConfigError("category id out of range");
  return nearest_neighbors(model.C.row(category), model.C, k, {category});
}

}  // namespace cewe
