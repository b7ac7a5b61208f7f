#include "support/fixtures.hpp"

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cewe::test {

TempDir::TempDir() {
  static std::atomic<uint64_t> counter{0};
  auto base = std::filesystem::temp_directory_path();
  dir_ = base / ("cewe_test_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)));
  std::filesystem::create_directories(dir_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(dir_, ec);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool same_file_bytes(const std::string& a, const std::string& b) {
  return read_file(a) == read_file(b);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string topic_word(int topic, int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "t%dw%02d", topic, index);
  return buf;
}

std::string shared_word(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fw%02d", index);
  return buf;
}

std::vector<RawDocument> two_topic_corpus(const TwoTopicParams& params) {
  Rng rng(params.seed);
  std::vector<RawDocument> docs;
  docs.reserve(params.docs);
  for (int d = 0; d < params.docs; ++d) {
    int topic = d % 2;
    RawDocument doc;
    if (params.with_categories)
      doc.categories.push_back(topic == 0 ? "topicA" : "topicB");
    for (int t = 0; t < params.tokens_per_doc; ++t) {
      if (rng.real() < params.topical_fraction)
        doc.tokens.push_back(
            topic_word(topic, static_cast<int>(rng.index(params.topic_words))));
      else
        doc.tokens.push_back(
            shared_word(static_cast<int>(rng.index(params.shared_words))));
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<RawDocument> zipf_corpus(int docs, int vocab_words, int tokens_per_doc,
                                     int category_pool, uint64_t seed) {
  Rng rng(seed);
  // Precomputed Zipf cdf over word ranks.
  std::vector<double> cdf(vocab_words);
  double cum = 0.0;
  for (int i = 0; i < vocab_words; ++i) {
    cum += 1.0 / static_cast<double>(i + 1);
    cdf[i] = cum;
  }
  for (auto& c : cdf) c /= cum;

  auto draw_word = [&]() {
    double u = rng.real();
    int lo = 0, hi = vocab_words - 1;
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      if (cdf[mid] > u)
        hi = mid;
      else
        lo = mid + 1;
    }
    char buf[16];
    std::snprintf(buf, sizeof(buf), "w%03d", lo);
    return std::string(buf);
  };

  std::vector<RawDocument> out;
  out.reserve(docs);
  for (int d = 0; d < docs; ++d) {
    RawDocument doc;
    int n_cats = static_cast<int>(rng.index(3));
    for (int c = 0; c < n_cats; ++c)
      doc.categories.push_back("cat" +
                               std::to_string(rng.index(category_pool)));
    for (int t = 0; t < tokens_per_doc; ++t) doc.tokens.push_back(draw_word());
    out.push_back(std::move(doc));
  }
  return out;
}

std::vector<RawDocument> strip_categories(std::vector<RawDocument> docs) {
  for (auto& d : docs) d.categories.clear();
  return docs;
}

Matrix random_matrix(int rows, int cols, uint64_t seed, double scale) {
  Matrix m(rows, cols);
  Rng rng(seed);
  for (auto& v : m.data) v = (rng.real() - 0.5) * 2.0 * scale;
  return m;
}

}  // namespace cewe::test
