#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cewe/corpus.hpp"
#include "cewe/model.hpp"
#include "cewe/rng.hpp"

namespace cewe::test {

// Unique scratch directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string path(const std::string& name) const {
    return (dir_ / name).string();
  }

 private:
  std::filesystem::path dir_;
};

std::string read_file(const std::string& path);
bool same_file_bytes(const std::string& a, const std::string& b);
void write_file(const std::string& path, const std::string& content);

struct TwoTopicParams {
  int docs = 400;
  int topic_words = 50;    // per topic, disjoint
  int shared_words = 20;   // function words common to both topics
  int tokens_per_doc = 60;
  double topical_fraction = 0.75;
  uint64_t seed = 7;
  bool with_categories = true;
};

// Documents alternate between two topics with disjoint content vocabularies;
// each carries its topic name as the single category.
std::vector<RawDocument> two_topic_corpus(const TwoTopicParams& params);

std::string topic_word(int topic, int index);
std::string shared_word(int index);

// Zipf-ish general corpus over `vocab_words` distinct words with a small
// category pool; used by the trainer fixtures.
std::vector<RawDocument> zipf_corpus(int docs, int vocab_words, int tokens_per_doc,
                                     int category_pool, uint64_t seed);

std::vector<RawDocument> strip_categories(std::vector<RawDocument> docs);

Matrix random_matrix(int rows, int cols, uint64_t seed, double scale = 1.0);

}  // namespace cewe::test
