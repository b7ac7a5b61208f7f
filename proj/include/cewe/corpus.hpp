#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cewe/errors.hpp"

namespace cewe {

// One corpus record as it appears on disk: category names plus the token
// sequence. Categories may contain spaces (they are tab-separated in the
// file) but never tabs or newlines.
struct RawDocument {
  std::vector<std::string> categories;
  std::vector<std::string> tokens;
};

// Streaming reader for the corpus format:
//   #CATEGORIES<TAB>name<TAB>name...
//   token token token ...
//   <blank line between records>
// Memory use is bounded by the largest single record.
class CorpusReader {
 public:
  explicit CorpusReader(const std::string& path);

  // Next record in file order, or nullopt at end of file.
  std::optional<RawDocument> next();

 private:
  std::ifstream in_;
  std::string path_;
  long line_ = 0;
  bool at_first_record_ = true;
};

// Canonical single-record form: one header line, one body line, no trailing
// whitespace. Parsing a serialized record yields the record back.
std::string serialize_record(const RawDocument& doc);

// Writes records in canonical form separated by single blank lines.
void write_corpus(const std::string& path, const std::vector<RawDocument>& docs);

// Word table with dense ids 0..V-1, ordered by descending corpus count and
// lexicographically within equal counts.
class Vocabulary {
 public:
  int lookup(const std::string& word) const {
    auto it = ids_.find(word);
    return it == ids_.end() ? -1 : it->second;
  }
  const std::string& word(int id) const { return words_[id]; }
  int64_t count(int id) const { return counts_[id]; }
  double idf(int id) const { return idf_[id]; }
  int size() const { return static_cast<int>(words_.size()); }
  int64_t total_tokens() const { return total_tokens_; }
  double frequency(int id) const {
    return static_cast<double>(counts_[id]) / static_cast<double>(total_tokens_);
  }

  void add(std::string word, int64_t count);
  void set_idf(std::vector<double> idf) { idf_ = std::move(idf); }
  void set_total_tokens(int64_t n) { total_tokens_ = n; }

 private:
  std::vector<std::string> words_;
  std::vector<int64_t> counts_;
  std::vector<double> idf_;
  std::unordered_map<std::string, int> ids_;
  int64_t total_tokens_ = 0;
};

// Category table with dense ids and per-category document frequencies.
class CategoryVocabulary {
 public:
  int lookup(const std::string& name) const {
    auto it = ids_.find(name);
    return it == ids_.end() ? -1 : it->second;
  }
  const std::string& name(int id) const { return names_[id]; }
  int64_t doc_freq(int id) const { return doc_freq_[id]; }
  int size() const { return static_cast<int>(names_.size()); }

  void add(std::string name, int64_t doc_freq);

 private:
  std::vector<std::string> names_;
  std::vector<int64_t> doc_freq_;
  std::unordered_map<std::string, int> ids_;
};

// Tokenized record: in-vocabulary word ids in document order plus the sorted,
// deduplicated set of known category ids.
struct Document {
  std::vector<int> word_ids;
  std::vector<int> category_ids;
};

struct VocabularyOptions {
  int64_t min_count = 20;
  std::unordered_set<std::string> stopwords;
  int max_categories = 100000;
  int64_t min_category_docs = 2;
  // When set, words outside this set are excluded like stopwords. Used to
  // restrict an evaluation-corpus vocabulary to tokens that have embeddings.
  std::optional<std::unordered_set<std::string>> restrict_to;
};

// Two passes over the corpus: counts first, then document frequencies for the
// IDF table, which is computed over documents that still hold at least one
// in-vocabulary token after filtering.
std::pair<Vocabulary, CategoryVocabulary> build_vocabularies(
    const std::string& corpus_path, const VocabularyOptions& options);

// Drops out-of-vocabulary tokens and unknown categories. May yield an empty
// document; callers skip those.
Document tokenize_document(const RawDocument& raw, const Vocabulary& vocab,
                           const CategoryVocabulary& categories);

// Distinct words of the document whose tf-idf (raw in-document count times
// idf) strictly exceeds the document's mean tf-idf over distinct words.
// Returned in ascending id order; empty when no word exceeds the mean.
std::vector<int> select_global_words(const Document& doc, const Vocabulary& vocab);

// One token per line.
std::unordered_set<std::string> load_stopwords(const std::string& path);

}  // namespace cewe
