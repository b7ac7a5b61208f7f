#include "cewe/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace cewe {

namespace {

constexpr const char* kHeaderTag = "#CATEGORIES";

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    std::size_t next = line.find(' ', pos);
    if (next == std::string::npos) next = line.size();
    if (next > pos) out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

}  // namespace

CorpusReader::CorpusReader(const std::string& path) : in_(path), path_(path) {
  if (!in_) throw DataError("cannot open corpus file: " + path);
}

std::optional<RawDocument> CorpusReader::next() {
  std::string line;
  // Header line, or clean end of file. A blank separator line has already
  // been consumed by the previous call, so a blank line here is malformed.
  if (!std::getline(in_, line)) return std::nullopt;
  ++line_;
  if (!line.empty() && line.back() == '\r') line.pop_back();

  RawDocument doc;
  if (line.compare(0, std::string(kHeaderTag).size(), kHeaderTag) != 0 ||
      (line.size() > std::string(kHeaderTag).size() &&
       line[std::string(kHeaderTag).size()] != '\t')) {
    throw ParseError("malformed record header in " + path_, line_);
  }
  std::size_t pos = std::string(kHeaderTag).size();
  while (pos < line.size()) {
    std::size_t next = line.find('\t', pos + 1);
    if (next == std::string::npos) next = line.size();
    std::string cat = line.substr(pos + 1, next - pos - 1);
    if (cat.empty()) throw ParseError("empty category field in " + path_, line_);
    doc.categories.push_back(std::move(cat));
    pos = next;
  }

  // One or more body lines, up to a blank separator or end of file.
  bool saw_body = false;
  while (std::getline(in_, line)) {
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) break;
    auto toks = split_tokens(line);
    doc.tokens.insert(doc.tokens.end(), toks.begin(), toks.end());
    saw_body = true;
  }
  if (!saw_body) throw ParseError("record without body in " + path_, line_);
  return doc;
}

std::string serialize_record(const RawDocument& doc) {
  std::string out = kHeaderTag;
  for (const auto& c : doc.categories) {
    out += '\t';
    out += c;
  }
  out += '\n';
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    if (i) out += ' ';
    out += doc.tokens[i];
  }
  out += '\n';
  return out;
}

void write_corpus(const std::string& path, const std::vector<RawDocument>& docs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write corpus file: " + path);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (i) out << '\n';
    out << serialize_record(docs[i]);
  }
}

void Vocabulary::add(std::string word, int64_t count) {
  ids_.emplace(word, static_cast<int>(words_.size()));
  words_.push_back(std::move(word));
  counts_.push_back(count);
  idf_.push_back(0.0);
}

void CategoryVocabulary::add(std::string name, int64_t doc_freq) {
  ids_.emplace(name, static_cast<int>(names_.size()));
  names_.push_back(std::move(name));
  doc_freq_.push_back(doc_freq);
}

std::pair<Vocabulary, CategoryVocabulary> build_vocabularies(
    const std::string& corpus_path, const VocabularyOptions& options) {
  if (options.min_count < 1) throw ConfigError("min_count must be >= 1");
  if (options.max_categories < 1) throw ConfigError("max_categories must be >= 1");

  // Pass 1: word occurrence counts and category document frequencies.
  std::map<std::string, int64_t> word_counts;
  std::map<std::string, int64_t> category_docs;
  {
    CorpusReader reader(corpus_path);
    while (auto doc = reader.next()) {
      for (const auto& t : doc->tokens) ++word_counts[t];
      std::set<std::string> uniq(doc->categories.begin(), doc->categories.end());
      for (const auto& c : uniq) ++category_docs[c];
    }
  }

  auto keep_word = [&](const std::string& w, int64_t n) {
    if (n < options.min_count) return false;
    if (options.stopwords.count(w)) return false;
    if (options.restrict_to && !options.restrict_to->count(w)) return false;
    return true;
  };

  std::vector<std::pair<std::string, int64_t>> kept;
  for (const auto& [w, n] : word_counts)
    if (keep_word(w, n)) kept.emplace_back(w, n);
  if (kept.empty())
    throw ConfigError("vocabulary is empty after filtering: " + corpus_path);
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary vocab;
  int64_t total_tokens = 0;
  for (auto& [w, n] : kept) {
    total_tokens += n;
    vocab.add(std::move(w), n);
  }
  vocab.set_total_tokens(total_tokens);

  std::vector<std::pair<std::string, int64_t>> cats;
  for (const auto& [c, n] : category_docs)
    if (n >= options.min_category_docs) cats.emplace_back(c, n);
  std::sort(cats.begin(), cats.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (static_cast<int>(cats.size()) > options.max_categories)
    cats.resize(options.max_categories);

  CategoryVocabulary catvocab;
  for (auto& [c, n] : cats) catvocab.add(std::move(c), n);

  // Pass 2: document frequencies over documents that survive word filtering.
  std::vector<int64_t> df(vocab.size(), 0);
  int64_t surviving_docs = 0;
  {
    CorpusReader reader(corpus_path);
    while (auto doc = reader.next()) {
      std::set<int> uniq;
      for (const auto& t : doc->tokens) {
        int id = vocab.lookup(t);
        if (id >= 0) uniq.insert(id);
      }
      if (uniq.empty()) continue;
      ++surviving_docs;
      for (int id : uniq) ++df[id];
    }
  }
  std::vector<double> idf(vocab.size(), 0.0);
  for (int i = 0; i < vocab.size(); ++i) {
    idf[i] = std::log(static_cast<double>(surviving_docs) /
                      static_cast<double>(df[i]));
  }
  vocab.set_idf(std::move(idf));

  return {std::move(vocab), std::move(catvocab)};
}

Document tokenize_document(const RawDocument& raw, const Vocabulary& vocab,
                           const CategoryVocabulary& categories) {
  Document doc;
  doc.word_ids.reserve(raw.tokens.size());
  for (const auto& t : raw.tokens) {
    int id = vocab.lookup(t);
    if (id >= 0) doc.word_ids.push_back(id);
  }
  std::set<int> cats;
  for (const auto& c : raw.categories) {
    int id = categories.lookup(c);
    if (id >= 0) cats.insert(id);
  }
  doc.category_ids.assign(cats.begin(), cats.end());
  return doc;
}

std::vector<int> select_global_words(const Document& doc, const Vocabulary& vocab) {
  std::map<int, int64_t> in_doc;
  for (int id : doc.word_ids) ++in_doc[id];
  if (in_doc.empty()) return {};

  double sum = 0.0;
  for (const auto& [id, n] : in_doc) sum += static_cast<double>(n) * vocab.idf(id);
  double avgt = sum / static_cast<double>(in_doc.size());

  std::vector<int> selected;
  for (const auto& [id, n] : in_doc) {
    if (static_cast<double>(n) * vocab.idf(id) > avgt) selected.push_back(id);
  }
  return selected;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stop-word file: " + path);
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.insert(line);
  }
  return words;
}

}  // namespace cewe
