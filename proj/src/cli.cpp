#include "cewe/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "cewe/corpus.hpp"
#include "cewe/docrep.hpp"
#include "cewe/errors.hpp"
#include "cewe/eval.hpp"
#include "cewe/model.hpp"
#include "cewe/rng.hpp"
#include "cewe/trainer.hpp"

namespace cewe::cli {

namespace {

EmbeddingFormat format_for(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0
             ? EmbeddingFormat::kBinary
             : EmbeddingFormat::kText;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string v) {
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                        (v.front() == '\'' && v.back() == '\'')))
    return v.substr(1, v.size() - 2);
  return v;
}

std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file: " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string body = trim(line);
    if (body.empty() || body[0] == '#' || body[0] == ';') continue;
    std::size_t eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        " is not key=value: " + body);
    std::string key = trim(body.substr(0, eq));
    std::string value = unquote(trim(body.substr(eq + 1)));
    for (const auto& [k, v] : entries)
      if (k == key)
        throw ConfigError("conflicting duplicate key '" + key + "' in " + path);
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

// Resolution order is flags > config file > defaults: file entries are turned
// into --key=value tokens for exactly the options the command line left
// unset. Unknown keys are usage errors.
void inject_config(CLI::App& app, std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
  }
  if (path.empty()) return;

  std::string name;
  for (const auto& a : args)
    if (!a.empty() && a[0] != '-') {
      name = a;
      break;
    }
  CLI::App* sub = name.empty() ? nullptr : app.get_subcommand_no_throw(name);
  if (sub == nullptr) return;  // the regular parse reports the usage problem

  std::set<std::string> given;
  for (const auto& a : args) {
    if (a.rfind("--", 0) != 0) continue;
    std::size_t eq = a.find('=');
    given.insert(eq == std::string::npos ? a.substr(2) : a.substr(2, eq - 2));
  }

  for (const auto& [key, value] : read_config_file(path)) {
    if (key == "config" || key == "help") continue;
    if (sub->get_option_no_throw("--" + key) == nullptr)
      throw ConfigError("unknown key '" + key + "' in config file " + path);
    if (given.count(key)) continue;
    if (value.empty()) continue;  // unset optional, as echoed for absent paths
    args.push_back("--" + key + "=" + value);
  }
}

std::string underscored(std::string s) {
  std::replace(s.begin(), s.end(), ' ', '_');
  return s;
}

// Every resolved option except the config path itself, so the echo can be
// fed straight back through --config.
std::string resolved_config(CLI::App* sub) {
  std::istringstream lines(sub->config_to_str(true, false));
  std::string line, out;
  while (std::getline(lines, line)) {
    if (line.rfind("config=", 0) == 0) continue;
    out += line;
    out += '\n';
  }
  return out;
}

void write_config_echo(CLI::App* sub, const std::string& path) {
  std::fputs(resolved_config(sub).c_str(), stderr);
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw DataError("cannot write config echo: " + path);
  out << resolved_config(sub);
}

struct VocabFlags {
  std::string stopwords_path;
  int64_t min_count = 20;
  int max_categories = 100000;
  int64_t min_category_docs = 2;

  void attach(CLI::App* sub) {
    sub->add_option("--min-count", min_count, "Discard words seen fewer times")
        ->capture_default_str();
    sub->add_option("--stopwords", stopwords_path, "Stop-word file, one token per line");
    sub->add_option("--max-categories", max_categories,
                    "Keep only the most frequent categories")
        ->capture_default_str();
    sub->add_option("--min-category-docs", min_category_docs,
                    "Discard categories seen in fewer documents")
        ->capture_default_str();
  }

  VocabularyOptions options() const {
    VocabularyOptions opt;
    opt.min_count = min_count;
    opt.max_categories = max_categories;
    opt.min_category_docs = min_category_docs;
    if (!stopwords_path.empty()) opt.stopwords = load_stopwords(stopwords_path);
    return opt;
  }
};

struct TrainArgs {
  std::string corpus, out, model = "cewe", lambda_cat = "cw", echo_config;
  std::string config;
  VocabFlags vocab;
  TrainConfig cfg;
  bool binary = false;
  bool save_wout = false;
};

void add_train_command(CLI::App& app, std::shared_ptr<TrainArgs> a) {
  CLI::App* sub = app.add_subcommand("train", "Train cbow/cewe/gcewe embeddings");
  sub->add_option("--config", a->config, "Config file with key=value lines");

  sub->add_option("--corpus", a->corpus, "Training corpus")->required();
  sub->add_option("--out", a->out, "Output stem for model files")->required();
  sub->add_option("--model", a->model, "cbow | cewe | gcewe")->capture_default_str();
  sub->add_option("--dim", a->cfg.dim, "Embedding dimension")->capture_default_str();
  sub->add_option("--window", a->cfg.window, "Context words on each side")
      ->capture_default_str();
  sub->add_option("--negatives", a->cfg.negatives_words, "Negative words per update")
      ->capture_default_str();
  sub->add_option("--cat-negatives", a->cfg.negatives_categories,
                  "Negative categories per global update")
      ->capture_default_str();
  sub->add_option("--alpha", a->cfg.alpha, "Local-pass learning rate")
      ->capture_default_str();
  sub->add_option("--beta", a->cfg.beta, "Global-pass learning rate")
      ->capture_default_str();
  sub->add_option("--lambda-cat", a->lambda_cat,
                  "Category weight: 'cw' for 1/context-size, or a number")
      ->capture_default_str();
  sub->add_option("--lambda-rank", a->cfg.lambda_rank,
                  "Geometric rank distribution parameter")
      ->capture_default_str();
  sub->add_option("--sample", a->cfg.subsample_t,
                  "Frequent-word subsampling threshold, 0 disables")
      ->capture_default_str();
  sub->add_option("--epochs", a->cfg.epochs, "Full passes over the corpus")
      ->capture_default_str();
  sub->add_option("--workers", a->cfg.workers, "Parallel training workers")
      ->envname("CEWE_WORKERS")
      ->capture_default_str();
  sub->add_option("--refresh-interval", a->cfg.refresh_interval,
                  "Global steps between rank-index rebuilds")
      ->capture_default_str();
  sub->add_option("--seed", a->cfg.seed, "Random seed")->capture_default_str();
  sub->add_option("--lr-floor-ratio", a->cfg.lr_floor_ratio,
                  "Learning-rate floor as a fraction of the initial rate")
      ->capture_default_str();
  sub->add_option("--unigram-power", a->cfg.unigram_power,
                  "Unigram smoothing exponent for negative words")
      ->capture_default_str();
  sub->add_option("--unigram-table-size", a->cfg.unigram_table_size,
                  "Entries in the negative-word table")
      ->capture_default_str();
  sub->add_flag("--binary", a->binary, "Write binary embedding files");
  sub->add_flag("--save-wout", a->save_wout, "Also write the output word vectors");
  sub->add_flag("--verbose", a->cfg.verbose, "Progress lines on stderr");
  sub->add_option("--echo-config", a->echo_config,
                  "Where to write the resolved configuration (default <out>.config)");
  a->vocab.attach(sub);

  sub->callback([a, sub]() {
    a->cfg.model = model_type_from_string(a->model);
    if (a->lambda_cat == "cw") {
      a->cfg.lambda_mode = LambdaMode::kReciprocalContext;
    } else {
      a->cfg.lambda_mode = LambdaMode::kFixed;
      try {
        std::size_t used = 0;
        a->cfg.lambda_value = std::stod(a->lambda_cat, &used);
        if (used != a->lambda_cat.size()) throw std::invalid_argument(a->lambda_cat);
      } catch (const std::exception&) {
        throw ConfigError("--lambda-cat must be 'cw' or a number");
      }
    }

    auto [vocab, cats] = build_vocabularies(a->corpus, a->vocab.options());
    Model model = init_model({a->cfg.dim, a->cfg.seed}, vocab.size(), cats.size());
    RunReport report = train(model, a->corpus, vocab, cats, a->cfg);

    EmbeddingFormat format = a->binary ? EmbeddingFormat::kBinary : EmbeddingFormat::kText;
    save_embeddings(model, vocab, cats, a->out, format);
    if (a->save_wout) {
      std::vector<std::string> tokens(vocab.size());
      for (int i = 0; i < vocab.size(); ++i) tokens[i] = vocab.word(i);
      save_embedding_table(table_from_rows(std::move(tokens), model.Wout),
                           a->out + ".wout." + (a->binary ? "bin" : "txt"), format);
    }
    {
      std::ofstream rep(a->out + ".report.txt");
      if (!rep) throw DataError("cannot write run report");
      rep << report.to_text();
    }
    write_config_echo(sub, a->echo_config.empty() ? a->out + ".config" : a->echo_config);
    std::cout << report.to_text();
  });
}

struct BuildVocabArgs {
  std::string corpus, out, echo_config;
  std::string config;
  VocabFlags vocab;
};

void add_build_vocab_command(CLI::App& app, std::shared_ptr<BuildVocabArgs> a) {
  CLI::App* sub = app.add_subcommand("build-vocab", "Build and export vocabularies");
  sub->add_option("--config", a->config, "Config file with key=value lines");
  sub->add_option("--corpus", a->corpus, "Corpus file")->required();
  sub->add_option("--out", a->out, "Output stem")->required();
  sub->add_option("--echo-config", a->echo_config, "Where to write the resolved configuration");
  a->vocab.attach(sub);

  sub->callback([a, sub]() {
    auto [vocab, cats] = build_vocabularies(a->corpus, a->vocab.options());
    {
      std::ofstream out(a->out + ".vocab.tsv");
      if (!out) throw DataError("cannot write vocabulary file");
      char buf[32];
      for (int i = 0; i < vocab.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.6e", vocab.idf(i));
        out << vocab.word(i) << '\t' << vocab.count(i) << '\t' << buf << '\n';
      }
    }
    {
      std::ofstream out(a->out + ".cats.tsv");
      if (!out) throw DataError("cannot write category file");
      for (int i = 0; i < cats.size(); ++i)
        out << cats.name(i) << '\t' << cats.doc_freq(i) << '\n';
    }
    write_config_echo(sub, a->echo_config);
    std::cout << "words\t" << vocab.size() << "\ncategories\t" << cats.size()
              << "\ntokens\t" << vocab.total_tokens() << '\n';
  });
}

struct EvalSimArgs {
  std::string vectors, wout, dataset, mode = "w", echo_config;
  std::string config;
  bool lowercase = true;
};

EmbeddingTable load_vectors_for_mode(const std::string& vectors_path,
                                     const std::string& mode,
                                     const std::string& wout_path) {
  EmbeddingTable table = load_embedding_table(vectors_path, format_for(vectors_path));
  if (mode == "w") return table;
  if (mode != "w_plus_wout") throw ConfigError("--mode must be w or w_plus_wout");
  if (wout_path.empty()) throw ConfigError("--mode w_plus_wout needs --wout");
  EmbeddingTable wout = load_embedding_table(wout_path, format_for(wout_path));
  if (wout.tokens != table.tokens || wout.vectors.cols != table.vectors.cols)
    throw DataError("--wout file does not match the word vectors");
  for (std::size_t i = 0; i < table.vectors.data.size(); ++i)
    table.vectors.data[i] += wout.vectors.data[i];
  return table;
}

void add_eval_sim_command(CLI::App& app, std::shared_ptr<EvalSimArgs> a) {
  CLI::App* sub = app.add_subcommand("eval-sim", "Word-similarity evaluation");
  sub->add_option("--config", a->config, "Config file with key=value lines");
  sub->add_option("--vectors", a->vectors, "Word vectors file")->required();
  sub->add_option("--dataset", a->dataset, "Similarity pairs file")->required();
  sub->add_option("--mode", a->mode, "w | w_plus_wout")->capture_default_str();
  sub->add_option("--wout", a->wout, "Output word vectors, for w_plus_wout");
  sub->add_flag("--lowercase,!--no-lowercase", a->lowercase,
                "Lowercase dataset words before lookup");
  sub->add_option("--echo-config", a->echo_config, "Where to write the resolved configuration");

  sub->callback([a, sub]() {
    EmbeddingTable table = load_vectors_for_mode(a->vectors, a->mode, a->wout);
    SimilarityDataset ds = load_similarity_dataset(a->dataset, a->lowercase);
    SimilarityResult r = evaluate_similarity(table, ds);
    double coverage =
        ds.pairs.empty() ? 0.0
                         : static_cast<double>(r.pairs_used) /
                               static_cast<double>(r.pairs_used + r.pairs_skipped);
    std::printf("spearman_rho\t%.6f\t%.6f\n", r.rho, coverage);
    std::printf("pairs_used\t%d\t%.6f\n", r.pairs_used, coverage);
    std::printf("pairs_skipped\t%d\t%.6f\n", r.pairs_skipped, coverage);
    write_config_echo(sub, a->echo_config);
  });
}

struct EvalAnalogyArgs {
  std::string vectors, dataset, echo_config;
  std::string config;
  bool lowercase = true;
};

void add_eval_analogy_command(CLI::App& app, std::shared_ptr<EvalAnalogyArgs> a) {
  CLI::App* sub = app.add_subcommand("eval-analogy", "Word-analogy evaluation");
  sub->add_option("--config", a->config, "Config file with key=value lines");
  sub->add_option("--vectors", a->vectors, "Word vectors file")->required();
  sub->add_option("--dataset", a->dataset, "Analogy questions file")->required();
  sub->add_flag("--lowercase,!--no-lowercase", a->lowercase,
                "Lowercase dataset words before lookup");
  sub->add_option("--echo-config", a->echo_config, "Where to write the resolved configuration");

  sub->callback([a, sub]() {
    EmbeddingTable table = load_embedding_table(a->vectors, format_for(a->vectors));
    AnalogyDataset ds = load_analogy_dataset(a->dataset, a->lowercase);
    AnalogyResult r = evaluate_analogy(table, ds);
    std::printf("semantic_accuracy\t%.6f\t%.6f\n", r.semantic_accuracy, r.coverage);
    std::printf("syntactic_accuracy\t%.6f\t%.6f\n", r.syntactic_accuracy, r.coverage);
    std::printf("total_accuracy\t%.6f\t%.6f\n", r.total_accuracy, r.coverage);
    write_config_echo(sub, a->echo_config);
  });
}

// Restricts the corpus vocabulary to tokens that actually have embeddings,
// builds tf-idf document features, and returns them with labels.
struct FeatureSet {
  std::vector<std::vector<double>> features;
  std::vector<int> labels;
  std::vector<std::string> class_names;
  int dropped = 0;
};

FeatureSet extract_features(const std::string& corpus_path, const EmbeddingTable& table,
                            const VocabFlags& flags) {
  VocabularyOptions opt = flags.options();
  opt.restrict_to.emplace(table.tokens.begin(), table.tokens.end());
  auto [vocab, cats] = build_vocabularies(corpus_path, opt);

  Model model;
  model.dim = table.vectors.cols;
  model.W = Matrix(vocab.size(), model.dim);
  for (int i = 0; i < vocab.size(); ++i) {
    int row = table.lookup(vocab.word(i));
    std::copy_n(table.vectors.row(row).begin(), model.dim, model.W.row(i).begin());
  }

  LabeledDocumentSet docs = load_labeled_corpus(corpus_path, vocab, cats);
  FeatureSet out;
  out.class_names = docs.class_names;
  out.dropped = docs.dropped;
  for (std::size_t i = 0; i < docs.documents.size(); ++i) {
    auto feature = document_embedding(model, docs.documents[i], vocab);
    if (!feature) {
      ++out.dropped;
      continue;
    }
    out.features.push_back(std::move(*feature));
    out.labels.push_back(docs.labels[i]);
  }
  return out;
}

struct EvalClassifyArgs {
  std::string corpus, test, vectors, echo_config;
  std::string config;
  VocabFlags vocab;
  double holdout = 0.2;
  int epochs = 100;
  double lr = 0.1;
  double l2 = 1e-4;
  uint64_t seed = 1;
};

void add_eval_classify_command(CLI::App& app, std::shared_ptr<EvalClassifyArgs> a) {
  CLI::App* sub = app.add_subcommand(
      "eval-classify", "Document classification with embedding features");
  sub->add_option("--config", a->config, "Config file with key=value lines");
  a->vocab.min_count = 1;
  sub->add_option("--corpus", a->corpus, "Labeled corpus (first category = class)")
      ->required();
  sub->add_option("--test", a->test, "Held-out labeled corpus; otherwise --holdout splits");
  sub->add_option("--vectors", a->vectors, "Word vectors file")->required();
  sub->add_option("--holdout", a->holdout, "Held-out fraction when --test is absent")
      ->capture_default_str();
  sub->add_option("--epochs", a->epochs, "Classifier training epochs")
      ->capture_default_str();
  sub->add_option("--lr", a->lr, "Classifier learning rate")->capture_default_str();
  sub->add_option("--l2", a->l2, "Classifier L2 penalty")->capture_default_str();
  sub->add_option("--seed", a->seed, "Random seed")->capture_default_str();
  sub->add_option("--echo-config", a->echo_config, "Where to write the resolved configuration");
  a->vocab.attach(sub);

  sub->callback([a, sub]() {
    EmbeddingTable table = load_embedding_table(a->vectors, format_for(a->vectors));

    std::vector<std::vector<double>> train_x, test_x;
    std::vector<int> train_y, test_y;
    int dropped = 0;
    if (!a->test.empty()) {
      FeatureSet train_set = extract_features(a->corpus, table, a->vocab);
      FeatureSet test_set = extract_features(a->test, table, a->vocab);
      train_x = std::move(train_set.features);
      train_y = std::move(train_set.labels);
      dropped = train_set.dropped + test_set.dropped;
      // Map test labels through the training class table.
      for (std::size_t i = 0; i < test_set.features.size(); ++i) {
        const std::string& name = test_set.class_names[test_set.labels[i]];
        auto it = std::find(train_set.class_names.begin(), train_set.class_names.end(),
                            name);
        if (it == train_set.class_names.end()) {
          ++dropped;
          continue;
        }
        test_x.push_back(std::move(test_set.features[i]));
        test_y.push_back(static_cast<int>(it - train_set.class_names.begin()));
      }
    } else {
      FeatureSet all = extract_features(a->corpus, table, a->vocab);
      dropped = all.dropped;
      if (a->holdout <= 0.0 || a->holdout >= 1.0)
        throw ConfigError("--holdout must be in (0, 1)");
      Rng rng(a->seed ^ 0x9e3779b97f4a7c15ULL);
      for (std::size_t i = 0; i < all.features.size(); ++i) {
        bool held_out = rng.real() < a->holdout;
        (held_out ? test_x : train_x).push_back(std::move(all.features[i]));
        (held_out ? test_y : train_y).push_back(all.labels[i]);
      }
    }
    if (test_x.empty()) throw DataError("no held-out documents to evaluate");

    LinearClassifier clf =
        train_classifier(train_x, train_y, a->epochs, a->lr, a->l2, a->seed);
    int correct = 0;
    for (std::size_t i = 0; i < test_x.size(); ++i)
      correct += classify(clf, test_x[i]) == test_y[i];
    double accuracy = static_cast<double>(correct) / static_cast<double>(test_x.size());
    std::printf("accuracy\t%.6f\t%zu\n", accuracy, test_x.size());
    std::printf("train_docs\t%zu\t-\n", train_x.size());
    std::printf("test_docs\t%zu\t-\n", test_x.size());
    std::printf("dropped_docs\t%d\t-\n", dropped);
    write_config_echo(sub, a->echo_config);
  });
}

struct ExportDocvecsArgs {
  std::string corpus, vectors, out, echo_config;
  std::string config;
  VocabFlags vocab;
};

void add_export_docvecs_command(CLI::App& app, std::shared_ptr<ExportDocvecsArgs> a) {
  CLI::App* sub =
      app.add_subcommand("export-docvecs", "Write per-document embedding features");
  sub->add_option("--config", a->config, "Config file with key=value lines");
  a->vocab.min_count = 1;
  sub->add_option("--corpus", a->corpus, "Labeled corpus")->required();
  sub->add_option("--vectors", a->vectors, "Word vectors file")->required();
  sub->add_option("--out", a->out, "Output TSV path")->required();
  sub->add_option("--echo-config", a->echo_config, "Where to write the resolved configuration");
  a->vocab.attach(sub);

  sub->callback([a, sub]() {
    EmbeddingTable table = load_embedding_table(a->vectors, format_for(a->vectors));
    FeatureSet set = extract_features(a->corpus, table, a->vocab);
    std::ofstream out(a->out);
    if (!out) throw DataError("cannot write feature file: " + a->out);
    char buf[32];
    for (std::size_t i = 0; i < set.features.size(); ++i) {
      out << set.class_names[set.labels[i]];
      for (double v : set.features[i]) {
        std::snprintf(buf, sizeof(buf), "\t%.6e", v);
        out << buf;
      }
      out << '\n';
    }
    if (set.dropped)
      std::fprintf(stderr, "dropped %d documents without labels or features\n",
                   set.dropped);
    write_config_echo(sub, a->echo_config);
  });
}

struct NnArgs {
  std::string vectors, categories, word, category, echo_config;
  std::string config;
  int k = 10;
};

void add_nn_command(CLI::App& app, std::shared_ptr<NnArgs> a) {
  CLI::App* sub = app.add_subcommand("nn", "Nearest-neighbor queries");
  sub->add_option("--config", a->config, "Config file with key=value lines");
  sub->add_option("--vectors", a->vectors, "Word vectors file");
  sub->add_option("--categories", a->categories, "Category vectors file");
  sub->add_option("--word", a->word, "Query word");
  sub->add_option("--category", a->category, "Query category name");
  sub->add_option("-k,--k", a->k, "Neighbors to return")->capture_default_str();
  sub->add_option("--echo-config", a->echo_config, "Where to write the resolved configuration");

  sub->callback([a, sub]() {
    if (a->word.empty() == a->category.empty())
      throw ConfigError("give exactly one of --word or --category");

    auto print = [&](const char* kind, const std::vector<Neighbor>& neighbors,
                     const std::vector<std::string>& tokens) {
      for (std::size_t i = 0; i < neighbors.size(); ++i)
        std::printf("%s\t%zu\t%s\t%.6f\n", kind, i + 1,
                    tokens[neighbors[i].id].c_str(), neighbors[i].similarity);
    };

    if (!a->word.empty()) {
      if (a->vectors.empty()) throw ConfigError("--word needs --vectors");
      EmbeddingTable words = load_embedding_table(a->vectors, format_for(a->vectors));
      int id = words.lookup(a->word);
      if (id < 0) throw DataError("word not in vocabulary: " + a->word);
      print("word", nearest_neighbors(words.vectors.row(id), words.vectors, a->k, {id}),
            words.tokens);
      write_config_echo(sub, a->echo_config);
      return;
    }

    if (a->categories.empty()) throw ConfigError("--category needs --categories");
    EmbeddingTable cats = load_embedding_table(a->categories, format_for(a->categories));
    int id = cats.lookup(underscored(a->category));
    if (id < 0) throw DataError("unknown category: " + a->category);
    print("category",
          nearest_neighbors(cats.vectors.row(id), cats.vectors, a->k, {id}),
          cats.tokens);
    if (!a->vectors.empty()) {
      EmbeddingTable words = load_embedding_table(a->vectors, format_for(a->vectors));
      if (words.vectors.cols != cats.vectors.cols)
        throw DataError("word and category vectors have different dimensions");
      print("word", nearest_neighbors(cats.vectors.row(id), words.vectors, a->k),
            words.tokens);
    }
    write_config_echo(sub, a->echo_config);
  });
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Category-enhanced word embeddings: training and evaluation"};
  app.require_subcommand(1);

  auto train_args = std::make_shared<TrainArgs>();
  auto vocab_args = std::make_shared<BuildVocabArgs>();
  auto sim_args = std::make_shared<EvalSimArgs>();
  auto analogy_args = std::make_shared<EvalAnalogyArgs>();
  auto classify_args = std::make_shared<EvalClassifyArgs>();
  auto docvec_args = std::make_shared<ExportDocvecsArgs>();
  auto nn_args = std::make_shared<NnArgs>();

  add_train_command(app, train_args);
  add_build_vocab_command(app, vocab_args);
  add_eval_sim_command(app, sim_args);
  add_eval_analogy_command(app, analogy_args);
  add_eval_classify_command(app, classify_args);
  add_export_docvecs_command(app, docvec_args);
  add_nn_command(app, nn_args);

  try {
    std::vector<std::string> resolved = args;
    inject_config(app, resolved);
    std::vector<const char*> argv;
    argv.push_back("cewe");
    for (const auto& s : resolved) argv.push_back(s.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints usage, exit 0
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const DataError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}

}  // namespace cewe::cli
