#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "cewe/model.hpp"
#include "cewe/rng.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace cewe;
using namespace cewe::test;

TEST_CASE("init: ranges, zero outputs, determinism") {
  Model m = init_model({4, 123}, 10, 3);
  for (double v : m.W.data) CHECK(std::abs(v) <= 0.125);
  for (double v : m.C.data) CHECK(std::abs(v) <= 0.125);
  for (double v : m.Wout.data) REQUIRE(v == 0.0);

  Model again = init_model({4, 123}, 10, 3);
  CHECK(m.W.data == again.W.data);
  CHECK(m.C.data == again.C.data);

  Model other = init_model({4, 124}, 10, 3);
  CHECK(m.W.data != other.W.data);
}

TEST_CASE("cosine: identities") {
  std::vector<double> v = {0.3, -1.2, 0.5};
  CHECK(cosine(v, v) == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<double> e1 = {1.0, 0.0}, e2 = {0.0, 1.0};
  CHECK(cosine(e1, e2) == doctest::Approx(0.0));

  std::vector<double> a = {1.0, 1.0}, b = {2.0, 2.0};
  CHECK(cosine(a, b) == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<double> zero = {0.0, 0.0};
  CHECK_THROWS_AS(cosine(zero, a), DataError);
}

TEST_CASE("cosine: symmetric and bounded on random vectors") {
  Rng rng(200);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> a(8), b(8);
    for (auto& v : a) v = rng.real() - 0.5;
    for (auto& v : b) v = rng.real() - 0.5;
    double ab = cosine(a, b), ba = cosine(b, a);
    CHECK(ab == ba);
    CHECK(ab >= -1.0 - 1e-12);
    CHECK(ab <= 1.0 + 1e-12);
  }
}

TEST_CASE("nearest: agrees with the brute-force scan for every k") {
  Matrix m = random_matrix(50, 8, 77);
  Rng rng(78);
  std::vector<double> query(8);
  for (auto& v : query) v = rng.real() - 0.5;

  for (int k = 1; k <= 55; ++k) {
    auto got = nearest_neighbors(query, m, k);
    auto want = oracle_nearest(query, m, k);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].id == want[i].id);
      CHECK(got[i].similarity == doctest::Approx(want[i].similarity).epsilon(1e-12));
    }
  }
}

TEST_CASE("nearest: self query with exclusion returns the true runner-up") {
  Matrix m = random_matrix(30, 6, 79);
  for (int i = 0; i < m.rows; ++i) {
    auto got = nearest_neighbors(m.row(i), m, 1, {i});
    auto want = oracle_nearest(m.row(i), m, 1, {i});
    REQUIRE(got.size() == 1);
    CHECK(got[0].id == want[0].id);
  }
}

TEST_CASE("nearest: forced single result and tie-break") {
  Matrix m(2, 2);
  m.row(0)[0] = 1.0;
  m.row(1)[0] = 0.5;
  m.row(1)[1] = 0.5;
  std::vector<double> q = {1.0, 0.0};
  auto r = nearest_neighbors(q, m, 5, {0});
  REQUIRE(r.size() == 1);
  CHECK(r[0].id == 1);

  Matrix same(3, 2);
  for (int i = 0; i < 3; ++i) same.row(i)[0] = 2.0;
  auto tied = nearest_neighbors(q, same, 1);
  REQUIRE(tied.size() == 1);
  CHECK(tied[0].id == 0);
}

TEST_CASE("serialization: fresh model round-trips binary bit-exactly") {
  Model m = init_model({6, 5}, 12, 0);
  std::vector<std::string> tokens;
  for (int i = 0; i < 12; ++i) tokens.push_back("w" + std::to_string(i));
  EmbeddingTable t = table_from_rows(std::move(tokens), m.W);

  TempDir tmp;
  save_embedding_table(t, tmp.path("w.bin"), EmbeddingFormat::kBinary);
  EmbeddingTable back = load_embedding_table(tmp.path("w.bin"), EmbeddingFormat::kBinary);
  CHECK(back.tokens == t.tokens);
  REQUIRE(back.vectors.data.size() == t.vectors.data.size());
  for (std::size_t i = 0; i < t.vectors.data.size(); ++i)
    REQUIRE(back.vectors.data[i] == t.vectors.data[i]);
}

TEST_CASE("serialization: save-load-save is byte stable for any values") {
  Matrix m = random_matrix(9, 5, 91);
  std::vector<std::string> tokens;
  for (int i = 0; i < 9; ++i) tokens.push_back("tok" + std::to_string(i));
  EmbeddingTable t = table_from_rows(tokens, m);

  TempDir tmp;
  for (auto format : {EmbeddingFormat::kBinary, EmbeddingFormat::kText}) {
    const char* ext = format == EmbeddingFormat::kBinary ? "bin" : "txt";
    save_embedding_table(t, tmp.path(std::string("a.") + ext), format);
    EmbeddingTable mid = load_embedding_table(tmp.path(std::string("a.") + ext), format);
    save_embedding_table(mid, tmp.path(std::string("b.") + ext), format);
    CHECK(same_file_bytes(tmp.path(std::string("a.") + ext),
                          tmp.path(std::string("b.") + ext)));
  }
}

TEST_CASE("serialization: text round-trip within 5e-7 relative") {
  Matrix m = random_matrix(20, 7, 92, 3.0);
  std::vector<std::string> tokens;
  for (int i = 0; i < 20; ++i) tokens.push_back("t" + std::to_string(i));
  EmbeddingTable t = table_from_rows(std::move(tokens), m);

  TempDir tmp;
  save_embedding_table(t, tmp.path("w.txt"), EmbeddingFormat::kText);
  EmbeddingTable back = load_embedding_table(tmp.path("w.txt"), EmbeddingFormat::kText);
  for (std::size_t i = 0; i < t.vectors.data.size(); ++i) {
    double a = t.vectors.data[i], b = back.vectors.data[i];
    CHECK(std::abs(a - b) <= 5e-7 * std::max(std::abs(a), 1e-300));
  }
}

TEST_CASE("serialization: header semantics") {
  TempDir tmp;
  write_file(tmp.path("w.txt"), "3 2\nx 1 2\ny 3 4\nz 5 6\n");
  EmbeddingTable t = load_embedding_table(tmp.path("w.txt"), EmbeddingFormat::kText);
  CHECK(t.vectors.rows == 3);
  CHECK(t.vectors.cols == 2);
  CHECK(t.lookup("y") == 1);
  CHECK(t.vectors.row(2)[1] == 6.0);
}

TEST_CASE("serialization: word2vec-style text files load interchangeably") {
  TempDir tmp;
  write_file(tmp.path("w.txt"),
             "2 3\nking 0.125 -0.25 1.5\nqueen -1 2.25e-1 0.003\n");
  EmbeddingTable t = load_embedding_table(tmp.path("w.txt"), EmbeddingFormat::kText);
  CHECK(t.vectors.row(0)[0] == doctest::Approx(0.125));
  CHECK(t.vectors.row(1)[1] == doctest::Approx(0.225));
}

TEST_CASE("serialization: truncated binary fails with no partial result") {
  Model m = init_model({4, 6}, 5, 0);
  std::vector<std::string> tokens = {"a", "b", "c", "d", "e"};
  EmbeddingTable t = table_from_rows(std::move(tokens), m.W);

  TempDir tmp;
  save_embedding_table(t, tmp.path("w.bin"), EmbeddingFormat::kBinary);
  std::string bytes = read_file(tmp.path("w.bin"));
  write_file(tmp.path("cut.bin"), bytes.substr(0, bytes.size() - 7));
  CHECK_THROWS_AS(load_embedding_table(tmp.path("cut.bin"), EmbeddingFormat::kBinary),
                  FormatError);
}

TEST_CASE("serialization: non-numeric text token carries an offset") {
  TempDir tmp;
  write_file(tmp.path("w.txt"), "1 2\nx 1 oops\n");
  try {
    load_embedding_table(tmp.path("w.txt"), EmbeddingFormat::kText);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.offset() >= 0);
    CHECK(std::string(e.what()).find("oops") != std::string::npos);
  }
}

TEST_CASE("serialization: bad header is rejected") {
  TempDir tmp;
  write_file(tmp.path("w.txt"), "banana\n");
  CHECK_THROWS_AS(load_embedding_table(tmp.path("w.txt"), EmbeddingFormat::kText),
                  FormatError);
}

TEST_CASE("save_embeddings: writes words and categories separately") {
  Vocabulary vocab;
  vocab.add("alpha", 5);
  vocab.add("beta", 3);
  vocab.set_total_tokens(8);
  CategoryVocabulary cats;
  cats.add("Animal anatomy", 4);

  Model m = init_model({3, 9}, 2, 1);
  TempDir tmp;
  save_embeddings(m, vocab, cats, tmp.path("m"), EmbeddingFormat::kText);

  EmbeddingTable words =
      load_embedding_table(tmp.path("m.words.txt"), EmbeddingFormat::kText);
  CHECK(words.tokens == std::vector<std::string>{"alpha", "beta"});

  EmbeddingTable categories =
      load_embedding_table(tmp.path("m.cats.txt"), EmbeddingFormat::kText);
  CHECK(categories.tokens == std::vector<std::string>{"Animal_anatomy"});
}
