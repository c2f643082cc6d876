#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "tbv/bratteli.hpp"
#include "tbv/substitution.hpp"

using namespace tbv;

namespace {

OrderedBratteliDiagram make_diagram(std::vector<std::vector<std::string>> names,
                                    std::vector<std::vector<VertexWord>> words) {
  return OrderedBratteliDiagram(std::move(names), std::move(words));
}

Substitution period_doubling() {
  return Substitution::from_map(Alphabet("ab"), {{'a', "ab"}, {'b', "aa"}});
}

TowerDiagramResult pd_diagram(std::size_t levels) {
  // one stage beyond the window: the deepest stage's hole sits at 2^K - 1
  const auto tower = tower_from_substitution(period_doubling(), levels + 3);
  const std::size_t window = 4ull << levels;  // 4 * 2^levels
  return bv_from_tower(tower, levels, window);
}

// Two-level source diagram of the symbol-splitting walkthrough: two vertices
// per level, one root edge each, and the morphism images v v' v v'' and
// v' v v'' v' on the top vertices.
struct SplitFixture {
  OrderedBratteliDiagram b = make_diagram(
      {{"root"}, {"w1", "w2"}, {"x1", "x2"}, {"y1", "y2"}},
      {{{0}, {0}}, {{0, 1}, {0, 1}}, {{0, 1}, {0, 1}}});
  LevelMorphism eta1{3, 1, {{0, 1, 0, 2}, {1, 0, 2, 1}}};
};

}  // namespace

TEST_CASE("diagram construction and validation") {
  auto d = make_diagram({{"root"}, {"v1", "v2"}},
                        {{{0, 0}, {0}}});
  CHECK(validate(d).empty());
  CHECK(d.depth() == 1);
  CHECK(d.level_size(1) == 2);
  CHECK(d.find_vertex(1, "v2") == VertexId{1});

  // empty source word is representable and reported (the vertex below it
  // becomes a dead source at the same time)
  auto empty_range = make_diagram({{"root"}, {"v"}, {"w"}},
                                  {{{0}}, {{}}});
  const auto diag1 = validate(empty_range);
  REQUIRE(diag1.size() == 2);
  CHECK(diag1[0].kind == DiagramDiagnostic::Kind::EmptyRange);
  CHECK(diag1[0].level == 2);
  CHECK(diag1[1].kind == DiagramDiagnostic::Kind::DeadSource);

  // a level-1 vertex unused by every theta_2 word
  auto dead = make_diagram({{"root"}, {"v1", "v2"}, {"w"}},
                           {{{0}, {0}}, {{0, 0}}});
  const auto diag2 = validate(dead);
  REQUIRE(diag2.size() == 1);
  CHECK(diag2[0].kind == DiagramDiagnostic::Kind::DeadSource);
  CHECK(diag2[0].level == 1);
  CHECK(diag2[0].vertex == 1);

  CHECK_THROWS_AS(make_diagram({{"root", "extra"}}, {}), ArgumentError);
  CHECK_THROWS_AS(make_diagram({{"root"}, {"v", "v"}}, {{{0}, {0}}}),
                  ArgumentError);
  CHECK_THROWS_AS(make_diagram({{"root"}, {"v"}}, {{{7}}}), ArgumentError);
}

TEST_CASE("adjacency matrices count edge multiplicities") {
  auto d = make_diagram({{"root"}, {"v"}, {"w"}}, {{{0, 0}}, {{0, 0}}});
  CHECK(adjacency_matrix(d, 2) == AdjacencyMatrix{{2}});
  CHECK_THROWS_AS(adjacency_matrix(d, 3), ArgumentError);
  CHECK_THROWS_AS(adjacency_matrix(d, 0), ArgumentError);

  // four finite paths from level 1 to each top vertex of the split fixture
  SplitFixture fx;
  const auto composed = compose(fx.b, 1, 3);
  for (const VertexWord& w : composed) CHECK(w.size() == 4);
}

TEST_CASE("equal row sums") {
  const auto pd = pd_diagram(4);
  const auto report = is_ers(pd.diagram);
  CHECK(report.ers);
  CHECK(report.row_sums == std::vector<std::uint64_t>{2, 2, 2, 2});

  auto uneven = make_diagram({{"root"}, {"v1", "v2"}},
                             {{{0, 0}, {0, 0, 0}}});
  const auto bad = is_ers(uneven);
  CHECK_FALSE(bad.ers);
  CHECK(bad.first_violation == 1);

  auto chain = make_diagram({{"root"}, {"a"}, {"b"}, {"c"}},
                            {{{0}}, {{0}}, {{0}}});
  const auto single = is_ers(chain);
  CHECK(single.ers);
  CHECK(single.row_sums == std::vector<std::uint64_t>{1, 1, 1});
}

TEST_CASE("simplicity via positive adjacency windows") {
  const auto pd = pd_diagram(6);
  const auto report = is_simple(pd.diagram);
  CHECK(report.simple);
  CHECK_FALSE(report.shallow);
  CHECK(report.covered_depth >= 3);

  // two non-communicating chains
  auto chains = make_diagram(
      {{"root"}, {"a1", "b1"}, {"a2", "b2"}, {"a3", "b3"}, {"a4", "b4"}},
      {{{0}, {0}}, {{0}, {1}}, {{0}, {1}}, {{0}, {1}}});
  CHECK_FALSE(is_simple(chains).simple);

  auto shallow = make_diagram({{"root"}, {"v"}}, {{{0}}});
  const auto sh = is_simple(shallow);
  CHECK(sh.simple);
  CHECK(sh.shallow);
}

TEST_CASE("compose multiplies expansions") {
  const auto pd = pd_diagram(4);
  // identity telescoping j = i+1
  CHECK(compose(pd.diagram, 2, 3) == pd.diagram.theta(3));
  for (const VertexWord& w : compose(pd.diagram, 0, 3)) CHECK(w.size() == 8);
  CHECK_THROWS_AS(compose(pd.diagram, 3, 3), ArgumentError);
}

TEST_CASE("telescope preserves path counts and multiplies row sums") {
  const auto pd = pd_diagram(6);
  const auto& d = pd.diagram;

  std::vector<std::size_t> all_levels{1, 2, 3, 4, 5, 6};
  const auto copy = telescope(d, all_levels);
  CHECK(copy == d);

  const auto even = telescope(d, {2, 4, 6});
  const auto even_ers = is_ers(even);
  CHECK(even_ers.ers);
  CHECK(even_ers.row_sums == std::vector<std::uint64_t>{4, 4, 4});
  CHECK(path_counts(even, 3) == path_counts(d, 6));
  // labels and min marks ride along
  CHECK(even.label(1, 0) == d.label(2, 0));
  CHECK(even.min_mark(1) == d.min_mark(2));

  const auto top = telescope(d, {6});
  CHECK(top.depth() == 1);
  CHECK(is_ers(top).row_sums == std::vector<std::uint64_t>{64});

  CHECK_THROWS_AS(telescope(d, {}), ArgumentError);
  CHECK_THROWS_AS(telescope(d, {3, 2}), ArgumentError);
  CHECK_THROWS_AS(telescope(d, {7}), ArgumentError);

  // ERS is preserved by random cut sets
  std::mt19937 rng(5);
  for (int iter = 0; iter < 25; ++iter) {
    std::vector<std::size_t> cuts;
    for (std::size_t lvl = 1; lvl <= 6; ++lvl)
      if (rng() % 2) cuts.push_back(lvl);
    if (cuts.empty()) continue;
    const auto scoped = telescope(d, cuts);
    CHECK(is_ers(scoped).ers);
    CHECK(path_counts(scoped, cuts.size()) == path_counts(d, cuts.back()));
  }
}

TEST_CASE("min and max edges with common sources") {
  const auto pd = pd_diagram(5);
  for (std::size_t i = 2; i <= 5; ++i) {
    const auto [mn, mx] = min_max_same_source(pd.diagram, i);
    CHECK(mn);  // every block starts with the same sub-block
    CHECK_FALSE(mx);
  }

  auto mixed = make_diagram({{"root"}, {"a", "b"}, {"c", "d"}},
                            {{{0}, {0}}, {{0, 1}, {1, 0}}});
  const auto [mn2, mx2] = min_max_same_source(mixed, 2);
  CHECK_FALSE(mn2);
  CHECK_FALSE(mx2);

  auto single = make_diagram({{"root"}, {"v"}}, {{{0, 0}}});
  CHECK(min_max_same_source(single, 1) == std::pair{true, true});
}

TEST_CASE("bv_from_tower builds the grid-block diagram") {
  const auto result = pd_diagram(3);
  const auto& d = result.diagram;
  REQUIRE(d.depth() == 3);
  CHECK(result.structure.periods == std::vector<Int>{2, 4, 8});
  CHECK_FALSE(result.unstable_warning.has_value());

  CHECK(d.level_size(1) == 2);
  CHECK(d.level_size(2) == 2);
  CHECK(d.level_size(3) == 2);
  CHECK(is_ers(d).row_sums == std::vector<std::uint64_t>{2, 2, 2});

  // min-path sources carry the initial blocks
  REQUIRE(d.min_mark(1).has_value());
  CHECK(d.label(1, *d.min_mark(1)) == "ab");
  CHECK(d.label(2, *d.min_mark(2)) == "abaa");
  CHECK(d.label(3, *d.min_mark(3)) == "abaaabab");

  // vertex sets match the image-block closure of the substitution
  const auto pd = period_doubling();
  for (std::size_t n = 1; n <= 3; ++n) {
    std::set<Word> expected;
    for (Symbol a : {'a', 'b'}) {
      Word w(1, a);
      for (std::size_t k = 0; k < n; ++k) w = pd.apply(w);
      expected.insert(w);
    }
    std::set<Word> got;
    for (std::size_t v = 0; v < d.level_size(n); ++v)
      got.insert(d.label(n, static_cast<VertexId>(v)));
    CHECK(got == expected);
  }

  // theta words expand blocks into their sub-blocks
  for (std::size_t n = 2; n <= 3; ++n)
    for (std::size_t v = 0; v < d.level_size(n); ++v) {
      const Word block = d.label(n, static_cast<VertexId>(v));
      Word expanded;
      for (VertexId w : d.theta_word(n, static_cast<VertexId>(v)))
        expanded += d.label(n - 1, w);
      CHECK(expanded == block);
    }

  // single level
  const auto tower = tower_from_substitution(pd, 4);
  const auto one = bv_from_tower(tower, 1, 8);
  CHECK(one.diagram.depth() == 1);
  CHECK(one.diagram.level_size(1) == 2);

  CHECK_THROWS_AS(bv_from_tower(tower, 2, 6), ArgumentError);   // not multiple
  CHECK_THROWS_AS(bv_from_tower(tower, 0, 8), ArgumentError);
}

TEST_CASE("symbol splitting on the two-morphism walkthrough") {
  SplitFixture fx;
  const auto result = symbol_split(fx.b, fx.eta1, 1, 1);
  const auto& d = result.diagram;

  REQUIRE(d.depth() == 3);
  CHECK(d.level_size(1) == 6);
  CHECK(d.level_size(2) == 4);
  CHECK(d.level_size(3) == 2);

  // three distinct linked words per bottom vertex, two per middle vertex
  std::map<VertexId, int> bottom, middle;
  for (const auto& sv : result.provenance[0]) ++bottom[sv.original];
  for (const auto& sv : result.provenance[1]) ++middle[sv.original];
  CHECK(bottom == std::map<VertexId, int>{{0, 3}, {1, 3}});
  CHECK(middle == std::map<VertexId, int>{{0, 2}, {1, 2}});

  // path counts into the top level are conserved
  CHECK(path_counts(d, 3) == path_counts(fx.b, 3));
  CHECK(is_ers(d).ers);

  // eta'_1 is letter-to-letter and carries the linked words
  for (std::size_t v = 0; v < result.eta1.images.size(); ++v) {
    CHECK(result.eta1.images[v].size() == 1);
    CHECK(result.eta1.images[v] == result.provenance[0][v].linked_word);
  }

  // middle-level linked words are exactly vv', v'v for x1 and vv'', v''v'
  // for x2, in first-occurrence order
  CHECK(result.provenance[1][0].linked_word == VertexWord{0, 1});
  CHECK(result.provenance[1][1].linked_word == VertexWord{0, 2});
  CHECK(result.provenance[1][2].linked_word == VertexWord{1, 0});
  CHECK(result.provenance[1][3].linked_word == VertexWord{2, 1});

  // all linked words equal: singleton splits, structure unchanged
  LevelMorphism flat{3, 1, {{0, 0, 0, 0}, {0, 0, 0, 0}}};
  const auto trivial = symbol_split(fx.b, flat, 1, 1);
  CHECK(trivial.diagram.level_size(1) == 2);
  CHECK(trivial.diagram.level_size(2) == 2);
  CHECK(path_counts(trivial.diagram, 3) == path_counts(fx.b, 3));

  // |W'_1| never exceeds the number of finite paths from W_ell to W_n1,
  // with equality exactly when the linked words are all distinct
  CHECK(d.level_size(1) == 6);  // duplicates above: strictly below 8 paths
  LevelMorphism distinct{3, 1, {{0, 1, 2, 3}, {1, 0, 3, 2}}};
  const auto full = symbol_split(fx.b, distinct, 1, 1);
  CHECK(full.diagram.level_size(1) == 8);  // 2 vertices x 4 paths each

  // precondition violations
  LevelMorphism wrong_len{3, 1, {{0, 1, 0}, {1, 0, 2}}};
  CHECK_THROWS_AS(symbol_split(fx.b, wrong_len, 1, 1), ArgumentError);
  CHECK_THROWS_AS(symbol_split(fx.b, fx.eta1, 3, 1), ArgumentError);
  CHECK_THROWS_AS(symbol_split(fx.b, fx.eta1, 1, 3), ArgumentError);
}

TEST_CASE("splitting a deeper diagram keeps upper levels") {
  // source with one level above the morphism level
  auto b = make_diagram(
      {{"root"}, {"w1", "w2"}, {"x1", "x2"}, {"y1", "y2"}, {"z"}},
      {{{0}, {0}}, {{0, 1}, {0, 1}}, {{0, 1}, {0, 1}}, {{0, 1, 1}}});
  LevelMorphism eta1{3, 1, {{0, 1, 0, 2}, {1, 0, 2, 1}}};
  const auto result = symbol_split(b, eta1, 1, 1);
  REQUIRE(result.diagram.depth() == 4);
  CHECK(result.diagram.level_size(4) == 1);
  CHECK(result.diagram.theta_word(4, 0) == VertexWord{0, 1, 1});
  CHECK(path_counts(result.diagram, 4) == path_counts(b, 4));
}

TEST_CASE("insert_word_level normalizes duplicate source words") {
  auto dup = make_diagram({{"root"}, {"a", "b"}, {"c", "d", "e"}},
                          {{{0}, {0}}, {{0, 1}, {0, 1}, {1, 0}}});
  const auto result = insert_word_level(dup, 2);
  REQUIRE(result.changed);
  CHECK(result.inserted_level == 2);
  const auto& d = result.diagram;
  REQUIRE(d.depth() == 3);
  CHECK(d.level_size(2) == 2);  // two distinct words
  CHECK(d.theta_word(2, 0) == VertexWord{0, 1});
  CHECK(d.theta_word(2, 1) == VertexWord{1, 0});
  // rewired level now points at representatives
  CHECK(d.theta_word(3, 0) == VertexWord{0});
  CHECK(d.theta_word(3, 1) == VertexWord{0});
  CHECK(d.theta_word(3, 2) == VertexWord{1});
  CHECK(path_counts(d, 3) == path_counts(dup, 2));

  // all distinct: no-op
  auto distinct = make_diagram({{"root"}, {"a", "b"}, {"c", "d"}},
                               {{{0}, {0}}, {{0, 1}, {1, 0}}});
  CHECK_FALSE(insert_word_level(distinct, 2).changed);

  // grid-block diagrams have distinct decompositions at every level
  const auto pd = pd_diagram(5);
  for (std::size_t i = 2; i <= 5; ++i)
    CHECK_FALSE(insert_word_level(pd.diagram, i).changed);
}
