#include <random>
#include <set>

#include "doctest.h"
#include "tbv/substitution.hpp"
#include "tbv/toeplitz.hpp"

using namespace tbv;

namespace {

Substitution period_doubling() {
  return Substitution::from_map(Alphabet("ab"), {{'a', "ab"}, {'b', "aa"}});
}

Substitution thue_morse() {
  return Substitution::from_map(Alphabet("ab"), {{'a', "ab"}, {'b', "ba"}});
}

// Level-synchronous oracle: iterate the full column-function sets of theta^n
// until the sets cycle; reports the least power with a constant column.
std::optional<unsigned> coincidence_power_oracle(const Substitution& theta) {
  const std::size_t n = theta.alphabet().size();
  std::vector<ColumnFunction> gens;
  for (std::size_t j = 0; j < theta.length(); ++j)
    gens.push_back(ColumnFunction::column_of(theta, j));
  std::set<std::vector<std::uint8_t>> level;
  for (const auto& g : gens) level.insert(g.table());
  std::set<std::set<std::vector<std::uint8_t>>> seen_levels;
  unsigned power = 1;
  while (true) {
    for (const auto& table : level) {
      bool constant = true;
      for (std::size_t a = 1; a < n; ++a)
        if (table[a] != table[0]) {
          constant = false;
          break;
        }
      if (constant) return power;
    }
    if (!seen_levels.insert(level).second) return std::nullopt;
    std::set<std::vector<std::uint8_t>> next;
    for (const auto& table : level)
      for (const auto& g : gens)
        next.insert(g.compose_after(ColumnFunction(table)).table());
    level = std::move(next);
    ++power;
  }
}

}  // namespace

TEST_CASE("apply concatenates images") {
  const auto pd = period_doubling();
  CHECK(pd.apply("a") == "ab");
  CHECK(pd.apply("ab") == "abaa");
  CHECK(pd.apply("") == "");
  CHECK_THROWS_AS(pd.apply("ax"), AlphabetError);
}

TEST_CASE("apply is a monoid morphism") {
  const auto pd = period_doubling();
  std::mt19937 rng(11);
  for (int iter = 0; iter < 100; ++iter) {
    Word u, v;
    for (std::size_t i = rng() % 8; i > 0; --i)
      u.push_back(rng() % 2 ? 'a' : 'b');
    for (std::size_t i = rng() % 8; i > 0; --i)
      v.push_back(rng() % 2 ? 'a' : 'b');
    CHECK(pd.apply(u + v) == pd.apply(u) + pd.apply(v));
  }
}

TEST_CASE("substitution shape is validated") {
  CHECK_THROWS_AS(Substitution(Alphabet("ab"), {"ab", "a"}), ArgumentError);
  CHECK_THROWS_AS(Substitution(Alphabet("ab"), {"a", "b"}), ArgumentError);
  CHECK_THROWS_AS(Substitution(Alphabet("ab"), {"ab"}), ArgumentError);
  CHECK_THROWS_AS(Substitution(Alphabet("ab"), {"ab", "ac"}), AlphabetError);
}

TEST_CASE("primitivity via incidence-matrix powers") {
  CHECK(is_primitive(period_doubling()));
  CHECK(is_primitive(thue_morse()));
  CHECK_FALSE(is_primitive(
      Substitution::from_map(Alphabet("ab"), {{'a', "aa"}, {'b', "bb"}})));
}

TEST_CASE("coincidence decided through the column semigroup") {
  const auto pd_witness = has_coincidence(period_doubling());
  REQUIRE(pd_witness.has_value());
  CHECK(pd_witness->power == 1);
  CHECK(pd_witness->column == 0);

  CHECK_FALSE(has_coincidence(thue_morse()).has_value());

  const auto single = Substitution::from_map(Alphabet("a"), {{'a', "aa"}});
  const auto single_witness = has_coincidence(single);
  REQUIRE(single_witness.has_value());
  CHECK(single_witness->power == 1);
  CHECK(single_witness->column == 0);

  // coincidence can first appear past power 1
  const auto late = Substitution::from_map(
      Alphabet("abc"), {{'a', "bc"}, {'b', "ab"}, {'c', "cb"}});
  const auto w = has_coincidence(late);
  if (w) CHECK(w->power == coincidence_power_oracle(late).value());
}

TEST_CASE("coincidence witness power matches the level-set oracle") {
  std::mt19937 rng(123);
  const Alphabet abc("abc");
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<Word> images(3);
    for (auto& w : images)
      for (int j = 0; j < 3; ++j) w.push_back(static_cast<char>('a' + rng() % 3));
    const Substitution theta(abc, images);
    const auto got = has_coincidence(theta);
    const auto want = coincidence_power_oracle(theta);
    CHECK(got.has_value() == want.has_value());
    if (got && want) CHECK(got->power == *want);
    if (got) {
      // reconstruct the witness column of theta^n and check it is constant
      std::vector<std::uint8_t> digits;
      Int i = got->column;
      for (unsigned k = 0; k < got->power; ++k) {
        digits.push_back(static_cast<std::uint8_t>(i % theta.length()));
        i /= theta.length();
      }
      std::vector<std::uint8_t> table;
      for (std::size_t a = 0; a < abc.size(); ++a)
        table.push_back(static_cast<std::uint8_t>(a));
      ColumnFunction f{std::move(table)};
      for (auto it = digits.rbegin(); it != digits.rend(); ++it)
        f = ColumnFunction::column_of(theta, *it).compose_after(f);
      CHECK(f.constant_value().has_value());
    }
  }
}

TEST_CASE("fixed point prefixes") {
  const auto pd = period_doubling();
  CHECK(fixed_point_prefix(pd, 'a', 8) == "abaaabab");
  CHECK(fixed_point_prefix(pd, 'a', 1) == "a");
  CHECK(fixed_point_prefix(pd, 'a', 0) == "");
  CHECK_THROWS_AS(fixed_point_prefix(pd, 'b', 4), SeedError);
}

TEST_CASE("tower_from_substitution matches the fixed point on filled cells") {
  const auto pd = period_doubling();
  const auto t = tower_from_substitution(pd, 2);
  REQUIRE(t.depth() == 2);
  CHECK(t.stage(1).period == 2);
  CHECK(t.stage(1).cells.text() == "a*");
  CHECK(t.stage(2).period == 4);
  CHECK(t.stage(2).cells.text() == "aba*");

  const auto deep = tower_from_substitution(pd, 7);
  const Word reference = fixed_point_prefix(pd, 'a', 128);
  for (std::size_t i = 1; i <= deep.depth(); ++i) {
    const auto& st = deep.stage(i);
    for (std::size_t n = 0; n < reference.size(); ++n) {
      const auto c = st.cells.cell(n % st.period);
      if (c != PartialWord::kHole) CHECK(c == reference[n]);
    }
  }

  CHECK(tower_from_substitution(pd, 0).depth() == 0);
  CHECK_THROWS_AS(tower_from_substitution(thue_morse(), 2), NotToeplitz);
  // periodic fixed point: every column of theta is already constant
  CHECK_THROWS_AS(
      tower_from_substitution(
          Substitution::from_map(Alphabet("ab"), {{'a', "ab"}, {'b', "ab"}}), 2),
      NotToeplitz);
}

TEST_CASE("sliding block codes") {
  const Alphabet ab("ab");
  const Coding identity(ab, ab, {{'a', 'a'}, {'b', 'b'}});
  const auto id_code = SlidingBlockCode::from_coding(identity);
  CHECK(id_code.apply("abaa") == "abaa");

  const Coding binary(ab, Alphabet("01"), {{'a', '0'}, {'b', '1'}});
  CHECK(binary.surjective());
  const auto bin_code = SlidingBlockCode::from_coding(binary);
  CHECK(bin_code.apply("abaa") == "0100");

  const SlidingBlockCode majority(
      1, {{"aaa", 'a'}, {"aab", 'a'}, {"aba", 'a'}, {"baa", 'a'},
          {"abb", 'b'}, {"bab", 'b'}, {"bba", 'b'}, {"bbb", 'b'}});
  const Word prefix = fixed_point_prefix(period_doubling(), 'a', 1024);
  const Word image = majority.apply(prefix);
  CHECK(image.size() == 1022);
  CHECK(toeplitz_window_check(image, image.size()));

  const SlidingBlockCode partial(1, {{"aaa", 'a'}});
  CHECK_THROWS_AS(partial.apply("aaab"), PartialCodeError);
  CHECK(partial.apply("ab").empty());  // shorter than one window
}
