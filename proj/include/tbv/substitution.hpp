#ifndef TBV_SUBSTITUTION_HPP
#define TBV_SUBSTITUTION_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "tbv/arith.hpp"
#include "tbv/toeplitz.hpp"
#include "tbv/words.hpp"

namespace tbv {

/**
 * Constant-length substitution on a finite alphabet: every image has the
 * same length l >= 2. Exact generator of Toeplitz inputs.
 */
class Substitution {
 public:
  /// images indexed by alphabet order.
  Substitution(Alphabet alphabet, std::vector<Word> images);

  static Substitution from_map(const Alphabet& alphabet,
                               const std::map<Symbol, Word>& images);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t length() const noexcept { return length_; }
  const Word& image(Symbol a) const { return images_[alphabet_.index_of(a)]; }
  const std::vector<Word>& images() const noexcept { return images_; }

  /// Concatenation of images; length = l * |w|.
  Word apply(const Word& w) const;

  bool operator==(const Substitution& other) const = default;

 private:
  Alphabet alphabet_;
  std::vector<Word> images_;
  std::size_t length_;
};

/// The j-th column of a substitution power as a total map on the alphabet,
/// stored by alphabet index.
class ColumnFunction {
 public:
  explicit ColumnFunction(std::vector<std::uint8_t> table)
      : table_(std::move(table)) {}

  static ColumnFunction column_of(const Substitution& theta, std::size_t j);

  std::size_t domain_size() const noexcept { return table_.size(); }
  std::uint8_t operator()(std::uint8_t a) const { return table_.at(a); }
  /// this after other: (f.compose_after(g))(a) = f(g(a)).
  ColumnFunction compose_after(const ColumnFunction& other) const;
  std::optional<std::uint8_t> constant_value() const;
  const std::vector<std::uint8_t>& table() const noexcept { return table_; }

  auto operator<=>(const ColumnFunction& other) const = default;

 private:
  std::vector<std::uint8_t> table_;
};

/// Letter-to-letter map between two alphabets; total on the source.
class Coding {
 public:
  Coding(Alphabet source, Alphabet target, std::map<Symbol, Symbol> mapping);

  const Alphabet& source() const noexcept { return source_; }
  const Alphabet& target() const noexcept { return target_; }
  Symbol apply(Symbol a) const;
  Word apply(const Word& w) const;
  bool surjective() const;

 private:
  Alphabet source_;
  Alphabet target_;
  std::map<Symbol, Symbol> mapping_;
};

/// Local rule of a shift-commuting map: total assignment of (2r+1)-windows
/// to output symbols.
class SlidingBlockCode {
 public:
  SlidingBlockCode(std::size_t radius, std::map<Word, Symbol> rule);

  static SlidingBlockCode from_coding(const Coding& coding);

  std::size_t radius() const noexcept { return radius_; }
  /// Throws PartialCodeError naming the window when no entry exists.
  Symbol apply_window(const Word& window) const;
  /// Output has length |w| - 2r (empty when |w| < 2r+1).
  Word apply(const Word& w) const;

 private:
  std::size_t radius_;
  std::map<Word, Symbol> rule_;
};

/// Power n and column index i < l^n at which every letter maps to the same
/// fixed letter.
struct CoincidenceWitness {
  unsigned power = 0;
  Int column = 0;
};

/// True iff some power of the incidence matrix is entrywise positive
/// (exact; power bound (|A|-1)^2 + 1).
bool is_primitive(const Substitution& theta);

/// Decides whether the composition closure of the column functions contains
/// a constant map (the semigroup is finite, at most |A|^|A| elements).
/// Returns the lexicographically least witness (n, i).
std::optional<CoincidenceWitness> has_coincidence(const Substitution& theta);

/// First L symbols of lim theta^n(a). Requires theta(a) to start with a.
Word fixed_point_prefix(const Substitution& theta, Symbol seed, std::size_t length);

/// Exact skeleton tower of the fixed-point orbit: stage i has period l^i and
/// cell j is filled with b iff the j-th column of theta^i is constant b.
/// Requires primitivity and a coincidence; rejects periodic fixed points.
SkeletonTower tower_from_substitution(const Substitution& theta, std::size_t depth);

}  // namespace tbv

#endif  // TBV_SUBSTITUTION_HPP
