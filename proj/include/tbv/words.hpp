#ifndef TBV_WORDS_HPP
#define TBV_WORDS_HPP

#include <cstddef>
#include <string>
#include <string_view>

#include "tbv/errors.hpp"

namespace tbv {

using Symbol = char;

/// Finite word over some alphabet. Plain contiguous storage; alphabet
/// membership is checked by the operations that need it.
using Word = std::string;

/**
 * Ordered finite set of distinct symbols. The order is fixed and total and
 * drives every deterministic serialization in the library.
 */
class Alphabet {
 public:
  explicit Alphabet(std::string_view symbols);

  std::size_t size() const noexcept { return symbols_.size(); }
  bool contains(Symbol s) const noexcept;
  /// Index of s in the fixed order; throws AlphabetError if absent.
  std::size_t index_of(Symbol s) const;
  Symbol at(std::size_t i) const { return symbols_.at(i); }
  const std::string& symbols() const noexcept { return symbols_; }

  /// Throws AlphabetError naming the first foreign symbol of w, if any.
  void require_word(const Word& w) const;

  bool operator==(const Alphabet& other) const = default;

 private:
  std::string symbols_;
};

/**
 * Word with holes, one period folded to length p. The hole is a genuine
 * symbol of the skeleton: a hole aligned with a filled cell breaks
 * periodicity. Interpreted everywhere as its p-periodic extension over Z.
 */
class PartialWord {
 public:
  static constexpr Symbol kHole = '*';

  /// cells uses kHole for holes, e.g. "a*a*". Length must be >= 1.
  explicit PartialWord(std::string cells);

  std::size_t length() const noexcept { return cells_.size(); }
  bool filled(std::size_t i) const { return cells_.at(i) != kHole; }
  /// Raw cell content; kHole for holes.
  Symbol cell(std::size_t i) const { return cells_.at(i); }
  const std::string& text() const noexcept { return cells_; }

  std::size_t filled_count() const noexcept;
  bool all_holes() const noexcept { return filled_count() == 0; }

  bool operator==(const PartialWord& other) const = default;

 private:
  std::string cells_;
};

/// True iff w[j] = w[j+d] for all valid j. Requires 1 <= d <= |w|.
bool word_has_period(const Word& w, std::size_t d);

/// True iff the p-periodic extension of pw over Z, holes included, is
/// d-periodic. Checked over one window of length lcm(d, p).
bool partial_periodic(const PartialWord& pw, std::size_t d);

/// Smallest d with partial_periodic(pw, d); always divides length(pw).
std::size_t min_period_partial(const PartialWord& pw);

}  // namespace tbv

#endif  // TBV_WORDS_HPP
