#ifndef TBV_TOEPLITZ_HPP
#define TBV_TOEPLITZ_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "tbv/arith.hpp"
#include "tbv/words.hpp"

namespace tbv {

/**
 * Exact representation of a Toeplitz sequence as a tower of nested partial
 * periodic fillings. Stage i (1-based) is a PartialWord of length p_i whose
 * p_i-periodic extension fixes part of the sequence; later stages only fill
 * holes, never rewrite. The filled cells of stage i are exactly the residues
 * of the sequence that are p_i-periodic.
 *
 * Immutable after construction; deepening produces a new value.
 */
class SkeletonTower {
 public:
  struct Stage {
    std::uint64_t period;
    PartialWord cells;

    bool operator==(const Stage& other) const = default;
  };

  SkeletonTower(Alphabet alphabet, std::vector<Stage> stages);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t depth() const noexcept { return stages_.size(); }
  const Stage& stage(std::size_t i) const;  // 1-based
  const std::vector<Stage>& stages() const noexcept { return stages_; }
  std::uint64_t deepest_period() const { return stages_.back().period; }

  /// Symbol at position n of the extension, or nullopt if still a hole.
  /// n may be any integer; cells extend periodically over Z.
  std::optional<Symbol> at(std::int64_t n) const;

  bool operator==(const SkeletonTower& other) const = default;

 private:
  Alphabet alphabet_;
  std::vector<Stage> stages_;
};

/// Divisibility chain of essential periods. `constructive` records that the
/// defining recursion (next period = essential period of the initial block)
/// has been verified up to the stored depth.
struct PeriodStructure {
  std::vector<Int> periods;
  bool constructive = false;
};

/// Per-position certified period; `period` is empty when the position is
/// unfilled at depth or no difference up to the deepest period certifies.
struct PositionPeriod {
  std::int64_t position = 0;
  std::optional<std::uint64_t> period;

  bool determined() const noexcept { return period.has_value(); }
};

/// Exact prefix x_[0,L) of the tower's sequence.
/// Throws IncompleteTower at the first position no stage fills.
Word fill_prefix(const SkeletonTower& t, std::size_t length);

/// Residues r mod p whose whole class is filled with symbol a at the deepest
/// stage (checked over one lcm(p, p_depth) window). Sound: never over-reports;
/// may under-report at shallow depth since unfilled cells reject the class.
std::set<std::uint64_t> per_set(const SkeletonTower& t, std::uint64_t p,
                                Symbol a);

/// The p-skeleton folded to one period: cell r is a iff r is in per_set(t,p,a).
PartialWord p_skeleton(const SkeletonTower& t, std::uint64_t p);

/// True iff the p-skeleton is nonempty and has minimal period exactly p.
bool is_essential_period(const SkeletonTower& t, std::uint64_t p);

/// Smallest d >= 1 such that the class of n mod d is entirely filled with the
/// symbol at n, certified at the deepest stage. Undetermined when n itself is
/// a hole or no d <= p_depth certifies.
PositionPeriod position_period(const SkeletonTower& t, std::int64_t n);

/// Constructive period structure of depth k:
///   p_1 = position_period(t, 0),  p_{i+1} = lcm of position_period(t, j)
/// over j in [0, p_i). Every returned period must pass is_essential_period,
/// else StructureInvariantViolation. Undetermined positions raise
/// IncompleteTower.
PeriodStructure constructive_structure(const SkeletonTower& t, std::size_t k);

/// One-sided window evidence of Toeplitz-ness: true iff every position of w
/// lies in some arithmetic progression of difference <= max_period that is
/// monochromatic across the whole window. Necessary-evidence only, never a
/// proof.
bool toeplitz_window_check(const Word& w, std::size_t max_period);

}  // namespace tbv

#endif  // TBV_TOEPLITZ_HPP
