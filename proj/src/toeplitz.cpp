#include "tbv/toeplitz.hpp"

#include <limits>
#include <numeric>
#include <string>

namespace tbv {
namespace {

std::uint64_t mod_pos(std::int64_t n, std::uint64_t p) {
  const auto m = n % static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(m >= 0 ? m : m + static_cast<std::int64_t>(p));
}

}  // namespace

SkeletonTower::SkeletonTower(Alphabet alphabet, std::vector<Stage> stages)
    : alphabet_(std::move(alphabet)), stages_(std::move(stages)) {
  for (std::size_t i = 0; i < stages_.size(); ++i) {
    const Stage& s = stages_[i];
    if (s.period == 0)
      throw StructureInvariantViolation("stage period must be positive");
    if (s.cells.length() != s.period)
      throw StructureInvariantViolation(
          "stage " + std::to_string(i + 1) + ": cells length " +
          std::to_string(s.cells.length()) + " != period " +
          std::to_string(s.period));
    for (std::size_t c = 0; c < s.cells.length(); ++c)
      if (s.cells.filled(c) && !alphabet_.contains(s.cells.cell(c)))
        throw AlphabetError(std::string("stage symbol '") + s.cells.cell(c) +
                            "' not in alphabet");
  }
  for (std::size_t i = 0; i + 1 < stages_.size(); ++i) {
    const Stage& lo = stages_[i];
    const Stage& hi = stages_[i + 1];
    if (hi.period <= lo.period || hi.period % lo.period != 0)
      throw StructureInvariantViolation(
          "stage periods must strictly increase and divide: " +
          std::to_string(lo.period) + " -> " + std::to_string(hi.period));
    bool fills_new = false;
    for (std::uint64_t r = 0; r < hi.period; ++r) {
      const Symbol below = lo.cells.cell(static_cast<std::size_t>(r % lo.period));
      const Symbol here = hi.cells.cell(static_cast<std::size_t>(r));
      if (below != PartialWord::kHole && here != below)
        throw StructureInvariantViolation(
            "stage " + std::to_string(i + 2) + " rewrites residue " +
            std::to_string(r) + " fixed at stage " + std::to_string(i + 1));
      if (below == PartialWord::kHole && here != PartialWord::kHole)
        fills_new = true;
    }
    // A stage that repeats a nonempty predecessor is redundant; in
    // particular a fully filled stage proves the sequence periodic.
    if (!fills_new && lo.cells.filled_count() > 0)
      throw StructureInvariantViolation(
          "stage " + std::to_string(i + 2) +
          " fills no residue class left open by stage " + std::to_string(i + 1));
  }
}

const SkeletonTower::Stage& SkeletonTower::stage(std::size_t i) const {
  if (i < 1 || i > stages_.size())
    throw ArgumentError("stage index " + std::to_string(i) + " out of range");
  return stages_[i - 1];
}

std::optional<Symbol> SkeletonTower::at(std::int64_t n) const {
  // Consistency guarantees a cell filled at any stage is filled (equal) at
  // the deepest stage, so one lookup suffices.
  if (stages_.empty()) return std::nullopt;
  const Stage& deep = stages_.back();
  const Symbol c = deep.cells.cell(static_cast<std::size_t>(mod_pos(n, deep.period)));
  if (c == PartialWord::kHole) return std::nullopt;
  return c;
}

Word fill_prefix(const SkeletonTower& t, std::size_t length) {
  Word out;
  out.reserve(length);
  for (std::size_t n = 0; n < length; ++n) {
    const auto s = t.at(static_cast<std::int64_t>(n));
    if (!s) throw IncompleteTower(static_cast<std::int64_t>(n), t.depth());
    out.push_back(*s);
  }
  return out;
}

PartialWord p_skeleton(const SkeletonTower& t, std::uint64_t p) {
  if (p < 1) throw ArgumentError("p_skeleton: need p >= 1");
  std::string cells(static_cast<std::size_t>(p), PartialWord::kHole);
  if (t.depth() == 0) return PartialWord(std::move(cells));
  const std::uint64_t pk = t.deepest_period();
  const std::uint64_t window = std::lcm(p, pk);
  for (std::uint64_t r = 0; r < p; ++r) {
    Symbol common = PartialWord::kHole;
    bool ok = true;
    for (std::uint64_t m = r; m < window; m += p) {
      const auto s = t.at(static_cast<std::int64_t>(m));
      if (!s || (common != PartialWord::kHole && *s != common)) {
        ok = false;
        break;
      }
      common = *s;
    }
    if (ok && common != PartialWord::kHole)
      cells[static_cast<std::size_t>(r)] = common;
  }
  return PartialWord(std::move(cells));
}

std::set<std::uint64_t> per_set(const SkeletonTower& t, std::uint64_t p,
                                Symbol a) {
  if (!t.alphabet().contains(a))
    throw AlphabetError(std::string("per_set: symbol '") + a +
                        "' not in alphabet");
  const PartialWord skel = p_skeleton(t, p);
  std::set<std::uint64_t> out;
  for (std::uint64_t r = 0; r < p; ++r)
    if (skel.cell(static_cast<std::size_t>(r)) == a) out.insert(r);
  return out;
}

bool is_essential_period(const SkeletonTower& t, std::uint64_t p) {
  const PartialWord skel = p_skeleton(t, p);
  if (skel.all_holes()) return false;
  return min_period_partial(skel) == p;
}

PositionPeriod position_period(const SkeletonTower& t, std::int64_t n) {
  PositionPeriod out;
  out.position = n;
  if (t.depth() == 0) return out;
  const std::uint64_t pk = t.deepest_period();
  const auto value = t.at(n);
  if (!value) return out;
  for (std::uint64_t d = 1; d <= pk; ++d) {
    const std::uint64_t window = std::lcm(d, pk);
    bool ok = true;
    for (std::uint64_t m = mod_pos(n, d); m < window; m += d) {
      const auto s = t.at(static_cast<std::int64_t>(m));
      if (!s || *s != *value) {
        ok = false;
        break;
      }
    }
    if (ok) {
      out.period = d;
      return out;
    }
  }
  return out;
}

PeriodStructure constructive_structure(const SkeletonTower& t, std::size_t k) {
  if (k < 1) throw ArgumentError("constructive_structure: need k >= 1");
  PeriodStructure out;

  const auto certified = [&](std::int64_t j) -> std::uint64_t {
    const PositionPeriod pp = position_period(t, j);
    if (!pp.determined()) throw IncompleteTower(j, t.depth());
    return *pp.period;
  };
  const auto check_essential = [&](const Int& p, std::size_t index) {
    if (p > std::numeric_limits<std::uint64_t>::max())
      throw StructureInvariantViolation(
          "structure period exceeds addressable range");
    if (!is_essential_period(t, static_cast<std::uint64_t>(p)))
      throw StructureInvariantViolation(
          "p_" + std::to_string(index) + " = " + p.str() +
          " is not an essential period");
  };

  out.periods.push_back(Int(certified(0)));
  check_essential(out.periods[0], 1);
  for (std::size_t i = 1; i < k; ++i) {
    const Int& prev = out.periods.back();
    const auto block = static_cast<std::uint64_t>(prev);
    Int next = 1;
    for (std::uint64_t j = 0; j < block; ++j)
      next = lcm(next, Int(certified(static_cast<std::int64_t>(j))));
    if (next <= prev || next % prev != 0)
      throw StructureInvariantViolation(
          "structure is not strictly increasing/dividing at index " +
          std::to_string(i + 1) + ": " + prev.str() + " -> " + next.str());
    check_essential(next, i + 1);
    out.periods.push_back(next);
  }
  out.constructive = true;
  return out;
}

bool toeplitz_window_check(const Word& w, std::size_t max_period) {
  const std::size_t n = w.size();
  if (n == 0) return true;
  std::vector<bool> covered(n, false);
  std::size_t remaining = n;
  for (std::size_t d = 1; d <= max_period && remaining > 0; ++d) {
    for (std::size_t r = 0; r < d && r < n; ++r) {
      const Symbol first = w[r];
      bool mono = true;
      for (std::size_t m = r; m < n; m += d)
        if (w[m] != first) {
          mono = false;
          break;
        }
      if (!mono) continue;
      for (std::size_t m = r; m < n; m += d)
        if (!covered[m]) {
          covered[m] = true;
          --remaining;
        }
    }
  }
  return remaining == 0;
}

}  // namespace tbv
