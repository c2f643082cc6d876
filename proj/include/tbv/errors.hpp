#ifndef TBV_ERRORS_HPP
#define TBV_ERRORS_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tbv {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed argument (empty list, out-of-range index, bad cut set, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A symbol does not belong to the expected alphabet.
class AlphabetError : public Error {
 public:
  using Error::Error;
};

/// A requested position is not determined at the tower's current depth.
/// Callers are expected to deepen the tower and retry.
class IncompleteTower : public Error {
 public:
  IncompleteTower(std::int64_t position, std::size_t depth)
      : Error("position " + std::to_string(position) +
              " is not filled at tower depth " + std::to_string(depth)),
        position_(position),
        depth_(depth) {}

  std::int64_t position() const noexcept { return position_; }
  std::size_t depth() const noexcept { return depth_; }

 private:
  std::int64_t position_;
  std::size_t depth_;
};

/// A structural invariant of a tower or period structure failed; signals a
/// bug or a non-Toeplitz input.
class StructureInvariantViolation : public Error {
 public:
  using Error::Error;
};

/// The substitution orbit cannot be Toeplitz (no coincidence, or periodic).
class NotToeplitz : public Error {
 public:
  using Error::Error;
};

/// The fixed-point seed is invalid: theta(a) does not start with a.
class SeedError : public Error {
 public:
  using Error::Error;
};

/// A sliding block code is missing an entry for a window that occurs.
class PartialCodeError : public Error {
 public:
  explicit PartialCodeError(const std::string& window)
      : Error("sliding block code has no entry for window \"" + window + "\""),
        window_(window) {}

  const std::string& window() const noexcept { return window_; }

 private:
  std::string window_;
};

/// A min/max path prefix is not uniquely determined at the given level.
class ImproperOrder : public Error {
 public:
  ImproperOrder(std::size_t level, std::size_t candidates)
      : Error("minimal/maximal path not unique at level " +
              std::to_string(level) + " (" + std::to_string(candidates) +
              " candidates)"),
        level_(level),
        candidates_(candidates) {}

  std::size_t level() const noexcept { return level_; }
  std::size_t candidates() const noexcept { return candidates_; }

 private:
  std::size_t level_;
  std::size_t candidates_;
};

/// A diagram surgery could not be carried out on the given input.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// optimal_levels could not reach the required divisibility within depth.
class UnreachableLevel : public Error {
 public:
  explicit UnreachableLevel(std::size_t index)
      : Error("no level within depth satisfies the divisibility for index " +
              std::to_string(index)),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Malformed input file or inline grammar.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace tbv

#endif  // TBV_ERRORS_HPP
