#include "tbv/words.hpp"

#include <algorithm>
#include <numeric>

namespace tbv {

Alphabet::Alphabet(std::string_view symbols) : symbols_(symbols) {
  if (symbols_.empty()) throw AlphabetError("alphabet must be nonempty");
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i] == PartialWord::kHole)
      throw AlphabetError("'*' is reserved for holes");
    for (std::size_t j = i + 1; j < symbols_.size(); ++j)
      if (symbols_[i] == symbols_[j])
        throw AlphabetError(std::string("duplicate symbol '") + symbols_[i] +
                            "'");
  }
}

bool Alphabet::contains(Symbol s) const noexcept {
  return symbols_.find(s) != std::string::npos;
}

std::size_t Alphabet::index_of(Symbol s) const {
  auto pos = symbols_.find(s);
  if (pos == std::string::npos)
    throw AlphabetError(std::string("symbol '") + s + "' not in alphabet \"" +
                        symbols_ + "\"");
  return pos;
}

void Alphabet::require_word(const Word& w) const {
  for (Symbol s : w)
    if (!contains(s))
      throw AlphabetError(std::string("symbol '") + s + "' not in alphabet \"" +
                          symbols_ + "\"");
}

PartialWord::PartialWord(std::string cells) : cells_(std::move(cells)) {
  if (cells_.empty()) throw ArgumentError("partial word must have length >= 1");
}

std::size_t PartialWord::filled_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(),
                    [](Symbol c) { return c != kHole; }));
}

bool word_has_period(const Word& w, std::size_t d) {
  if (d < 1 || d > w.size())
    throw ArgumentError("word_has_period: need 1 <= d <= |w|");
  for (std::size_t j = 0; j + d < w.size(); ++j)
    if (w[j] != w[j + d]) return false;
  return true;
}

bool partial_periodic(const PartialWord& pw, std::size_t d) {
  if (d < 1) throw ArgumentError("partial_periodic: need d >= 1");
  const std::size_t p = pw.length();
  const std::size_t window = std::lcm(d, p);
  // One lcm window covers every residue class mod d of the extension.
  for (std::size_t j = 0; j < window; ++j)
    if (pw.cell(j % p) != pw.cell((j + d) % p)) return false;
  return true;
}

std::size_t min_period_partial(const PartialWord& pw) {
  const std::size_t p = pw.length();
  for (std::size_t d = 1; d <= p; ++d) {
    if (!partial_periodic(pw, d)) continue;
    // Periods of Z-indexed sequences are gcd-closed, so the minimum must
    // divide p; anything else is a bug.
    if (p % d != 0)
      throw StructureInvariantViolation(
          "min period " + std::to_string(d) + " does not divide length " +
          std::to_string(p));
    return d;
  }
  return p;  // unreachable: d = p always satisfies partial_periodic
}

}  // namespace tbv
