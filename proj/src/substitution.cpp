#include "tbv/substitution.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace tbv {

Substitution::Substitution(Alphabet alphabet, std::vector<Word> images)
    : alphabet_(std::move(alphabet)), images_(std::move(images)), length_(0) {
  if (images_.size() != alphabet_.size())
    throw ArgumentError("substitution needs one image per alphabet symbol");
  length_ = images_.front().size();
  if (length_ < 2)
    throw ArgumentError("constant-length substitution needs length >= 2");
  for (const Word& w : images_) {
    if (w.size() != length_)
      throw ArgumentError("all images must have equal length");
    alphabet_.require_word(w);
  }
}

Substitution Substitution::from_map(const Alphabet& alphabet,
                                    const std::map<Symbol, Word>& images) {
  std::vector<Word> ordered;
  ordered.reserve(alphabet.size());
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    auto it = images.find(alphabet.at(i));
    if (it == images.end())
      throw ArgumentError(std::string("missing image for symbol '") +
                          alphabet.at(i) + "'");
    ordered.push_back(it->second);
  }
  if (images.size() != alphabet.size())
    throw ArgumentError("image map mentions symbols outside the alphabet");
  return Substitution(alphabet, std::move(ordered));
}

Word Substitution::apply(const Word& w) const {
  Word out;
  out.reserve(w.size() * length_);
  for (Symbol a : w) out += image(a);
  return out;
}

ColumnFunction ColumnFunction::column_of(const Substitution& theta,
                                         std::size_t j) {
  if (j >= theta.length())
    throw ArgumentError("column index out of range");
  std::vector<std::uint8_t> table(theta.alphabet().size());
  for (std::size_t a = 0; a < table.size(); ++a)
    table[a] = static_cast<std::uint8_t>(
        theta.alphabet().index_of(theta.images()[a][j]));
  return ColumnFunction(std::move(table));
}

ColumnFunction ColumnFunction::compose_after(const ColumnFunction& other) const {
  std::vector<std::uint8_t> table(other.table_.size());
  for (std::size_t a = 0; a < table.size(); ++a)
    table[a] = table_.at(other.table_[a]);
  return ColumnFunction(std::move(table));
}

std::optional<std::uint8_t> ColumnFunction::constant_value() const {
  for (std::size_t a = 1; a < table_.size(); ++a)
    if (table_[a] != table_[0]) return std::nullopt;
  return table_[0];
}

Coding::Coding(Alphabet source, Alphabet target, std::map<Symbol, Symbol> mapping)
    : source_(std::move(source)),
      target_(std::move(target)),
      mapping_(std::move(mapping)) {
  for (std::size_t i = 0; i < source_.size(); ++i)
    if (!mapping_.count(source_.at(i)))
      throw ArgumentError(std::string("coding not total: missing '") +
                          source_.at(i) + "'");
  for (const auto& [from, to] : mapping_) {
    if (!source_.contains(from))
      throw AlphabetError(std::string("coding key '") + from +
                          "' not in source alphabet");
    if (!target_.contains(to))
      throw AlphabetError(std::string("coding value '") + to +
                          "' not in target alphabet");
  }
}

Symbol Coding::apply(Symbol a) const {
  auto it = mapping_.find(a);
  if (it == mapping_.end())
    throw AlphabetError(std::string("coding: symbol '") + a + "' unmapped");
  return it->second;
}

Word Coding::apply(const Word& w) const {
  Word out;
  out.reserve(w.size());
  for (Symbol a : w) out.push_back(apply(a));
  return out;
}

bool Coding::surjective() const {
  for (std::size_t i = 0; i < target_.size(); ++i) {
    const Symbol want = target_.at(i);
    bool hit = false;
    for (const auto& [from, to] : mapping_)
      if (to == want) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

SlidingBlockCode::SlidingBlockCode(std::size_t radius, std::map<Word, Symbol> rule)
    : radius_(radius), rule_(std::move(rule)) {
  const std::size_t want = 2 * radius_ + 1;
  for (const auto& entry : rule_)
    if (entry.first.size() != want)
      throw ArgumentError("sliding block code: window \"" + entry.first +
                          "\" does not have length " + std::to_string(want));
}

SlidingBlockCode SlidingBlockCode::from_coding(const Coding& coding) {
  std::map<Word, Symbol> rule;
  for (std::size_t i = 0; i < coding.source().size(); ++i) {
    const Symbol a = coding.source().at(i);
    rule[Word(1, a)] = coding.apply(a);
  }
  return SlidingBlockCode(0, std::move(rule));
}

Symbol SlidingBlockCode::apply_window(const Word& window) const {
  auto it = rule_.find(window);
  if (it == rule_.end()) throw PartialCodeError(window);
  return it->second;
}

Word SlidingBlockCode::apply(const Word& w) const {
  const std::size_t span = 2 * radius_ + 1;
  Word out;
  if (w.size() < span) return out;
  out.reserve(w.size() - 2 * radius_);
  for (std::size_t j = 0; j + span <= w.size(); ++j)
    out.push_back(apply_window(w.substr(j, span)));
  return out;
}

bool is_primitive(const Substitution& theta) {
  const std::size_t n = theta.alphabet().size();
  // Boolean incidence: reach[a][b] = b occurs in theta(a).
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a)
    for (Symbol s : theta.images()[a])
      reach[a][theta.alphabet().index_of(s)] = true;

  const auto all_positive = [&](const std::vector<std::vector<bool>>& m) {
    for (const auto& row : m)
      for (bool v : row)
        if (!v) return false;
    return true;
  };

  std::vector<std::vector<bool>> power = reach;
  const std::size_t bound = (n - 1) * (n - 1) + 1;  // Wielandt
  for (std::size_t k = 1; k <= bound; ++k) {
    if (all_positive(power)) return true;
    std::vector<std::vector<bool>> next(n, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        if (!power[a][b]) continue;
        for (std::size_t c = 0; c < n; ++c)
          if (reach[b][c]) next[a][c] = true;
      }
    power = std::move(next);
  }
  return all_positive(power);
}

std::optional<CoincidenceWitness> has_coincidence(const Substitution& theta) {
  const std::size_t ell = theta.length();
  std::vector<ColumnFunction> generators;
  generators.reserve(ell);
  for (std::size_t j = 0; j < ell; ++j)
    generators.push_back(ColumnFunction::column_of(theta, j));

  // BFS over the composition semigroup, stratified by word length. Elements
  // are deduplicated, which keeps the search within |A|^|A| states while
  // still finding the least (n, i): a constant reachable at depth n through
  // an already-seen shorter function would have been found earlier.
  struct Node {
    ColumnFunction fn;
    std::vector<std::uint8_t> digits;  // most significant first
  };
  std::set<std::vector<std::uint8_t>> seen;
  std::deque<Node> queue;

  const auto witness_of = [&](const Node& node) {
    CoincidenceWitness w;
    w.power = static_cast<unsigned>(node.digits.size());
    Int index = 0;
    for (std::uint8_t d : node.digits) index = index * ell + d;
    w.column = index;
    return w;
  };

  for (std::size_t d = 0; d < ell; ++d) {
    Node node{generators[d], {static_cast<std::uint8_t>(d)}};
    if (node.fn.constant_value()) return witness_of(node);
    if (seen.insert(node.fn.table()).second) queue.push_back(std::move(node));
  }
  while (!queue.empty()) {
    Node node = std::move(queue.front());
    queue.pop_front();
    for (std::size_t d = 0; d < ell; ++d) {
      Node child{generators[d].compose_after(node.fn), node.digits};
      child.digits.push_back(static_cast<std::uint8_t>(d));
      if (child.fn.constant_value()) return witness_of(child);
      if (seen.insert(child.fn.table()).second) queue.push_back(std::move(child));
    }
  }
  return std::nullopt;
}

Word fixed_point_prefix(const Substitution& theta, Symbol seed,
                        std::size_t length) {
  const Word& image = theta.image(seed);
  if (image.front() != seed)
    throw SeedError(std::string("theta('") + seed + "') does not start with '" +
                    seed + "'");
  Word w(1, seed);
  while (w.size() < length) w = theta.apply(w);
  w.resize(length);
  return w;
}

SkeletonTower tower_from_substitution(const Substitution& theta,
                                      std::size_t depth) {
  if (!is_primitive(theta))
    throw NotToeplitz("substitution is not primitive");
  if (!has_coincidence(theta))
    throw NotToeplitz("substitution has no coincidence");

  const std::size_t ell = theta.length();
  const std::size_t n = theta.alphabet().size();

  std::uint64_t period = 1;
  for (std::size_t i = 0; i < depth; ++i) {
    if (period > (std::uint64_t{1} << 40) / ell)
      throw ArgumentError("tower depth too large to materialize");
    period *= ell;
  }

  std::vector<SkeletonTower::Stage> stages;
  std::vector<ColumnFunction> columns;  // columns of theta^i, starting at i=0
  {
    std::vector<std::uint8_t> identity(n);
    for (std::size_t b = 0; b < n; ++b) identity[b] = static_cast<std::uint8_t>(b);
    columns.emplace_back(std::move(identity));
  }

  std::vector<ColumnFunction> generators;
  for (std::size_t j = 0; j < ell; ++j)
    generators.push_back(ColumnFunction::column_of(theta, j));

  std::uint64_t p = 1;
  std::size_t prev_filled = 0;
  for (std::size_t i = 1; i <= depth; ++i) {
    std::vector<ColumnFunction> next;
    next.reserve(columns.size() * ell);
    for (const ColumnFunction& f : columns)
      for (std::size_t d = 0; d < ell; ++d)
        next.push_back(generators[d].compose_after(f));
    columns = std::move(next);
    p *= ell;

    std::string cells(columns.size(), PartialWord::kHole);
    std::size_t filled = 0;
    for (std::size_t j = 0; j < columns.size(); ++j)
      if (auto c = columns[j].constant_value()) {
        cells[j] = theta.alphabet().at(*c);
        ++filled;
      }
    if (filled == columns.size())
      throw NotToeplitz("fixed point is periodic (stage " + std::to_string(i) +
                        " fully determined)");
    if (filled == prev_filled * ell && prev_filled > 0)
      throw NotToeplitz("determined positions stalled at stage " +
                        std::to_string(i) + "; orbit is not Toeplitz");
    prev_filled = filled;
    stages.push_back({p, PartialWord(std::move(cells))});
  }
  return SkeletonTower(theta.alphabet(), std::move(stages));
}

}  // namespace tbv
