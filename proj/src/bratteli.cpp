#include "tbv/bratteli.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace tbv {

OrderedBratteliDiagram::OrderedBratteliDiagram(
    std::vector<std::vector<std::string>> names,
    std::vector<std::vector<VertexWord>> words)
    : names_(std::move(names)), words_(std::move(words)) {
  if (names_.empty()) throw ArgumentError("diagram needs at least the root level");
  if (words_.size() + 1 != names_.size())
    throw ArgumentError("need exactly one source-word table per level >= 1");
  if (names_[0].size() != 1)
    throw ArgumentError("level 0 must be the singleton root");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty())
      throw ArgumentError("level " + std::to_string(i) + " is empty");
    std::set<std::string> unique(names_[i].begin(), names_[i].end());
    if (unique.size() != names_[i].size())
      throw ArgumentError("duplicate vertex name at level " + std::to_string(i));
  }
  for (std::size_t i = 1; i < names_.size(); ++i) {
    const auto& table = words_[i - 1];
    if (table.size() != names_[i].size())
      throw ArgumentError("level " + std::to_string(i) +
                          ": one source word per vertex required");
    for (const VertexWord& w : table)
      for (VertexId v : w)
        if (v >= names_[i - 1].size())
          throw ArgumentError("level " + std::to_string(i) +
                              ": source index out of range");
  }
  labels_.resize(names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i)
    labels_[i].assign(names_[i].size(), "");
  min_marks_.assign(names_.size(), std::nullopt);
}

const std::vector<std::string>& OrderedBratteliDiagram::level_names(
    std::size_t i) const {
  if (i >= names_.size())
    throw ArgumentError("level " + std::to_string(i) + " out of range");
  return names_[i];
}

const std::string& OrderedBratteliDiagram::name(std::size_t i, VertexId v) const {
  return level_names(i).at(v);
}

std::optional<VertexId> OrderedBratteliDiagram::find_vertex(
    std::size_t i, const std::string& name) const {
  const auto& lv = level_names(i);
  for (std::size_t v = 0; v < lv.size(); ++v)
    if (lv[v] == name) return static_cast<VertexId>(v);
  return std::nullopt;
}

const std::vector<VertexWord>& OrderedBratteliDiagram::theta(std::size_t i) const {
  if (i < 1 || i > words_.size())
    throw ArgumentError("theta level " + std::to_string(i) + " out of range");
  return words_[i - 1];
}

const VertexWord& OrderedBratteliDiagram::theta_word(std::size_t i,
                                                     VertexId v) const {
  return theta(i).at(v);
}

bool OrderedBratteliDiagram::has_labels() const noexcept {
  for (const auto& lv : labels_)
    for (const auto& s : lv)
      if (!s.empty()) return true;
  return false;
}

const std::string& OrderedBratteliDiagram::label(std::size_t i, VertexId v) const {
  if (i >= labels_.size()) throw ArgumentError("label level out of range");
  return labels_[i].at(v);
}

std::optional<VertexId> OrderedBratteliDiagram::min_mark(std::size_t i) const {
  if (i >= min_marks_.size()) throw ArgumentError("mark level out of range");
  return min_marks_[i];
}

OrderedBratteliDiagram& OrderedBratteliDiagram::set_label(std::size_t i,
                                                          VertexId v,
                                                          std::string label) {
  if (i >= labels_.size() || v >= labels_[i].size())
    throw ArgumentError("label target out of range");
  labels_[i][v] = std::move(label);
  return *this;
}

OrderedBratteliDiagram& OrderedBratteliDiagram::set_min_mark(std::size_t i,
                                                             VertexId v) {
  if (i >= min_marks_.size() || v >= names_[i].size())
    throw ArgumentError("mark target out of range");
  min_marks_[i] = v;
  return *this;
}

std::vector<DiagramDiagnostic> validate(const OrderedBratteliDiagram& d) {
  std::vector<DiagramDiagnostic> out;
  for (std::size_t i = 1; i <= d.depth(); ++i) {
    const auto& table = d.theta(i);
    std::vector<bool> used(d.level_size(i - 1), false);
    for (std::size_t v = 0; v < table.size(); ++v) {
      if (table[v].empty())
        out.push_back({DiagramDiagnostic::Kind::EmptyRange, i,
                       static_cast<VertexId>(v),
                       "vertex " + d.name(i, static_cast<VertexId>(v)) +
                           " at level " + std::to_string(i) +
                           " has no incoming edges"});
      for (VertexId w : table[v]) used[w] = true;
    }
    for (std::size_t w = 0; w < used.size(); ++w)
      if (!used[w])
        out.push_back({DiagramDiagnostic::Kind::DeadSource, i - 1,
                       static_cast<VertexId>(w),
                       "vertex " + d.name(i - 1, static_cast<VertexId>(w)) +
                           " at level " + std::to_string(i - 1) +
                           " sources no edge into level " + std::to_string(i)});
  }
  return out;
}

AdjacencyMatrix adjacency_matrix(const OrderedBratteliDiagram& d, std::size_t i) {
  const auto& table = d.theta(i);
  AdjacencyMatrix m(table.size(),
                    std::vector<std::uint64_t>(d.level_size(i - 1), 0));
  for (std::size_t v = 0; v < table.size(); ++v)
    for (VertexId w : table[v]) ++m[v][w];
  return m;
}

ErsReport is_ers(const OrderedBratteliDiagram& d) {
  ErsReport report;
  report.ers = true;
  for (std::size_t i = 1; i <= d.depth(); ++i) {
    const auto& table = d.theta(i);
    const std::uint64_t sum = table.front().size();
    for (const VertexWord& w : table)
      if (w.size() != sum) {
        report.ers = false;
        report.first_violation = i;
        return report;
      }
    report.row_sums.push_back(sum);
  }
  return report;
}

SimplicityReport is_simple(const OrderedBratteliDiagram& d) {
  SimplicityReport report;
  report.shallow = d.depth() < 2;
  if (report.shallow) {
    report.simple = true;  // vacuous
    report.covered_depth = d.depth();
    return report;
  }
  // Greedy windows over levels 2..K (the root-level matrix is always
  // positive and proves nothing).
  std::size_t start = 2;
  while (start <= d.depth()) {
    // product over [start..end], boolean semiring
    std::vector<std::vector<bool>> prod;
    bool closed = false;
    for (std::size_t end = start; end <= d.depth(); ++end) {
      const AdjacencyMatrix m = adjacency_matrix(d, end);
      if (end == start) {
        prod.assign(m.size(), std::vector<bool>(m.front().size(), false));
        for (std::size_t a = 0; a < m.size(); ++a)
          for (std::size_t b = 0; b < m[a].size(); ++b) prod[a][b] = m[a][b] > 0;
      } else {
        std::vector<std::vector<bool>> next(
            m.size(), std::vector<bool>(prod.front().size(), false));
        for (std::size_t a = 0; a < m.size(); ++a)
          for (std::size_t b = 0; b < m[a].size(); ++b) {
            if (!m[a][b]) continue;
            for (std::size_t c = 0; c < prod[b].size(); ++c)
              if (prod[b][c]) next[a][c] = true;
          }
        prod = std::move(next);
      }
      bool positive = true;
      for (const auto& row : prod)
        for (bool x : row)
          if (!x) {
            positive = false;
            break;
          }
      if (positive) {
        report.windows.emplace_back(start, end);
        report.covered_depth = end;
        start = end + 1;
        closed = true;
        break;
      }
    }
    if (!closed) break;  // ran out of levels mid-window
  }
  report.simple = !report.windows.empty();
  return report;
}

std::vector<VertexWord> compose(const OrderedBratteliDiagram& d, std::size_t i,
                                std::size_t j) {
  if (i >= j || j > d.depth())
    throw ArgumentError("compose: need 0 <= i < j <= depth");
  std::vector<VertexWord> acc = d.theta(j);
  for (std::size_t level = j - 1; level > i; --level) {
    const auto& table = d.theta(level);
    std::vector<VertexWord> next(acc.size());
    for (std::size_t v = 0; v < acc.size(); ++v)
      for (VertexId w : acc[v])
        next[v].insert(next[v].end(), table[w].begin(), table[w].end());
    acc = std::move(next);
  }
  return acc;
}

OrderedBratteliDiagram telescope(const OrderedBratteliDiagram& d,
                                 const std::vector<std::size_t>& cut_levels) {
  if (cut_levels.empty()) throw ArgumentError("telescope: empty cut set");
  for (std::size_t t = 0; t < cut_levels.size(); ++t) {
    if (cut_levels[t] < 1 || cut_levels[t] > d.depth())
      throw ArgumentError("telescope: cut level out of range");
    if (t > 0 && cut_levels[t] <= cut_levels[t - 1])
      throw ArgumentError("telescope: cuts must strictly increase");
  }
  std::vector<std::vector<std::string>> names{d.level_names(0)};
  std::vector<std::vector<VertexWord>> words;
  std::size_t prev = 0;
  for (std::size_t cut : cut_levels) {
    names.push_back(d.level_names(cut));
    words.push_back(compose(d, prev, cut));
    prev = cut;
  }
  OrderedBratteliDiagram out(std::move(names), std::move(words));
  for (std::size_t t = 0; t < cut_levels.size(); ++t) {
    const std::size_t src = cut_levels[t];
    for (std::size_t v = 0; v < d.level_size(src); ++v)
      if (!d.label(src, static_cast<VertexId>(v)).empty())
        out.set_label(t + 1, static_cast<VertexId>(v),
                      d.label(src, static_cast<VertexId>(v)));
    if (const auto mark = d.min_mark(src)) out.set_min_mark(t + 1, *mark);
  }
  return out;
}

std::pair<bool, bool> min_max_same_source(const OrderedBratteliDiagram& d,
                                          std::size_t i) {
  const auto& table = d.theta(i);
  for (const VertexWord& w : table)
    if (w.empty())
      throw ArgumentError("min_max_same_source: empty source word at level " +
                          std::to_string(i));
  bool min_same = true;
  bool max_same = true;
  for (const VertexWord& w : table) {
    if (w.front() != table.front().front()) min_same = false;
    if (w.back() != table.front().back()) max_same = false;
  }
  return {min_same, max_same};
}

std::vector<std::uint64_t> path_counts(const OrderedBratteliDiagram& d,
                                       std::size_t level) {
  if (level > d.depth()) throw ArgumentError("path_counts: level out of range");
  std::vector<std::uint64_t> h{1};
  for (std::size_t i = 1; i <= level; ++i) {
    const auto& table = d.theta(i);
    std::vector<std::uint64_t> next(table.size(), 0);
    for (std::size_t v = 0; v < table.size(); ++v)
      for (VertexId w : table[v]) next[v] += h[w];
    h = std::move(next);
  }
  return h;
}

TowerDiagramResult bv_from_tower(const SkeletonTower& t, std::size_t levels,
                                 std::size_t window) {
  if (levels < 1) throw ArgumentError("bv_from_tower: need at least one level");
  PeriodStructure structure = constructive_structure(t, levels);
  std::vector<std::uint64_t> periods;
  for (const Int& p : structure.periods)
    periods.push_back(static_cast<std::uint64_t>(p));
  const std::uint64_t top = periods.back();
  if (window == 0 || window % (2 * top) != 0)
    throw ArgumentError(
        "bv_from_tower: window must be a positive multiple of 2 * p_" +
        std::to_string(levels) + " = " + std::to_string(2 * top));

  const Word prefix = fill_prefix(t, window);

  const auto blocks_of = [&](std::uint64_t p, std::size_t upto) {
    std::vector<Word> distinct;
    for (std::size_t pos = 0; pos + p <= upto; pos += p) {
      Word b = prefix.substr(pos, p);
      if (std::find(distinct.begin(), distinct.end(), b) == distinct.end())
        distinct.push_back(std::move(b));
    }
    return distinct;  // in first-occurrence (grid) order
  };

  std::optional<std::string> warning;
  std::vector<std::vector<Word>> level_blocks;
  for (std::size_t n = 0; n < levels; ++n) {
    auto full = blocks_of(periods[n], window);
    auto half = blocks_of(periods[n], window / 2);
    if (full != half && !warning)
      warning = "vertex set at level " + std::to_string(n + 1) +
                " did not stabilize between windows " +
                std::to_string(window / 2) + " and " + std::to_string(window);
    level_blocks.push_back(std::move(full));
  }

  std::vector<std::vector<std::string>> names{{"root"}};
  for (const auto& blocks : level_blocks)
    names.emplace_back(blocks.begin(), blocks.end());

  std::vector<std::vector<VertexWord>> words;
  {
    // root edges: p_1 per level-1 vertex
    std::vector<VertexWord> theta1(level_blocks[0].size(),
                                   VertexWord(periods[0], 0));
    words.push_back(std::move(theta1));
  }
  for (std::size_t n = 1; n < levels; ++n) {
    const auto& below = level_blocks[n - 1];
    std::vector<VertexWord> table;
    for (const Word& block : level_blocks[n]) {
      VertexWord w;
      const std::uint64_t sub = periods[n - 1];
      for (std::uint64_t pos = 0; pos < periods[n]; pos += sub) {
        const Word piece = block.substr(pos, sub);
        const auto it = std::find(below.begin(), below.end(), piece);
        if (it == below.end())
          throw ConstructionError("sub-block \"" + piece +
                                  "\" missing at level " + std::to_string(n));
        w.push_back(static_cast<VertexId>(it - below.begin()));
      }
      table.push_back(std::move(w));
    }
    words.push_back(std::move(table));
  }

  OrderedBratteliDiagram diagram(std::move(names), std::move(words));
  for (std::size_t n = 0; n < levels; ++n) {
    for (std::size_t v = 0; v < level_blocks[n].size(); ++v)
      diagram.set_label(n + 1, static_cast<VertexId>(v), level_blocks[n][v]);
    // block 0 is the initial block B_n, the min-path source
    diagram.set_min_mark(n + 1, 0);
  }
  return {std::move(diagram), std::move(structure), std::move(warning)};
}

namespace {

std::uint64_t uniform_row_sum(const OrderedBratteliDiagram& d, std::size_t i) {
  const auto& table = d.theta(i);
  const std::uint64_t sum = table.front().size();
  for (const VertexWord& w : table)
    if (w.size() != sum)
      throw ArgumentError("level " + std::to_string(i) +
                          " does not have equal row sums");
  return sum;
}

std::string split_name(const OrderedBratteliDiagram& b, std::size_t old_level,
                       VertexId original, const VertexWord& linked) {
  std::string out = b.name(old_level, original) + "~";
  for (std::size_t k = 0; k < linked.size(); ++k) {
    if (k) out.push_back('.');
    out += std::to_string(linked[k]);
  }
  return out;
}

}  // namespace

SymbolSplitResult symbol_split(const OrderedBratteliDiagram& b,
                               const LevelMorphism& eta1,
                               std::uint64_t theta1_len, std::size_t ell) {
  const std::size_t n1 = eta1.source_level;
  if (theta1_len == 0) throw ArgumentError("symbol_split: |theta_1| must be > 0");
  if (n1 < 2 || n1 > b.depth())
    throw ArgumentError("symbol_split: morphism level out of range");
  if (ell < 1 || ell >= n1)
    throw ArgumentError("symbol_split: need 1 <= ell < n1");
  if (eta1.images.size() != b.level_size(n1))
    throw ArgumentError("symbol_split: one image per level-n1 vertex required");

  // |xi_(0,u]| for u = 0..n1; requires equal row sums up to n1
  std::vector<std::uint64_t> xi_prod(n1 + 1, 1);
  for (std::size_t u = 1; u <= n1; ++u)
    xi_prod[u] = xi_prod[u - 1] * uniform_row_sum(b, u);

  if (xi_prod[ell] % theta1_len != 0)
    throw ArgumentError("symbol_split: |theta_1| does not divide |xi_(0,ell]|");
  const std::uint64_t s = xi_prod[ell] / theta1_len;
  const std::uint64_t image_len = xi_prod[n1] / theta1_len;
  for (const VertexWord& img : eta1.images)
    if (img.size() != image_len)
      throw ArgumentError("symbol_split: image length must be |xi_(0,n1]| / |theta_1|");

  const std::size_t new_depth = b.depth() - ell + 1;
  const std::size_t top = n1 - ell + 1;  // new index of the old level n1

  // expansions of level-n1 vertices down to each affected old level
  std::vector<std::vector<VertexWord>> expansion(n1);  // [old_level] -> per w
  for (std::size_t u = ell; u < n1; ++u) expansion[u] = compose(b, u, n1);

  // For each new level t in 1..top-1 (built from old level t+ell-1), collect
  // the distinct linked words per original vertex, in first-occurrence order
  // over (top vertex id, occurrence index).
  std::vector<std::vector<SplitVertex>> provenance(top - 1);
  std::vector<std::map<std::pair<VertexId, VertexWord>, VertexId>> index(top - 1);
  for (std::size_t t = 1; t < top; ++t) {
    const std::size_t old_level = t + ell - 1;
    const std::uint64_t seg = s * (xi_prod[old_level] / xi_prod[ell]);
    for (std::size_t w = 0; w < b.level_size(n1); ++w) {
      const VertexWord& occurrences = expansion[old_level][w];
      const VertexWord& image = eta1.images[w];
      if (image.size() != occurrences.size() * seg)
        throw ConstructionError("symbol_split: segment length mismatch at vertex " +
                                b.name(n1, static_cast<VertexId>(w)));
      for (std::size_t occ = 0; occ < occurrences.size(); ++occ) {
        VertexWord linked(image.begin() + occ * seg,
                          image.begin() + (occ + 1) * seg);
        const auto key = std::make_pair(occurrences[occ], linked);
        if (!index[t - 1].count(key)) {
          index[t - 1][key] = static_cast<VertexId>(provenance[t - 1].size());
          provenance[t - 1].push_back({occurrences[occ], std::move(linked)});
        }
      }
    }
  }

  std::vector<std::vector<std::string>> names(new_depth + 1);
  std::vector<std::vector<VertexWord>> words(new_depth);
  names[0] = b.level_names(0);
  for (std::size_t t = 1; t < top; ++t) {
    const std::size_t old_level = t + ell - 1;
    for (const SplitVertex& sv : provenance[t - 1])
      names[t].push_back(split_name(b, old_level, sv.original, sv.linked_word));
  }
  for (std::size_t t = top; t <= new_depth; ++t)
    names[t] = b.level_names(t + ell - 1);

  // root edges of the new level 1: |xi_(0,ell]| = s * |theta_1| edges each
  words[0].assign(provenance[0].size(),
                  VertexWord(static_cast<std::size_t>(xi_prod[ell]), 0));

  // intermediate levels 2..top-1: wire chunk-wise through the level below
  for (std::size_t t = 2; t < top; ++t) {
    const std::size_t old_level = t + ell - 1;
    const std::uint64_t chunk = s * (xi_prod[old_level - 1] / xi_prod[ell]);
    for (const SplitVertex& sv : provenance[t - 1]) {
      const VertexWord& below = b.theta_word(old_level, sv.original);
      VertexWord w;
      for (std::size_t c = 0; c < below.size(); ++c) {
        VertexWord piece(sv.linked_word.begin() + c * chunk,
                         sv.linked_word.begin() + (c + 1) * chunk);
        const auto it = index[t - 2].find({below[c], piece});
        if (it == index[t - 2].end())
          throw ConstructionError("symbol_split: missing linked vertex below level " +
                                  std::to_string(t));
        w.push_back(it->second);
      }
      words[t - 1].push_back(std::move(w));
    }
  }

  // top level: old level n1 vertices, wired to the split level below
  {
    const std::uint64_t chunk = s * (xi_prod[n1 - 1] / xi_prod[ell]);
    for (std::size_t w0 = 0; w0 < b.level_size(n1); ++w0) {
      const VertexWord& below = b.theta_word(n1, static_cast<VertexId>(w0));
      const VertexWord& image = eta1.images[w0];
      VertexWord w;
      for (std::size_t c = 0; c < below.size(); ++c) {
        VertexWord piece(image.begin() + c * chunk,
                         image.begin() + (c + 1) * chunk);
        const auto it = index[top - 2].find({below[c], piece});
        if (it == index[top - 2].end())
          throw ConstructionError(
              "symbol_split: missing linked vertex under the morphism level");
        w.push_back(it->second);
      }
      words[top - 1].push_back(std::move(w));
    }
  }

  // untouched levels above n1, shifted down by ell-1
  for (std::size_t t = top + 1; t <= new_depth; ++t)
    words[t - 1] = b.theta(t + ell - 1);

  OrderedBratteliDiagram out(std::move(names), std::move(words));

  // path-count conservation at the first corresponding level (and hence,
  // levels above it are copied verbatim)
  {
    const auto before = path_counts(b, n1);
    const auto after = path_counts(out, top);
    if (before != after)
      throw ConstructionError("symbol_split: path counts not preserved");
  }

  LevelMorphism eta1_prime;
  eta1_prime.source_level = 1;
  eta1_prime.target_level = eta1.target_level;
  for (const SplitVertex& sv : provenance[0])
    eta1_prime.images.push_back(sv.linked_word);

  return {std::move(out), std::move(eta1_prime), std::move(provenance)};
}

InsertWordLevelResult insert_word_level(const OrderedBratteliDiagram& d,
                                        std::size_t i) {
  if (i < 2 || i > d.depth())
    throw ArgumentError("insert_word_level: need 2 <= i <= depth");
  const auto& table = d.theta(i);
  std::vector<VertexWord> distinct;
  std::vector<VertexId> representative(table.size());
  bool duplicate = false;
  for (std::size_t v = 0; v < table.size(); ++v) {
    const auto it = std::find(distinct.begin(), distinct.end(), table[v]);
    if (it == distinct.end()) {
      representative[v] = static_cast<VertexId>(distinct.size());
      distinct.push_back(table[v]);
    } else {
      representative[v] = static_cast<VertexId>(it - distinct.begin());
      duplicate = true;
    }
  }
  if (!duplicate) return {d, false, 0};

  std::vector<std::vector<std::string>> names;
  std::vector<std::vector<VertexWord>> words;
  for (std::size_t u = 0; u < i; ++u) names.push_back(d.level_names(u));
  {
    std::vector<std::string> inserted;
    for (const VertexWord& w : distinct) {
      std::string n;
      for (std::size_t k = 0; k < w.size(); ++k) {
        if (k) n.push_back('.');
        n += d.name(i - 1, w[k]);
      }
      inserted.push_back(std::move(n));
    }
    names.push_back(std::move(inserted));
  }
  for (std::size_t u = i; u <= d.depth(); ++u) names.push_back(d.level_names(u));

  for (std::size_t u = 1; u < i; ++u) words.push_back(d.theta(u));
  words.push_back(distinct);  // new level sources its own word
  {
    std::vector<VertexWord> single(table.size());
    for (std::size_t v = 0; v < table.size(); ++v)
      single[v] = VertexWord{representative[v]};
    words.push_back(std::move(single));
  }
  for (std::size_t u = i + 1; u <= d.depth(); ++u) words.push_back(d.theta(u));

  OrderedBratteliDiagram out(std::move(names), std::move(words));
  // carry labels/marks across the shift
  for (std::size_t u = 0; u <= d.depth(); ++u) {
    const std::size_t dest = u < i ? u : u + 1;
    for (std::size_t v = 0; v < d.level_size(u); ++v)
      if (!d.label(u, static_cast<VertexId>(v)).empty())
        out.set_label(dest, static_cast<VertexId>(v),
                      d.label(u, static_cast<VertexId>(v)));
    if (const auto mark = d.min_mark(u)) out.set_min_mark(dest, *mark);
  }
  if (const auto mark = d.min_mark(i))
    out.set_min_mark(i, representative[*mark]);
  return {std::move(out), true, i};
}

}  // namespace tbv
