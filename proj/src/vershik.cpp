#include "tbv/vershik.hpp"

#include <set>
#include <string>

namespace tbv {
namespace {

void check_prefix(const OrderedBratteliDiagram& d, const PathPrefix& p) {
  if (p.depth() < 1 || p.depth() > d.depth())
    throw ArgumentError("path prefix depth out of range");
  if (p.top_vertex >= d.level_size(p.depth()))
    throw ArgumentError("path prefix vertex out of range");
}

/// The level-k vertex the (virtual) minimal/maximal path passes through.
VertexId extreme_vertex(const OrderedBratteliDiagram& d, std::size_t k,
                        bool minimal) {
  if (k < d.depth()) {
    const auto& above = d.theta(k + 1);
    std::set<VertexId> sources;
    for (const VertexWord& w : above) {
      if (w.empty()) throw ArgumentError("empty source word above level " +
                                         std::to_string(k));
      sources.insert(minimal ? w.front() : w.back());
    }
    if (sources.size() == 1) return *sources.begin();
    if (minimal)
      if (const auto mark = d.min_mark(k)) return *mark;
    throw ImproperOrder(k, sources.size());
  }
  if (d.level_size(k) == 1) return 0;
  if (minimal)
    if (const auto mark = d.min_mark(k)) return *mark;
  throw ImproperOrder(k, d.level_size(k));
}

}  // namespace

std::vector<VertexId> vertex_chain(const OrderedBratteliDiagram& d,
                                   const PathPrefix& p) {
  check_prefix(d, p);
  std::vector<VertexId> chain(p.depth());
  chain.back() = p.top_vertex;
  for (std::size_t i = p.depth(); i >= 1; --i) {
    const VertexWord& w = d.theta_word(i, chain[i - 1]);
    if (p.edges[i - 1] >= w.size())
      throw ArgumentError("edge index out of range at level " + std::to_string(i));
    if (i >= 2) chain[i - 2] = w[p.edges[i - 1]];
  }
  return chain;
}

PathPrefix min_prefix(const OrderedBratteliDiagram& d, std::size_t k) {
  if (k < 1 || k > d.depth()) throw ArgumentError("min_prefix: bad depth");
  PathPrefix p;
  p.top_vertex = extreme_vertex(d, k, true);
  p.edges.assign(k, 0);
  return p;
}

PathPrefix max_prefix(const OrderedBratteliDiagram& d, std::size_t k) {
  if (k < 1 || k > d.depth()) throw ArgumentError("max_prefix: bad depth");
  PathPrefix p;
  p.top_vertex = extreme_vertex(d, k, false);
  p.edges.resize(k);
  VertexId v = p.top_vertex;
  for (std::size_t i = k; i >= 1; --i) {
    const VertexWord& w = d.theta_word(i, v);
    p.edges[i - 1] = static_cast<std::uint32_t>(w.size() - 1);
    v = w.back();
  }
  return p;
}

std::optional<PathPrefix> successor(const OrderedBratteliDiagram& d,
                                    const PathPrefix& p) {
  const auto chain = vertex_chain(d, p);
  std::size_t carry = 0;  // first level whose edge is not maximal
  while (carry < p.depth()) {
    const VertexWord& w = d.theta_word(carry + 1, chain[carry]);
    if (p.edges[carry] + 1 < w.size()) break;
    ++carry;
  }
  if (carry == p.depth()) return std::nullopt;  // AtMaximum

  PathPrefix next = p;
  next.edges[carry] += 1;
  // reset lower edges to minimal within the new context
  VertexId v = d.theta_word(carry + 1, chain[carry])[next.edges[carry]];
  for (std::size_t i = carry; i >= 1; --i) {
    next.edges[i - 1] = 0;
    if (i >= 2) v = d.theta_word(i, v)[0];
  }
  return next;
}

namespace {

std::vector<std::vector<std::uint64_t>> counts_below(
    const OrderedBratteliDiagram& d, std::size_t k) {
  std::vector<std::vector<std::uint64_t>> by_level;
  for (std::size_t i = 0; i < k; ++i) by_level.push_back(path_counts(d, i));
  return by_level;
}

TruncatedPath truncate_with_counts(
    const OrderedBratteliDiagram& d, const PathPrefix& p, std::size_t k,
    const std::vector<std::vector<std::uint64_t>>& counts) {
  const auto chain = vertex_chain(d, p);
  std::uint64_t height = 0;
  for (std::size_t i = 1; i <= k; ++i) {
    const VertexWord& w = d.theta_word(i, chain[i - 1]);
    for (std::uint32_t c = 0; c < p.edges[i - 1]; ++c)
      height += counts[i - 1][w[c]];
  }
  return {chain[k - 1], height};
}

}  // namespace

TruncatedPath truncate(const OrderedBratteliDiagram& d, const PathPrefix& p,
                       std::size_t k) {
  if (k < 1 || k > p.depth()) throw ArgumentError("truncate: bad level");
  return truncate_with_counts(d, p, k, counts_below(d, k));
}

PathPrefix prefix_from_truncation(const OrderedBratteliDiagram& d,
                                  std::size_t k, const TruncatedPath& tp) {
  if (k < 1 || k > d.depth())
    throw ArgumentError("prefix_from_truncation: bad level");
  PathPrefix p;
  p.top_vertex = tp.vertex;
  p.edges.assign(k, 0);
  VertexId v = tp.vertex;
  std::uint64_t h = tp.height;
  for (std::size_t i = k; i >= 1; --i) {
    const VertexWord& w = d.theta_word(i, v);
    const auto below = path_counts(d, i - 1);
    std::uint32_t c = 0;
    while (c < w.size() && h >= below[w[c]]) {
      h -= below[w[c]];
      ++c;
    }
    if (c == w.size())
      throw ArgumentError("truncation height exceeds the tower");
    p.edges[i - 1] = c;
    v = w[c];
  }
  return p;
}

OrbitWord orbit_word(const OrderedBratteliDiagram& d, const PathPrefix& start,
                     std::size_t length, std::size_t k) {
  if (length > 0 && (k < 1 || k > start.depth()))
    throw ArgumentError("orbit_word: truncation level out of range");
  OrbitWord out;
  out.level = k;
  if (length == 0) return out;
  const auto counts = counts_below(d, k);  // heights once per orbit
  PathPrefix current = start;
  for (std::size_t n = 0; n < length; ++n) {
    out.entries.push_back(truncate_with_counts(d, current, k, counts));
    if (n + 1 == length) break;
    auto next = successor(d, current);
    if (!next) {
      out.truncated_at = n + 1;
      return out;
    }
    current = std::move(*next);
  }
  return out;
}

Symbol read_letter(const OrderedBratteliDiagram& d, const PathPrefix& p) {
  check_prefix(d, p);
  const auto chain = vertex_chain(d, p);
  const std::string& block = d.label(1, chain[0]);
  if (block.empty())
    throw ArgumentError("read_letter: diagram has no level-1 block labels");
  if (p.edges[0] >= block.size())
    throw ArgumentError("read_letter: root edge index exceeds the block");
  return block[p.edges[0]];
}

RoundtripReport roundtrip(const OrderedBratteliDiagram& d,
                          const SkeletonTower& t, std::size_t length) {
  const Word expected = fill_prefix(t, length);
  PathPrefix p = min_prefix(d, d.depth());
  RoundtripReport report;
  for (std::size_t n = 0; n < length; ++n) {
    if (read_letter(d, p) != expected[n]) {
      report.first_mismatch = n;
      return report;
    }
    if (n + 1 == length) break;
    auto next = successor(d, p);
    if (!next) {
      report.first_mismatch = n + 1;
      return report;
    }
    p = std::move(*next);
  }
  report.ok = true;
  return report;
}

TruncatedPath truncation_code(const OrderedBratteliDiagram& d, std::size_t k,
                              const TruncatedPath& deeper) {
  if (k < 1 || k + 1 > d.depth())
    throw ArgumentError("truncation_code: level out of range");
  const VertexWord& w = d.theta_word(k + 1, deeper.vertex);
  const auto below = path_counts(d, k);
  std::uint64_t h = deeper.height;
  for (VertexId source : w) {
    if (h < below[source]) return {source, h};
    h -= below[source];
  }
  throw ArgumentError("truncation height exceeds the tower");
}

OrbitWord truncation_code(const OrderedBratteliDiagram& d, std::size_t k,
                          const OrbitWord& deeper) {
  if (deeper.level != k + 1)
    throw ArgumentError("truncation_code: orbit word is not at level k+1");
  OrbitWord out;
  out.level = k;
  out.truncated_at = deeper.truncated_at;
  for (const TruncatedPath& tp : deeper.entries)
    out.entries.push_back(truncation_code(d, k, tp));
  return out;
}

}  // namespace tbv
