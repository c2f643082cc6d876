#ifndef TBV_VERSHIK_HPP
#define TBV_VERSHIK_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "tbv/bratteli.hpp"

namespace tbv {

/**
 * Finite initial path from the root: edge order indices (e_1, ..., e_k) plus
 * the level-k vertex reached. The vertex chain below is implied: the level
 * (i-1) vertex is theta_i(v_i)[e_i]. Infinite paths never materialize; every
 * statement about minimal paths is made at finite depth.
 */
struct PathPrefix {
  std::vector<std::uint32_t> edges;
  VertexId top_vertex = 0;

  std::size_t depth() const noexcept { return edges.size(); }
  bool operator==(const PathPrefix& other) const = default;
};

/// Vertices visited by a prefix, level k down to level 0 implied; chain[i]
/// is the vertex at level i+1 (chain.back() == top_vertex).
std::vector<VertexId> vertex_chain(const OrderedBratteliDiagram& d,
                                   const PathPrefix& p);

/// All-minimal (all-maximal) prefix of depth k. The level-k vertex is pinned
/// by the same-source condition at level k+1, or by the diagram's min mark;
/// otherwise ImproperOrder reports the number of candidates.
PathPrefix min_prefix(const OrderedBratteliDiagram& d, std::size_t k);
PathPrefix max_prefix(const OrderedBratteliDiagram& d, std::size_t k);

/// Vershik successor: increment the first non-maximal edge, reset the edges
/// below it to minimal in the new context. nullopt signals AtMaximum.
std::optional<PathPrefix> successor(const OrderedBratteliDiagram& d,
                                    const PathPrefix& p);

/// Depth-k truncation of a path, encoded as (level-k vertex, height index):
/// the height is the rank of the truncated path among all paths into that
/// vertex, in path order.
struct TruncatedPath {
  VertexId vertex = 0;
  std::uint64_t height = 0;

  bool operator==(const TruncatedPath& other) const = default;
};

TruncatedPath truncate(const OrderedBratteliDiagram& d, const PathPrefix& p,
                       std::size_t k);

/// Rebuild the full prefix of depth k from its truncation encoding.
PathPrefix prefix_from_truncation(const OrderedBratteliDiagram& d,
                                  std::size_t k, const TruncatedPath& tp);

/// Window of the level-k symbolic orbit: depth-k truncations of successive
/// Vershik iterates. truncated_at is set when AtMaximum interrupted the walk.
struct OrbitWord {
  std::size_t level = 0;
  std::vector<TruncatedPath> entries;
  std::optional<std::size_t> truncated_at;
};

OrbitWord orbit_word(const OrderedBratteliDiagram& d, const PathPrefix& start,
                     std::size_t length, std::size_t k);

/// Letter read by a tower-labeled diagram: the root-edge index is the height
/// in the level-1 tower, so the letter is label(level-1 vertex)[e_1].
Symbol read_letter(const OrderedBratteliDiagram& d, const PathPrefix& p);

struct RoundtripReport {
  bool ok = false;
  std::optional<std::size_t> first_mismatch;
};

/// Reads length letters along the Vershik orbit of the minimal prefix and
/// compares them with fill_prefix(t, length).
RoundtripReport roundtrip(const OrderedBratteliDiagram& d,
                          const SkeletonTower& t, std::size_t length);

/// The radius-0 code tr_k from depth-(k+1) truncations to depth-k
/// truncations (initial-path restriction), applied letterwise.
TruncatedPath truncation_code(const OrderedBratteliDiagram& d, std::size_t k,
                              const TruncatedPath& deeper);
OrbitWord truncation_code(const OrderedBratteliDiagram& d, std::size_t k,
                          const OrbitWord& deeper);

}  // namespace tbv

#endif  // TBV_VERSHIK_HPP
