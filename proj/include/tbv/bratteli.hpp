#ifndef TBV_BRATTELI_HPP
#define TBV_BRATTELI_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tbv/toeplitz.hpp"

namespace tbv {

using VertexId = std::uint32_t;

/// Ordered word over the vertices of one level, letters in edge order.
using VertexWord = std::vector<VertexId>;

/**
 * Ordered Bratteli diagram up to a finite depth K. Edges are not stored as
 * objects: the ordered source word per vertex is the canonical encoding; the
 * j-th letter of theta_i(v) is the source of the j-th edge into v.
 *
 * Level 0 is the singleton root. Vertices may carry labels (e.g. the grid
 * block a vertex represents) and a level may carry a mark naming the vertex
 * the minimal path passes through.
 *
 * Immutable after construction; surgeries return new values.
 */
class OrderedBratteliDiagram {
 public:
  /// names: one vector per level 0..K, names unique within a level.
  /// words: words[i] holds theta_{i+1}, the per-vertex source words of level
  /// i+1, so words.size() == names.size() - 1.
  OrderedBratteliDiagram(std::vector<std::vector<std::string>> names,
                         std::vector<std::vector<VertexWord>> words);

  std::size_t depth() const noexcept { return words_.size(); }
  std::size_t level_size(std::size_t i) const { return level_names(i).size(); }
  const std::vector<std::string>& level_names(std::size_t i) const;
  const std::string& name(std::size_t i, VertexId v) const;
  std::optional<VertexId> find_vertex(std::size_t i, const std::string& name) const;

  /// Source words of level i, 1 <= i <= depth.
  const std::vector<VertexWord>& theta(std::size_t i) const;
  const VertexWord& theta_word(std::size_t i, VertexId v) const;

  bool has_labels() const noexcept;
  /// Empty string when the vertex carries no label.
  const std::string& label(std::size_t i, VertexId v) const;
  std::optional<VertexId> min_mark(std::size_t i) const;

  OrderedBratteliDiagram& set_label(std::size_t i, VertexId v, std::string label);
  OrderedBratteliDiagram& set_min_mark(std::size_t i, VertexId v);

  bool operator==(const OrderedBratteliDiagram& other) const = default;

 private:
  std::vector<std::vector<std::string>> names_;
  std::vector<std::vector<VertexWord>> words_;  // words_[i] = theta_{i+1}
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::optional<VertexId>> min_marks_;
};

/// A defect found by validate(); empty diagnostics mean all invariants hold.
struct DiagramDiagnostic {
  enum class Kind { EmptyRange, DeadSource, BadRoot };
  Kind kind;
  std::size_t level;
  VertexId vertex;
  std::string message;
};

std::vector<DiagramDiagnostic> validate(const OrderedBratteliDiagram& d);

using AdjacencyMatrix = std::vector<std::vector<std::uint64_t>>;

/// Entry (v, w) counts occurrences of w in theta_i(v); |V_i| x |V_{i-1}|.
AdjacencyMatrix adjacency_matrix(const OrderedBratteliDiagram& d, std::size_t i);

struct ErsReport {
  bool ers = false;
  /// Common row sum per level 1..K (meaningful prefix when not ERS).
  std::vector<std::uint64_t> row_sums;
  std::optional<std::size_t> first_violation;
};

/// Equal-row-sums check over every level.
ErsReport is_ers(const OrderedBratteliDiagram& d);

struct SimplicityReport {
  bool simple = false;
  /// Verdict is at finite depth only: "simple up to covered_depth".
  std::size_t covered_depth = 0;
  bool shallow = false;
  std::vector<std::pair<std::size_t, std::size_t>> windows;
};

/// Greedy witness search: consecutive adjacency products over level windows
/// must become entrywise positive before the diagram ends.
SimplicityReport is_simple(const OrderedBratteliDiagram& d);

/// Composed morphism theta_{(i,j]} mapping V_j to words over V_i; 0 <= i < j.
std::vector<VertexWord> compose(const OrderedBratteliDiagram& d, std::size_t i,
                                std::size_t j);

/// New diagram with levels cut_levels and composed source words; path counts
/// to retained levels are preserved.
OrderedBratteliDiagram telescope(const OrderedBratteliDiagram& d,
                                 const std::vector<std::size_t>& cut_levels);

/// (all minimal edges at level i share a source, same for maximal edges).
std::pair<bool, bool> min_max_same_source(const OrderedBratteliDiagram& d,
                                          std::size_t i);

/// Number of root-to-vertex paths per vertex of the given level.
std::vector<std::uint64_t> path_counts(const OrderedBratteliDiagram& d,
                                       std::size_t level);

struct TowerDiagramResult {
  OrderedBratteliDiagram diagram;
  PeriodStructure structure;
  /// Set when the vertex sets did not stabilize between window/2 and window.
  std::optional<std::string> unstable_warning;
};

/**
 * Bratteli-Vershik diagram of a skeleton tower: level-n vertices are the
 * distinct length-p_n grid blocks of the materialized prefix, theta_n splits
 * a block into its p_{n-1}-sub-blocks, the root joins each level-1 vertex by
 * p_1 ordered edges. Row sums are exactly p_n / p_{n-1}. Vertices are
 * labeled with their block and the vertex carrying the initial block is the
 * level's min mark.
 *
 * window must be a positive multiple of 2 * p_levels and the tower must fill
 * it (IncompleteTower otherwise).
 */
TowerDiagramResult bv_from_tower(const SkeletonTower& t, std::size_t levels,
                                 std::size_t window);

/// Morphism from the vertices of one diagram level to words over a level of
/// another diagram (or of the same one).
struct LevelMorphism {
  std::size_t source_level = 0;
  std::size_t target_level = 0;
  /// images[w] is the image word over the target level's vertices.
  std::vector<VertexWord> images;
};

/// Provenance of a vertex created by symbol_split.
struct SplitVertex {
  VertexId original;
  VertexWord linked_word;
};

struct SymbolSplitResult {
  OrderedBratteliDiagram diagram;
  /// eta'_1 on the new level 1; letter-to-letter when the segment length is 1.
  LevelMorphism eta1;
  /// provenance[t] describes new level t+1 (t = 0 .. n1-ell-1): for every new
  /// vertex, the original vertex and its linked word.
  std::vector<std::vector<SplitVertex>> provenance;
};

/**
 * Symbol splitting: given an ERS diagram b, a morphism eta1 defined on level
 * n1 with target-level-1 image words, the target's root edge count |theta_1|
 * and a level ell < n1 with |xi_(0,ell]| = s * |theta_1|, rebuilds levels
 * ell..n1 so that the rebuilt eta'_1 lives on the new level 1. Every vertex
 * of the affected old levels is replaced by one vertex per distinct linked
 * word; levels above n1 are copied shifted down by ell-1.
 */
SymbolSplitResult symbol_split(const OrderedBratteliDiagram& b,
                               const LevelMorphism& eta1,
                               std::uint64_t theta1_len, std::size_t ell);

struct InsertWordLevelResult {
  OrderedBratteliDiagram diagram;
  bool changed = false;
  /// Index of the inserted level in the new diagram, when changed.
  std::size_t inserted_level = 0;
};

/**
 * Restricted word-level insertion: when distinct vertices at level i share
 * the same source word, inserts a level of representative vertices (one per
 * distinct word) between i-1 and i and rewires level i through it. No-op
 * when all source words are distinct.
 */
InsertWordLevelResult insert_word_level(const OrderedBratteliDiagram& d,
                                        std::size_t i);

}  // namespace tbv

#endif  // TBV_BRATTELI_HPP
