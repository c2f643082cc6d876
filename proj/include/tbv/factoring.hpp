#ifndef TBV_FACTORING_HPP
#define TBV_FACTORING_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tbv/bratteli.hpp"
#include "tbv/substitution.hpp"
#include "tbv/vershik.hpp"

namespace tbv {

/**
 * Realization of a factor map between two ordered Bratteli diagrams as a
 * sequence of morphisms: level n_i of the source diagram maps into words
 * over level i of the target diagram, with all squares
 *   theta_{(i,j]} . eta_j = eta_i . xi_{(n_i,n_j]}
 * commuting. The root morphism (root to root) is implicit.
 */
struct MorphismSequence {
  OrderedBratteliDiagram source;  // B, levels W, morphisms xi
  OrderedBratteliDiagram target;  // C, levels V, morphisms theta
  /// n_1 < n_2 < ... < n_m (n_0 = 0 implicit).
  std::vector<std::size_t> levels;
  /// maps[i-1][w] = eta_i(w), a word over the target's level-i vertices.
  std::vector<std::vector<VertexWord>> maps;

  std::size_t count() const noexcept { return levels.size(); }
  const std::vector<VertexWord>& eta(std::size_t i) const { return maps.at(i - 1); }
};

struct SquareDiagnostic {
  std::string code;    // e.g. "square-mismatch", "not-letter-surjective"
  std::string detail;
};

/// Full verification of a realization: structural shape, non-erasing,
/// letter-surjectivity, the ERS length law, every consecutive commuting
/// square (word equality vertex by vertex), and minimal-path preservation
/// where the minimal vertices are determinable. Empty result = verified.
std::vector<SquareDiagnostic> verify_squares(const MorphismSequence& ms);

/// Least levels for the morphisms: n_i is the smallest level > n_{i-1} with
/// |theta_(0,i]| dividing |xi_(0,n_i]|. Exact big-integer arithmetic;
/// UnreachableLevel when the sums run out.
std::vector<std::size_t> optimal_levels(
    const std::vector<std::uint64_t>& xi_sums,
    const std::vector<std::uint64_t>& theta_sums, std::size_t m);

/// Two linked segments that should coincide but do not.
struct ClaimFailure {
  VertexId vertex;            // the W_ell vertex whose segments differ
  std::size_t occurrence_a;   // flattened occurrence indices
  std::size_t occurrence_b;
  VertexWord segment_a;
  VertexWord segment_b;
};

using PushUpOutcome = std::variant<MorphismSequence, ClaimFailure>;

/**
 * Push the morphism eta_{i+1} up from level n_{i+1} to a level ell with
 * n_i < ell < n_{i+1}: every path from a fixed W_ell vertex into W_{n_{i+1}}
 * links a segment of the image word; when all segments of a vertex agree
 * (always, for ERS diagrams with distinct source words), eta_{i+1} is
 * redefined on W_ell by the common segment. Disagreement returns the
 * offending ClaimFailure instead (expected for non-ERS inputs).
 */
PushUpOutcome push_up(const MorphismSequence& ms, std::size_t i,
                      std::size_t ell);

struct SyncReport {
  /// Smallest 1-based index from which consecutive levels differ by exactly
  /// one through the end; empty when the tail never stabilizes within depth.
  std::optional<std::size_t> i0;
  std::vector<std::size_t> gaps;  // n_{i+1} - n_i, evidence
};

SyncReport eventual_sync_check(const std::vector<std::size_t>& levels);
SyncReport eventual_sync_check(const MorphismSequence& ms);

enum class Verdict { NotObstructed, Obstructed, ObstructedAtHorizon, Inconclusive };

std::string to_string(Verdict v);

/// One-sided obstruction verdicts: NotObstructed never claims that a factor
/// map exists, it only reports that the necessary condition holds.
struct ObstructionReport {
  Verdict verdict = Verdict::Inconclusive;
  /// Found offset for the general scan; 0 for the exact-base check.
  std::optional<std::uint64_t> offset;
  /// Divisibility failure witness (index or pair description).
  std::string witness;
  std::size_t horizon = 0;
  /// Separate conjugacy verdict for the exact-base check: p == q.
  std::optional<bool> conjugacy_compatible;
  std::string disclaimer =
      "necessary conditions only; NotObstructed does not assert that a "
      "factor map exists";
};

/// Bases p, q >= 2 of constructive structures (p^i), (q^i): a factor map
/// source->target forces q | p; a conjugacy forces p = q.
ObstructionReport theorem_main_check(std::uint64_t p, std::uint64_t q);

/**
 * General structures: minimal offset i0 with q_i | p_{i0+i} verified for all
 * i = 1..horizon. A candidate offset is admissible only when the p-list
 * reaches index i0 + horizon, so with lists of length exactly horizon only
 * i0 = 0 is testable; pass longer p-lists to probe larger offsets.
 * ObstructedAtHorizon is a horizon-bounded necessary-condition failure, not
 * an unconditional proof.
 */
ObstructionReport general_obstruction_scan(const std::vector<Int>& ps,
                                           const std::vector<Int>& qs,
                                           std::size_t horizon);

/// True iff no m, n >= 1 with p^m = q^n; decided via prime exponent vectors.
bool mult_independent(std::uint64_t p, std::uint64_t q);

struct CobhamReport {
  struct SubstitutionFacts {
    bool primitive = false;
    std::optional<CoincidenceWitness> coincidence;
    std::size_t length = 0;
  };
  SubstitutionFacts first;
  SubstitutionFacts second;
  bool lengths_independent = false;
  bool applies = false;
  std::vector<std::string> failed_hypotheses;
  std::string verdict;
};

/// Checks the gate hypotheses (primitivity, coincidence, multiplicative
/// independence of the lengths) and reports; claims nothing beyond them.
CobhamReport cobham_gate(const Substitution& theta_p, const Substitution& theta_q);

/// Product of the target's row sums up to level i (|theta_(0,i]| for ERS).
std::uint64_t ers_height(const OrderedBratteliDiagram& d, std::size_t i);

/// Induced radius-0 block code of a realization at index i: maps a depth-n_i
/// truncation (w, h) to the pair (letter floor(h / |theta_(0,i]|) of
/// eta_i(w), h mod |theta_(0,i]|) over the target's level i.
TruncatedPath induced_code(const MorphismSequence& ms, std::size_t i,
                           const TruncatedPath& tp);

}  // namespace tbv

#endif  // TBV_FACTORING_HPP
