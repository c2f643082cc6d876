#ifndef TBV_SERIALIZE_HPP
#define TBV_SERIALIZE_HPP

#include <string>

#include "tbv/bratteli.hpp"
#include "tbv/factoring.hpp"
#include "tbv/substitution.hpp"
#include "tbv/toeplitz.hpp"
#include "tbv/vershik.hpp"

namespace tbv {

// All emitters are deterministic: object keys are sorted, arrays keep
// level/alphabet order, and re-serializing a parsed payload reproduces it
// byte for byte.

std::string tower_to_json(const SkeletonTower& t);
SkeletonTower tower_from_json(const std::string& text);

std::string substitution_to_json(const Substitution& s);
Substitution substitution_from_json(const std::string& text);
/// Inline grammar "a=ab,b=aa"; alphabet order follows first mention.
Substitution substitution_from_inline(const std::string& text);

std::string diagram_to_json(const OrderedBratteliDiagram& d);
OrderedBratteliDiagram diagram_from_json(const std::string& text);

std::string morphism_sequence_to_json(const MorphismSequence& ms);
MorphismSequence morphism_sequence_from_json(const std::string& text);

/// DOT export: one rank per level, edge order as edge labels, minimal edges
/// bold and maximal edges dashed.
std::string diagram_to_dot(const OrderedBratteliDiagram& d);

/// Validating parser for the emitted digraph subset (quoted ids, node/edge
/// statements, attribute lists, rank subgraphs). Throws ParseError.
void check_dot(const std::string& text);

/// Orbit trace: columns step, vertex, height, letter (letter only for
/// diagrams with level-1 block labels).
std::string orbit_to_csv(const OrderedBratteliDiagram& d, const OrbitWord& orbit);

}  // namespace tbv

#endif  // TBV_SERIALIZE_HPP
