#include "tbv/factoring.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace tbv {
namespace {

std::vector<VertexWord> identity_expansion(const OrderedBratteliDiagram& d,
                                           std::size_t from, std::size_t to) {
  // xi_{(from,to]} on the vertices of level `to`; identity when from == to.
  if (from == to) {
    std::vector<VertexWord> id(d.level_size(to));
    for (std::size_t v = 0; v < id.size(); ++v)
      id[v] = VertexWord{static_cast<VertexId>(v)};
    return id;
  }
  return compose(d, from, to);
}

VertexWord apply_morphism(const std::vector<VertexWord>& images,
                          const VertexWord& word) {
  VertexWord out;
  for (VertexId v : word) {
    const VertexWord& img = images.at(v);
    out.insert(out.end(), img.begin(), img.end());
  }
  return out;
}

std::string word_to_string(const OrderedBratteliDiagram& d, std::size_t level,
                           const VertexWord& w) {
  std::string out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) out.push_back(' ');
    out += d.name(level, w[k]);
  }
  return out;
}

std::optional<VertexId> determinable_min_vertex(const OrderedBratteliDiagram& d,
                                                std::size_t level) {
  if (level < d.depth()) {
    std::set<VertexId> firsts;
    for (const VertexWord& w : d.theta(level + 1)) {
      if (w.empty()) return std::nullopt;
      firsts.insert(w.front());
    }
    if (firsts.size() == 1) return *firsts.begin();
  }
  if (const auto mark = d.min_mark(level)) return mark;
  if (d.level_size(level) == 1) return VertexId{0};
  return std::nullopt;
}

}  // namespace

std::vector<SquareDiagnostic> verify_squares(const MorphismSequence& ms) {
  std::vector<SquareDiagnostic> out;
  const auto fail = [&](std::string code, std::string detail) {
    out.push_back({std::move(code), std::move(detail)});
  };

  const std::size_t m = ms.count();
  if (m == 0) {
    fail("empty", "no morphisms to verify");
    return out;
  }
  if (ms.maps.size() != m) {
    fail("shape", "need one map per level entry");
    return out;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (ms.levels[i] < 1 || ms.levels[i] > ms.source.depth()) {
      fail("shape", "level n_" + std::to_string(i + 1) + " out of range");
      return out;
    }
    if (i > 0 && ms.levels[i] <= ms.levels[i - 1]) {
      fail("shape", "levels must strictly increase");
      return out;
    }
    if (i + 1 > ms.target.depth()) {
      fail("shape", "target diagram shallower than the morphism count");
      return out;
    }
    if (ms.maps[i].size() != ms.source.level_size(ms.levels[i])) {
      fail("shape", "map " + std::to_string(i + 1) +
                        " must cover every source vertex");
      return out;
    }
    for (const VertexWord& img : ms.maps[i])
      for (VertexId v : img)
        if (v >= ms.target.level_size(i + 1)) {
          fail("shape", "image letter out of range at map " +
                            std::to_string(i + 1));
          return out;
        }
  }

  // non-erasing + letter-surjective
  for (std::size_t i = 1; i <= m; ++i) {
    std::vector<bool> hit(ms.target.level_size(i), false);
    for (std::size_t w = 0; w < ms.eta(i).size(); ++w) {
      if (ms.eta(i)[w].empty())
        fail("erasing", "eta_" + std::to_string(i) + "(" +
                            ms.source.name(ms.levels[i - 1],
                                           static_cast<VertexId>(w)) +
                            ") is empty");
      for (VertexId v : ms.eta(i)[w]) hit[v] = true;
    }
    for (std::size_t v = 0; v < hit.size(); ++v)
      if (!hit[v])
        fail("not-letter-surjective",
             "target vertex " + ms.target.name(i, static_cast<VertexId>(v)) +
                 " at level " + std::to_string(i) + " is never used by eta_" +
                 std::to_string(i));
  }

  // root square: theta_(0,1] . eta_1 and the root morphism agree on lengths
  // (their letters are all the root), vertex by vertex
  {
    const auto heights = path_counts(ms.source, ms.levels[0]);
    const auto& theta1 = ms.target.theta(1);
    for (std::size_t w = 0; w < ms.eta(1).size(); ++w) {
      std::uint64_t expanded = 0;
      for (VertexId v : ms.eta(1)[w]) expanded += theta1[v].size();
      if (expanded != heights[w])
        fail("root-square",
             "theta_(0,1](eta_1(" +
                 ms.source.name(ms.levels[0], static_cast<VertexId>(w)) +
                 ")) has length " + std::to_string(expanded) +
                 " but the vertex height is " + std::to_string(heights[w]));
    }
  }

  // ERS length law |eta_i(w)| = |xi_(0,n_i]| / |theta_(0,i]|
  const ErsReport source_ers = is_ers(ms.source);
  const ErsReport target_ers = is_ers(ms.target);
  if (source_ers.ers && target_ers.ers) {
    Int xi_prod = 1;
    std::size_t next_level = 0;
    Int theta_prod = 1;
    for (std::size_t i = 1; i <= m; ++i) {
      while (next_level < ms.levels[i - 1])
        xi_prod *= source_ers.row_sums[next_level++];
      theta_prod *= target_ers.row_sums[i - 1];
      if (xi_prod % theta_prod != 0) {
        fail("length-law", "|theta_(0," + std::to_string(i) +
                               "]| does not divide |xi_(0,n_" +
                               std::to_string(i) + "]|");
        continue;
      }
      const Int want = xi_prod / theta_prod;
      for (std::size_t w = 0; w < ms.eta(i).size(); ++w)
        if (Int(ms.eta(i)[w].size()) != want)
          fail("length-law",
               "|eta_" + std::to_string(i) + "(" +
                   ms.source.name(ms.levels[i - 1], static_cast<VertexId>(w)) +
                   ")| != |xi_(0,n_i]| / |theta_(0,i]| = " + want.str());
    }
  }

  // commuting squares for consecutive pairs
  for (std::size_t i = 1; i < m; ++i) {
    const auto expansion =
        identity_expansion(ms.source, ms.levels[i - 1], ms.levels[i]);
    const auto& theta_next = ms.target.theta(i + 1);
    for (std::size_t w = 0; w < ms.eta(i + 1).size(); ++w) {
      const VertexWord lhs = apply_morphism(theta_next, ms.eta(i + 1)[w]);
      const VertexWord rhs = apply_morphism(ms.eta(i), expansion[w]);
      if (lhs != rhs)
        fail("square-mismatch",
             "square (" + std::to_string(i) + "," + std::to_string(i + 1) +
                 ") fails at " +
                 ms.source.name(ms.levels[i], static_cast<VertexId>(w)) +
                 ": theta.eta = [" + word_to_string(ms.target, i, lhs) +
                 "] vs eta.xi = [" + word_to_string(ms.target, i, rhs) + "]");
    }
  }

  // minimal-path preservation, where the minimal vertices are determinable
  for (std::size_t i = 1; i <= m; ++i) {
    const auto w_min = determinable_min_vertex(ms.source, ms.levels[i - 1]);
    const auto v_min = determinable_min_vertex(ms.target, i);
    if (!w_min || !v_min) continue;
    const VertexWord& img = ms.eta(i)[*w_min];
    if (!img.empty() && img.front() != *v_min)
      fail("min-path",
           "eta_" + std::to_string(i) + " does not send the minimal vertex " +
               ms.source.name(ms.levels[i - 1], *w_min) + " onto " +
               ms.target.name(i, *v_min));
  }

  return out;
}

std::vector<std::size_t> optimal_levels(
    const std::vector<std::uint64_t>& xi_sums,
    const std::vector<std::uint64_t>& theta_sums, std::size_t m) {
  if (m > theta_sums.size())
    throw ArgumentError("optimal_levels: need m target row sums");
  for (std::uint64_t s : xi_sums)
    if (s == 0) throw ArgumentError("optimal_levels: zero row sum");
  for (std::uint64_t s : theta_sums)
    if (s == 0) throw ArgumentError("optimal_levels: zero row sum");

  std::vector<Int> xi_prefix{1};
  for (std::uint64_t s : xi_sums) xi_prefix.push_back(xi_prefix.back() * s);

  std::vector<std::size_t> out;
  Int theta_prod = 1;
  std::size_t prev = 0;
  for (std::size_t i = 1; i <= m; ++i) {
    theta_prod *= theta_sums[i - 1];
    std::size_t n = prev + 1;
    while (n < xi_prefix.size() && xi_prefix[n] % theta_prod != 0) ++n;
    if (n >= xi_prefix.size()) throw UnreachableLevel(i);
    out.push_back(n);
    prev = n;
  }
  return out;
}

PushUpOutcome push_up(const MorphismSequence& ms, std::size_t i,
                      std::size_t ell) {
  if (i < 1 || i >= ms.count())
    throw ArgumentError("push_up: need 1 <= i < count");
  const std::size_t n_i = ms.levels[i - 1];
  const std::size_t n_next = ms.levels[i];
  if (ell <= n_i || ell >= n_next)
    throw ArgumentError("push_up: need n_i < ell < n_{i+1}");

  // Per W_ell vertex: the target word eta_i(xi_(n_i,ell]) its chunks must
  // expand to through theta_{i+1}.
  const auto down_to_ni = identity_expansion(ms.source, n_i, ell);
  std::vector<VertexWord> chunk_targets(ms.source.level_size(ell));
  for (std::size_t u = 0; u < chunk_targets.size(); ++u)
    chunk_targets[u] = apply_morphism(ms.eta(i), down_to_ni[u]);

  const auto& theta_next = ms.target.theta(i + 1);
  const auto expansion = identity_expansion(ms.source, ell, n_next);

  std::vector<std::optional<VertexWord>> alpha(ms.source.level_size(ell));
  std::vector<std::size_t> first_occurrence(ms.source.level_size(ell), 0);
  std::size_t flat_occurrence = 0;

  for (std::size_t w = 0; w < ms.eta(i + 1).size(); ++w) {
    const VertexWord& image = ms.eta(i + 1)[w];
    const VertexWord& occurrences = expansion[w];
    std::size_t pos = 0;
    for (std::size_t occ = 0; occ < occurrences.size(); ++occ, ++flat_occurrence) {
      const VertexId u = occurrences[occ];
      const std::size_t want = chunk_targets[u].size();
      // consume letters until the theta-expansion length matches
      VertexWord chunk;
      std::size_t got = 0;
      while (got < want) {
        if (pos >= image.size())
          throw ConstructionError(
              "push_up: image of " +
              ms.source.name(n_next, static_cast<VertexId>(w)) +
              " is too short for its linked segments");
        const VertexId letter = image[pos++];
        chunk.push_back(letter);
        got += theta_next[letter].size();
      }
      if (got != want)
        throw ConstructionError(
            "push_up: segment boundary mismatch inside the image of " +
            ms.source.name(n_next, static_cast<VertexId>(w)));
      if (apply_morphism(theta_next, chunk) != chunk_targets[u])
        throw ConstructionError(
            "push_up: segment content does not satisfy the commuting square "
            "at " +
            ms.source.name(ell, u));
      if (!alpha[u]) {
        alpha[u] = chunk;
        first_occurrence[u] = flat_occurrence;
      } else if (*alpha[u] != chunk) {
        return ClaimFailure{u, first_occurrence[u], flat_occurrence, *alpha[u],
                            chunk};
      }
    }
    if (pos != image.size())
      throw ConstructionError(
          "push_up: image of " +
          ms.source.name(n_next, static_cast<VertexId>(w)) +
          " has letters not covered by any linked segment");
  }

  MorphismSequence pushed = ms;
  pushed.levels[i] = ell;
  pushed.maps[i].clear();
  for (std::size_t u = 0; u < alpha.size(); ++u) {
    if (!alpha[u])
      throw ConstructionError("push_up: vertex " +
                              ms.source.name(ell, static_cast<VertexId>(u)) +
                              " has no path into the morphism level");
    pushed.maps[i].push_back(std::move(*alpha[u]));
  }
  return pushed;
}

SyncReport eventual_sync_check(const std::vector<std::size_t>& levels) {
  SyncReport report;
  const std::size_t m = levels.size();
  for (std::size_t t = 0; t + 1 < m; ++t)
    report.gaps.push_back(levels[t + 1] - levels[t]);
  if (m < 2 || report.gaps.back() != 1) return report;  // NotFound within depth
  std::size_t start = report.gaps.size();  // index into gaps, 0-based
  while (start > 0 && report.gaps[start - 1] == 1) --start;
  report.i0 = start + 1;  // 1-based morphism index
  return report;
}

SyncReport eventual_sync_check(const MorphismSequence& ms) {
  return eventual_sync_check(ms.levels);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::NotObstructed: return "NotObstructed";
    case Verdict::Obstructed: return "Obstructed";
    case Verdict::ObstructedAtHorizon: return "ObstructedAtHorizon";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

ObstructionReport theorem_main_check(std::uint64_t p, std::uint64_t q) {
  if (p < 2 || q < 2) throw ArgumentError("theorem_main_check: need p, q >= 2");
  ObstructionReport report;
  report.conjugacy_compatible = (p == q);
  if (p % q == 0) {
    report.verdict = Verdict::NotObstructed;
    report.witness = std::to_string(q) + " | " + std::to_string(p);
  } else {
    report.verdict = Verdict::Obstructed;
    report.witness = std::to_string(q) + " does not divide " + std::to_string(p);
  }
  return report;
}

ObstructionReport general_obstruction_scan(const std::vector<Int>& ps,
                                           const std::vector<Int>& qs,
                                           std::size_t horizon) {
  if (horizon < 1) throw ArgumentError("general_obstruction_scan: horizon >= 1");
  if (ps.size() < horizon || qs.size() < horizon)
    throw ArgumentError("general_obstruction_scan: lists shorter than horizon");
  ObstructionReport report;
  report.horizon = horizon;
  for (std::size_t i0 = 0; i0 < horizon && i0 + horizon <= ps.size(); ++i0) {
    bool ok = true;
    for (std::size_t i = 1; i <= horizon; ++i)
      if (ps[i0 + i - 1] % qs[i - 1] != 0) {
        ok = false;
        break;
      }
    if (ok) {
      report.verdict = Verdict::NotObstructed;
      report.offset = i0;
      report.witness = "q_i | p_{" + std::to_string(i0) + "+i} for i <= " +
                       std::to_string(horizon);
      return report;
    }
  }
  report.verdict = Verdict::ObstructedAtHorizon;
  report.witness = "no offset below the horizon satisfies the divisibilities";
  return report;
}

bool mult_independent(std::uint64_t p, std::uint64_t q) {
  if (p < 2 || q < 2) throw ArgumentError("mult_independent: need p, q >= 2");
  const auto fp = factorize(p);
  const auto fq = factorize(q);
  if (fp.size() != fq.size()) return true;
  for (std::size_t k = 0; k < fp.size(); ++k)
    if (fp[k].first != fq[k].first) return true;
  // dependent iff exponent vectors are parallel
  for (std::size_t k = 1; k < fp.size(); ++k)
    if (static_cast<std::uint64_t>(fp[k].second) * fq[0].second !=
        static_cast<std::uint64_t>(fq[k].second) * fp[0].second)
      return true;
  return false;
}

CobhamReport cobham_gate(const Substitution& theta_p,
                         const Substitution& theta_q) {
  CobhamReport report;
  report.first = {is_primitive(theta_p), has_coincidence(theta_p),
                  theta_p.length()};
  report.second = {is_primitive(theta_q), has_coincidence(theta_q),
                   theta_q.length()};
  report.lengths_independent =
      mult_independent(theta_p.length(), theta_q.length());

  if (!report.first.primitive)
    report.failed_hypotheses.push_back("first substitution is not primitive");
  if (!report.first.coincidence)
    report.failed_hypotheses.push_back("first substitution has no coincidence");
  if (!report.second.primitive)
    report.failed_hypotheses.push_back("second substitution is not primitive");
  if (!report.second.coincidence)
    report.failed_hypotheses.push_back("second substitution has no coincidence");
  if (!report.lengths_independent)
    report.failed_hypotheses.push_back(
        "lengths " + std::to_string(theta_p.length()) + " and " +
        std::to_string(theta_q.length()) +
        " are multiplicatively dependent");

  report.applies = report.failed_hypotheses.empty();
  report.verdict =
      report.applies
          ? "multiplicative independence gate passed: any sequence automatic "
            "for both lengths generates a finite shift"
          : "gate withheld: " + report.failed_hypotheses.front();
  return report;
}

std::uint64_t ers_height(const OrderedBratteliDiagram& d, std::size_t i) {
  const ErsReport ers = is_ers(d);
  if (!ers.ers || i > ers.row_sums.size())
    throw ArgumentError("ers_height: diagram not ERS up to the level");
  std::uint64_t h = 1;
  for (std::size_t u = 0; u < i; ++u) h *= ers.row_sums[u];
  return h;
}

TruncatedPath induced_code(const MorphismSequence& ms, std::size_t i,
                           const TruncatedPath& tp) {
  const std::uint64_t block = ers_height(ms.target, i);
  const VertexWord& image = ms.eta(i)[tp.vertex];
  const std::uint64_t slot = tp.height / block;
  if (slot >= image.size())
    throw ArgumentError("induced_code: height exceeds the image word");
  return {image[slot], tp.height % block};
}

}  // namespace tbv
