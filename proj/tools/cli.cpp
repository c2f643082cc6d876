#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tbv/serialize.hpp"

namespace tbv::cli {
namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << content;
}

std::size_t depth_cap() {
  if (const char* cap = std::getenv("TBV_MAX_DEPTH")) {
    const long value = std::strtol(cap, nullptr, 10);
    if (value > 0) return static_cast<std::size_t>(value);
  }
  return 48;
}

std::size_t capped_depth(std::size_t depth, std::ostream& err) {
  const std::size_t cap = depth_cap();
  if (depth > cap) {
    err << "note: depth " << depth << " capped to TBV_MAX_DEPTH = " << cap
        << "\n";
    return cap;
  }
  return depth;
}

std::string envelope(const std::string& command, json result) {
  json out;
  out["command"] = command;
  out["result"] = std::move(result);
  out["tool"] = "tbv";
  out["version"] = kVersion;
  return out.dump(2) + "\n";
}

struct Inputs {
  std::string subst_file;
  std::string subst_inline;
  std::string tower_file;
};

void add_input_flags(CLI::App* cmd, Inputs& in) {
  cmd->add_option("--subst", in.subst_file, "substitution JSON file");
  cmd->add_option("--subst-inline", in.subst_inline,
                  "inline substitution, e.g. a=ab,b=aa");
  cmd->add_option("--tower", in.tower_file, "skeleton tower JSON file");
}

std::optional<Substitution> load_substitution(const Inputs& in) {
  if (!in.subst_file.empty())
    return substitution_from_json(read_file(in.subst_file));
  if (!in.subst_inline.empty())
    return substitution_from_inline(in.subst_inline);
  return std::nullopt;
}

/// Tower deep enough for a depth-`levels` structure and a filled `window`
/// (0 = pick 4 * p_levels). Substitution towers deepen automatically.
SkeletonTower materialize_tower(const Inputs& in, std::size_t levels,
                                std::size_t& window, std::ostream& err) {
  const auto subst = load_substitution(in);
  if (!subst) {
    if (in.tower_file.empty())
      throw ParseError("need --subst, --subst-inline or --tower");
    SkeletonTower t = tower_from_json(read_file(in.tower_file));
    if (window == 0) {
      const auto ps = constructive_structure(t, levels);
      window = 4 * static_cast<std::size_t>(ps.periods.back());
    }
    return t;
  }
  std::size_t depth = std::max<std::size_t>(levels, 1);
  const std::size_t cap = depth_cap();
  for (;;) {
    SkeletonTower t = tower_from_substitution(*subst, depth);
    try {
      const auto ps = constructive_structure(t, levels);
      const std::size_t w =
          window ? window : 4 * static_cast<std::size_t>(ps.periods.back());
      fill_prefix(t, w);
      window = w;
      return t;
    } catch (const IncompleteTower&) {
      if (depth >= cap) {
        err << "note: tower depth cap " << cap << " reached\n";
        throw;
      }
      ++depth;
    }
  }
}

json substitution_report(const Substitution& s) {
  json out;
  out["length"] = s.length();
  out["primitive"] = is_primitive(s);
  if (const auto w = has_coincidence(s)) {
    out["coincidence"] = {{"power", w->power}, {"column", w->column.str()}};
  } else {
    out["coincidence"] = nullptr;
  }
  return out;
}

json structure_report(const PeriodStructure& ps) {
  json out;
  out["constructive"] = ps.constructive;
  out["seed"] = "position period of 0";
  json periods = json::array();
  for (const Int& p : ps.periods) periods.push_back(p.str());
  out["periods"] = std::move(periods);
  return out;
}

json diagram_report(const OrderedBratteliDiagram& d) {
  json out;
  json sizes = json::array();
  for (std::size_t i = 0; i <= d.depth(); ++i) sizes.push_back(d.level_size(i));
  out["level_sizes"] = std::move(sizes);
  const auto ers = is_ers(d);
  out["ers"] = ers.ers;
  out["row_sums"] = ers.row_sums;
  const auto simple = is_simple(d);
  out["simple"] = {{"verdict", simple.simple},
                   {"covered_depth", simple.covered_depth},
                   {"shallow", simple.shallow}};
  json proper = json::array();
  for (std::size_t i = 1; i <= d.depth(); ++i) {
    const auto [mn, mx] = min_max_same_source(d, i);
    proper.push_back({{"level", i}, {"min_same_source", mn},
                      {"max_same_source", mx}});
  }
  out["same_source"] = std::move(proper);
  return out;
}

int cmd_analyze(const Inputs& in, std::size_t depth, bool as_json,
                std::ostream& out, std::ostream& err) {
  json result;
  const auto subst = load_substitution(in);
  SkeletonTower tower = [&] {
    if (subst) {
      std::size_t window = 2;  // unused; analyze needs no window
      Inputs copy = in;
      return materialize_tower(copy, depth, window, err);
    }
    return tower_from_json(read_file(in.tower_file));
  }();
  if (subst) result["substitution"] = substitution_report(*subst);
  json stages = json::array();
  for (const auto& stage : tower.stages())
    stages.push_back({{"p", stage.period},
                      {"filled", stage.cells.filled_count()}});
  result["tower"] = {{"depth", tower.depth()}, {"stages", std::move(stages)}};
  const auto ps = constructive_structure(tower, depth);
  result["structure"] = structure_report(ps);

  if (as_json) {
    out << envelope("analyze", result);
    return 0;
  }
  if (subst) {
    out << "substitution: length " << subst->length() << ", "
        << (is_primitive(*subst) ? "primitive" : "not primitive");
    if (const auto w = has_coincidence(*subst))
      out << ", coincidence at power " << w->power << " column "
          << w->column.str();
    out << "\n";
  }
  out << "tower: depth " << tower.depth() << "\n";
  out << "constructive structure (seed: position period of 0):";
  for (const Int& p : ps.periods) out << " " << p.str();
  out << "\n";
  return 0;
}

int cmd_build_bv(const Inputs& in, std::size_t levels, std::size_t window,
                 const std::string& dot_file, bool as_json, std::ostream& out,
                 std::ostream& err) {
  SkeletonTower tower = materialize_tower(in, levels, window, err);
  const auto built = bv_from_tower(tower, levels, window);
  if (built.unstable_warning) err << "warning: " << *built.unstable_warning << "\n";

  if (!dot_file.empty()) {
    const std::string dot = diagram_to_dot(built.diagram);
    check_dot(dot);
    write_file(dot_file, dot);
  }

  json result;
  result["diagram"] = json::parse(diagram_to_json(built.diagram));
  result["report"] = diagram_report(built.diagram);
  result["structure"] = structure_report(built.structure);
  result["window"] = window;
  if (built.unstable_warning) result["unstable"] = *built.unstable_warning;

  if (as_json) {
    out << envelope("build-bv", result);
    return 0;
  }
  out << "levels:";
  for (std::size_t i = 0; i <= built.diagram.depth(); ++i)
    out << " " << built.diagram.level_size(i);
  out << "\nrow sums:";
  for (const auto s : is_ers(built.diagram).row_sums) out << " " << s;
  out << "\nERS: " << (is_ers(built.diagram).ers ? "yes" : "no") << "\n";
  const auto simple = is_simple(built.diagram);
  out << "simple up to depth " << simple.covered_depth << ": "
      << (simple.simple ? "yes" : "no") << "\n";
  return 0;
}

int cmd_orbit(const Inputs& in, std::size_t levels, std::size_t steps,
              std::size_t trunc_level, std::size_t window,
              const std::string& csv_file, bool as_json, std::ostream& out,
              std::ostream& err) {
  SkeletonTower tower = materialize_tower(in, levels, window, err);
  const auto built = bv_from_tower(tower, levels, window);
  const auto start = min_prefix(built.diagram, built.diagram.depth());
  const auto orbit = orbit_word(built.diagram, start, steps, trunc_level);
  const std::string csv = orbit_to_csv(built.diagram, orbit);
  if (!csv_file.empty()) write_file(csv_file, csv);

  if (as_json) {
    json result;
    result["level"] = orbit.level;
    json entries = json::array();
    for (const auto& tp : orbit.entries)
      entries.push_back({{"vertex", built.diagram.name(orbit.level, tp.vertex)},
                         {"height", tp.height}});
    result["entries"] = std::move(entries);
    if (orbit.truncated_at) result["truncated_at"] = *orbit.truncated_at;
    out << envelope("orbit", result);
    return 0;
  }
  out << csv;
  if (orbit.truncated_at)
    err << "warning: orbit reached the maximal path after "
        << *orbit.truncated_at << " entries\n";
  return 0;
}

MorphismSequence load_sequence(const std::string& factor_file) {
  return morphism_sequence_from_json(read_file(factor_file));
}

int cmd_split(const std::string& factor_file, std::size_t ell, bool as_json,
              const std::string& out_file, std::ostream& out, std::ostream&) {
  const MorphismSequence ms = load_sequence(factor_file);
  if (ms.count() < 1) throw ParseError("split: empty morphism sequence");
  LevelMorphism eta1{ms.levels[0], 1, ms.maps[0]};
  const auto& theta1 = ms.target.theta(1);
  const std::uint64_t theta1_len = theta1.front().size();
  for (const VertexWord& w : theta1)
    if (w.size() != theta1_len)
      throw ArgumentError("split: target level 1 does not have equal row sums");

  const auto split = symbol_split(ms.source, eta1, theta1_len, ell);

  MorphismSequence rebuilt{split.diagram, ms.target, {}, {}};
  rebuilt.levels.push_back(1);
  rebuilt.maps.push_back(split.eta1.images);
  for (std::size_t i = 2; i <= ms.count(); ++i) {
    rebuilt.levels.push_back(ms.levels[i - 1] - ell + 1);
    rebuilt.maps.push_back(ms.maps[i - 1]);
  }
  const std::string payload = morphism_sequence_to_json(rebuilt);
  if (!out_file.empty()) write_file(out_file, payload);

  json summary;
  json sizes = json::array();
  for (std::size_t t = 0; t < split.provenance.size(); ++t) {
    json per_original = json::object();
    for (const auto& sv : split.provenance[t]) {
      const auto original = ms.source.name(t + ell, sv.original);
      per_original[original] = per_original.value(original, 0) + 1;
    }
    sizes.push_back({{"new_level", t + 1}, {"splits", std::move(per_original)}});
  }
  summary["split_sizes"] = std::move(sizes);
  summary["diagnostics"] = json::array();
  for (const auto& diag : verify_squares(rebuilt))
    summary["diagnostics"].push_back(diag.code + ": " + diag.detail);

  if (as_json) {
    json result;
    result["sequence"] = json::parse(payload);
    result["summary"] = std::move(summary);
    out << envelope("split", result);
  } else {
    out << payload;
  }
  return summary["diagnostics"].empty() ? 0 : 1;
}

int cmd_telescope(const std::string& diagram_file,
                  const std::vector<std::size_t>& cuts,
                  const std::string& dot_file, bool as_json, std::ostream& out,
                  std::ostream&) {
  const auto d = diagram_from_json(read_file(diagram_file));
  const auto scoped = telescope(d, cuts);
  if (!dot_file.empty()) {
    const std::string dot = diagram_to_dot(scoped);
    check_dot(dot);
    write_file(dot_file, dot);
  }
  const std::string payload = diagram_to_json(scoped);
  if (as_json) {
    json result;
    result["diagram"] = json::parse(payload);
    result["report"] = diagram_report(scoped);
    out << envelope("telescope", result);
  } else {
    out << payload;
  }
  return 0;
}

int cmd_verify_factor(const std::string& factor_file, bool as_json,
                      std::ostream& out, std::ostream&) {
  const MorphismSequence ms = load_sequence(factor_file);
  const auto diagnostics = verify_squares(ms);
  if (as_json) {
    json result;
    result["levels"] = ms.levels;
    json list = json::array();
    for (const auto& d : diagnostics)
      list.push_back({{"code", d.code}, {"detail", d.detail}});
    result["diagnostics"] = std::move(list);
    result["verified"] = diagnostics.empty();
    out << envelope("verify-factor", result);
  } else {
    if (diagnostics.empty()) {
      out << "verified: " << ms.count() << " morphisms at levels";
      for (std::size_t n : ms.levels) out << " " << n;
      out << "\n";
    } else {
      for (const auto& d : diagnostics) out << d.code << ": " << d.detail << "\n";
    }
  }
  return diagnostics.empty() ? 0 : 1;
}

int cmd_obstruct(std::uint64_t p, std::uint64_t q,
                 const std::vector<std::uint64_t>& p_list,
                 const std::vector<std::uint64_t>& q_list, std::size_t horizon,
                 bool as_json, std::ostream& out, std::ostream&) {
  json result;
  bool negative = false;

  if (!p_list.empty() || !q_list.empty()) {
    if (p_list.empty() || q_list.empty())
      throw ParseError("obstruct: need both --p-list and --q-list");
    std::vector<Int> ps(p_list.begin(), p_list.end());
    std::vector<Int> qs(q_list.begin(), q_list.end());
    const auto scan = general_obstruction_scan(
        ps, qs, horizon ? horizon : std::min(ps.size(), qs.size()));
    result["scan"] = {{"verdict", to_string(scan.verdict)},
                      {"witness", scan.witness},
                      {"horizon", scan.horizon}};
    if (scan.offset) result["scan"]["offset"] = *scan.offset;
    result["disclaimer"] = scan.disclaimer;
    negative = scan.verdict != Verdict::NotObstructed;
  } else {
    if (p < 2 || q < 2) throw ParseError("obstruct: need --p and --q (>= 2)");
    const auto main_check = theorem_main_check(p, q);
    result["exact_base"] = {{"verdict", to_string(main_check.verdict)},
                            {"witness", main_check.witness},
                            {"conjugacy_compatible",
                             *main_check.conjugacy_compatible}};
    result["multiplicatively_independent"] = mult_independent(p, q);
    const std::size_t h = horizon ? horizon : 10;
    std::vector<Int> ps, qs;
    Int pe = 1, qe = 1;
    for (std::size_t i = 0; i < 2 * h; ++i) ps.push_back(pe *= p);
    for (std::size_t i = 0; i < h; ++i) qs.push_back(qe *= q);
    const auto scan = general_obstruction_scan(ps, qs, h);
    result["scan"] = {{"verdict", to_string(scan.verdict)},
                      {"witness", scan.witness},
                      {"horizon", scan.horizon}};
    if (scan.offset) result["scan"]["offset"] = *scan.offset;
    result["disclaimer"] = main_check.disclaimer;
    negative = main_check.verdict != Verdict::NotObstructed;
  }

  if (as_json) {
    out << envelope("obstruct", result);
  } else {
    if (result.contains("exact_base"))
      out << "factor direction: " << result["exact_base"]["verdict"].get<std::string>()
          << " (" << result["exact_base"]["witness"].get<std::string>() << ")\n"
          << "conjugacy compatible: "
          << (result["exact_base"]["conjugacy_compatible"].get<bool>() ? "yes"
                                                                        : "no")
          << "\nmultiplicatively independent: "
          << (result["multiplicatively_independent"].get<bool>() ? "yes" : "no")
          << "\n";
    out << "scan: " << result["scan"]["verdict"].get<std::string>() << " ("
        << result["scan"]["witness"].get<std::string>() << ")\n";
  }
  return negative ? 1 : 0;
}

int cmd_cobham(const std::string& first_file, const std::string& second_file,
               bool as_json, std::ostream& out, std::ostream&) {
  const auto first = substitution_from_json(read_file(first_file));
  const auto second = substitution_from_json(read_file(second_file));
  const auto report = cobham_gate(first, second);

  if (as_json) {
    const auto facts = [](const CobhamReport::SubstitutionFacts& f) {
      json j;
      j["primitive"] = f.primitive;
      j["length"] = f.length;
      if (f.coincidence)
        j["coincidence"] = {{"power", f.coincidence->power},
                            {"column", f.coincidence->column.str()}};
      else
        j["coincidence"] = nullptr;
      return j;
    };
    json result;
    result["first"] = facts(report.first);
    result["second"] = facts(report.second);
    result["lengths_independent"] = report.lengths_independent;
    result["applies"] = report.applies;
    result["failed_hypotheses"] = report.failed_hypotheses;
    result["verdict"] = report.verdict;
    out << envelope("cobham", result);
  } else {
    out << report.verdict << "\n";
    for (const auto& f : report.failed_hypotheses) out << "  - " << f << "\n";
  }
  return report.applies ? 0 : 1;
}

int cmd_export_dot(const std::string& diagram_file, const std::string& dot_file,
                   std::ostream& out, std::ostream&) {
  const auto d = diagram_from_json(read_file(diagram_file));
  const std::string dot = diagram_to_dot(d);
  check_dot(dot);
  if (dot_file.empty())
    out << dot;
  else
    write_file(dot_file, dot);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Toeplitz shifts as Bratteli-Vershik systems: towers, diagram "
               "surgeries, factoring obstructions"};
  app.name("tbv");
  app.require_subcommand(1);

  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable output");

  Inputs inputs;
  std::size_t depth = 5, window = 0, steps = 16, level = 1, ell = 1, horizon = 0;
  std::uint64_t p = 0, q = 0;
  std::vector<std::uint64_t> p_list, q_list;
  std::vector<std::size_t> cuts;
  std::string dot_file, csv_file, out_file, diagram_file, factor_file;
  std::string first_file, second_file;

  auto* analyze = app.add_subcommand("analyze", "constructive period structure");
  add_input_flags(analyze, inputs);
  analyze->add_option("--depth", depth, "structure depth (default 5)");

  auto* build = app.add_subcommand("build-bv", "Bratteli-Vershik diagram");
  add_input_flags(build, inputs);
  build->add_option("--depth", depth, "diagram levels");
  build->add_option("--window", window, "enumeration window (multiple of 2*p_depth)");
  build->add_option("--dot", dot_file, "write DOT export here");

  auto* orbit = app.add_subcommand("orbit", "Vershik orbit trace");
  add_input_flags(orbit, inputs);
  orbit->add_option("--depth", depth, "diagram levels");
  orbit->add_option("--steps", steps, "orbit length");
  orbit->add_option("--level", level, "truncation level (default 1)");
  orbit->add_option("--window", window, "enumeration window");
  orbit->add_option("--csv", csv_file, "write the trace here");

  auto* split = app.add_subcommand("split", "symbol splitting surgery");
  split->add_option("--factor", factor_file, "morphism sequence JSON")->required();
  split->add_option("--ell", ell, "level with |xi_(0,ell]| = s*|theta_1|")->required();
  split->add_option("--out", out_file, "write the rebuilt sequence here");

  auto* tele = app.add_subcommand("telescope", "compose out levels");
  tele->add_option("--diagram", diagram_file, "diagram JSON")->required();
  tele->add_option("--levels", cuts, "cut levels, e.g. 2,4,6")
      ->required()
      ->delimiter(',');
  tele->add_option("--dot", dot_file, "write DOT export here");

  auto* verify = app.add_subcommand("verify-factor", "check a realization");
  verify->add_option("--factor", factor_file, "morphism sequence JSON")->required();

  auto* obstruct = app.add_subcommand("obstruct", "factoring obstructions");
  obstruct->add_option("--p", p, "source structure base");
  obstruct->add_option("--q", q, "target structure base");
  obstruct->add_option("--p-list", p_list, "source structure entries")->delimiter(',');
  obstruct->add_option("--q-list", q_list, "target structure entries")->delimiter(',');
  obstruct->add_option("--horizon", horizon, "scan horizon (default 10)");

  auto* cobham = app.add_subcommand("cobham", "multiplicative independence gate");
  cobham->add_option("first", first_file, "first substitution JSON")->required();
  cobham->add_option("second", second_file, "second substitution JSON")->required();

  auto* exp = app.add_subcommand("export-dot", "diagram to DOT");
  exp->add_option("--diagram", diagram_file, "diagram JSON")->required();
  exp->add_option("--dot", dot_file, "output file (stdout when absent)");

  std::vector<std::string> argv_storage;
  argv_storage.push_back("tbv");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream usage;
    const int code = app.exit(e, out, usage);
    err << usage.str();
    return code == 0 ? 0 : 2;
  }

  try {
    if (*analyze)
      return cmd_analyze(inputs, capped_depth(depth, err), as_json, out, err);
    if (*build)
      return cmd_build_bv(inputs, capped_depth(depth, err), window, dot_file,
                          as_json, out, err);
    if (*orbit)
      return cmd_orbit(inputs, capped_depth(depth, err), steps, level, window,
                       csv_file, as_json, out, err);
    if (*split) return cmd_split(factor_file, ell, as_json, out_file, out, err);
    if (*tele)
      return cmd_telescope(diagram_file, cuts, dot_file, as_json, out, err);
    if (*verify) return cmd_verify_factor(factor_file, as_json, out, err);
    if (*obstruct)
      return cmd_obstruct(p, q, p_list, q_list, horizon, as_json, out, err);
    if (*cobham) return cmd_cobham(first_file, second_file, as_json, out, err);
    if (*exp) return cmd_export_dot(diagram_file, dot_file, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no command\n";
  return 2;
}

}  // namespace tbv::cli
