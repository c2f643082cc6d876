#include "tbv/serialize.hpp"

#include <cctype>
#include <sstream>

#include "json.hpp"

namespace tbv {
namespace {

using nlohmann::json;

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

template <typename T>
T expect(const json& j, const char* key) {
  if (!j.contains(key))
    throw ParseError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("field \"") + key + "\": " + e.what());
  }
}

Alphabet alphabet_from(const json& j) {
  const auto symbols = expect<std::vector<std::string>>(j, "alphabet");
  std::string letters;
  for (const auto& s : symbols) {
    if (s.size() != 1)
      throw ParseError("alphabet entries must be single characters");
    letters += s;
  }
  return Alphabet(letters);
}

json alphabet_to(const Alphabet& a) {
  json out = json::array();
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(std::string(1, a.at(i)));
  return out;
}

std::string quote_dot(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string tower_to_json(const SkeletonTower& t) {
  json out;
  out["alphabet"] = alphabet_to(t.alphabet());
  out["stages"] = json::array();
  for (const auto& stage : t.stages()) {
    json s;
    s["p"] = stage.period;
    s["cells"] = stage.cells.text();
    out["stages"].push_back(std::move(s));
  }
  return out.dump(2) + "\n";
}

SkeletonTower tower_from_json(const std::string& text) {
  const json j = parse(text);
  Alphabet alphabet = alphabet_from(j);
  std::vector<SkeletonTower::Stage> stages;
  if (!j.contains("stages") || !j.at("stages").is_array())
    throw ParseError("missing \"stages\" array");
  for (const json& s : j.at("stages")) {
    const auto p = expect<std::uint64_t>(s, "p");
    auto cells = expect<std::string>(s, "cells");
    stages.push_back({p, PartialWord(std::move(cells))});
  }
  try {
    return SkeletonTower(std::move(alphabet), std::move(stages));
  } catch (const Error& e) {
    throw ParseError(std::string("invalid tower: ") + e.what());
  }
}

std::string substitution_to_json(const Substitution& s) {
  json out;
  out["alphabet"] = alphabet_to(s.alphabet());
  json images = json::object();
  for (std::size_t i = 0; i < s.alphabet().size(); ++i)
    images[std::string(1, s.alphabet().at(i))] = s.images()[i];
  out["images"] = std::move(images);
  return out.dump(2) + "\n";
}

Substitution substitution_from_json(const std::string& text) {
  const json j = parse(text);
  Alphabet alphabet = alphabet_from(j);
  if (!j.contains("images") || !j.at("images").is_object())
    throw ParseError("missing \"images\" object");
  std::map<Symbol, Word> images;
  for (const auto& [key, value] : j.at("images").items()) {
    if (key.size() != 1) throw ParseError("image keys must be single characters");
    if (!value.is_string()) throw ParseError("image values must be strings");
    images[key[0]] = value.get<std::string>();
  }
  try {
    return Substitution::from_map(alphabet, images);
  } catch (const Error& e) {
    throw ParseError(std::string("invalid substitution: ") + e.what());
  }
}

Substitution substitution_from_inline(const std::string& text) {
  std::string letters;
  std::map<Symbol, Word> images;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq != 1 || item.size() < 3)
      throw ParseError("inline substitution entries look like a=ab");
    const Symbol from = item[0];
    if (letters.find(from) != std::string::npos)
      throw ParseError(std::string("duplicate image for '") + from + "'");
    letters.push_back(from);
    images[from] = item.substr(2);
  }
  if (letters.empty()) throw ParseError("empty inline substitution");
  try {
    return Substitution::from_map(Alphabet(letters), images);
  } catch (const Error& e) {
    throw ParseError(std::string("invalid substitution: ") + e.what());
  }
}

std::string diagram_to_json(const OrderedBratteliDiagram& d) {
  json out;
  out["levels"] = json::array();
  for (std::size_t i = 0; i <= d.depth(); ++i)
    out["levels"].push_back(d.level_names(i));
  out["theta"] = json::array();
  for (std::size_t i = 1; i <= d.depth(); ++i) {
    json table = json::object();
    for (std::size_t v = 0; v < d.level_size(i); ++v) {
      json word = json::array();
      for (VertexId w : d.theta_word(i, static_cast<VertexId>(v)))
        word.push_back(d.name(i - 1, w));
      table[d.name(i, static_cast<VertexId>(v))] = std::move(word);
    }
    out["theta"].push_back(std::move(table));
  }
  json labels = json::object();
  for (std::size_t i = 0; i <= d.depth(); ++i)
    for (std::size_t v = 0; v < d.level_size(i); ++v)
      if (const auto& l = d.label(i, static_cast<VertexId>(v)); !l.empty())
        labels[std::to_string(i) + "/" + d.name(i, static_cast<VertexId>(v))] = l;
  if (!labels.empty()) out["labels"] = std::move(labels);
  json marks = json::object();
  for (std::size_t i = 0; i <= d.depth(); ++i)
    if (const auto mark = d.min_mark(i))
      marks[std::to_string(i)] = d.name(i, *mark);
  if (!marks.empty()) out["min_marks"] = std::move(marks);
  return out.dump(2) + "\n";
}

OrderedBratteliDiagram diagram_from_json(const std::string& text) {
  const json j = parse(text);
  const auto names = expect<std::vector<std::vector<std::string>>>(j, "levels");
  if (!j.contains("theta") || !j.at("theta").is_array())
    throw ParseError("missing \"theta\" array");
  const json& theta = j.at("theta");
  if (names.empty() || theta.size() + 1 != names.size())
    throw ParseError("need one theta table per level >= 1");

  std::vector<std::vector<VertexWord>> words;
  for (std::size_t i = 1; i < names.size(); ++i) {
    const json& table = theta[i - 1];
    if (!table.is_object()) throw ParseError("theta entries must be objects");
    std::vector<VertexWord> level_words(names[i].size());
    std::vector<bool> seen(names[i].size(), false);
    for (const auto& [vertex, word] : table.items()) {
      const auto vit = std::find(names[i].begin(), names[i].end(), vertex);
      if (vit == names[i].end())
        throw ParseError("theta mentions unknown vertex \"" + vertex + "\"");
      const auto v = static_cast<std::size_t>(vit - names[i].begin());
      seen[v] = true;
      if (!word.is_array()) throw ParseError("theta words must be arrays");
      for (const json& letter : word) {
        if (!letter.is_string()) throw ParseError("theta letters must be strings");
        const auto& below = names[i - 1];
        const auto wit = std::find(below.begin(), below.end(),
                                   letter.get<std::string>());
        if (wit == below.end())
          throw ParseError("theta letter \"" + letter.get<std::string>() +
                           "\" is not a level-" + std::to_string(i - 1) +
                           " vertex");
        level_words[v].push_back(static_cast<VertexId>(wit - below.begin()));
      }
    }
    for (std::size_t v = 0; v < seen.size(); ++v)
      if (!seen[v])
        throw ParseError("theta missing vertex \"" + names[i][v] + "\"");
    words.push_back(std::move(level_words));
  }

  OrderedBratteliDiagram out = [&] {
    try {
      return OrderedBratteliDiagram(names, std::move(words));
    } catch (const Error& e) {
      throw ParseError(std::string("invalid diagram: ") + e.what());
    }
  }();

  if (j.contains("labels")) {
    for (const auto& [key, value] : j.at("labels").items()) {
      const auto slash = key.find('/');
      if (slash == std::string::npos || !value.is_string())
        throw ParseError("labels use \"level/vertex\" keys and string values");
      const std::size_t level = std::stoul(key.substr(0, slash));
      const auto v = out.find_vertex(level, key.substr(slash + 1));
      if (!v) throw ParseError("label for unknown vertex \"" + key + "\"");
      out.set_label(level, *v, value.get<std::string>());
    }
  }
  if (j.contains("min_marks")) {
    for (const auto& [key, value] : j.at("min_marks").items()) {
      if (!value.is_string()) throw ParseError("min_marks values are names");
      const std::size_t level = std::stoul(key);
      const auto v = out.find_vertex(level, value.get<std::string>());
      if (!v) throw ParseError("min mark names unknown vertex at level " + key);
      out.set_min_mark(level, *v);
    }
  }
  return out;
}

std::string morphism_sequence_to_json(const MorphismSequence& ms) {
  json out;
  out["source"] = json::parse(diagram_to_json(ms.source));
  out["target"] = json::parse(diagram_to_json(ms.target));
  // levels carry the implicit root entry n_0 = 0 on the wire
  json levels = json::array();
  levels.push_back(0);
  for (std::size_t n : ms.levels) levels.push_back(n);
  out["levels"] = std::move(levels);
  out["maps"] = json::array();
  for (std::size_t i = 1; i <= ms.count(); ++i) {
    json table = json::object();
    for (std::size_t w = 0; w < ms.eta(i).size(); ++w) {
      json word = json::array();
      for (VertexId v : ms.eta(i)[w]) word.push_back(ms.target.name(i, v));
      table[ms.source.name(ms.levels[i - 1], static_cast<VertexId>(w))] =
          std::move(word);
    }
    out["maps"].push_back(std::move(table));
  }
  return out.dump(2) + "\n";
}

MorphismSequence morphism_sequence_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.contains("source") || !j.contains("target"))
    throw ParseError("morphism sequence needs embedded source/target diagrams");
  MorphismSequence ms{diagram_from_json(j.at("source").dump()),
                      diagram_from_json(j.at("target").dump()),
                      expect<std::vector<std::size_t>>(j, "levels"),
                      {}};
  if (ms.levels.empty() || ms.levels.front() != 0)
    throw ParseError("levels must start with the root entry 0");
  ms.levels.erase(ms.levels.begin());
  if (!j.contains("maps") || !j.at("maps").is_array())
    throw ParseError("missing \"maps\" array");
  const json& maps = j.at("maps");
  if (maps.size() != ms.levels.size())
    throw ParseError("need one map per level entry");
  for (std::size_t i = 1; i <= ms.levels.size(); ++i) {
    const std::size_t n_i = ms.levels[i - 1];
    if (n_i > ms.source.depth())
      throw ParseError("level " + std::to_string(n_i) +
                       " exceeds the source depth");
    if (i > ms.target.depth())
      throw ParseError("more maps than target levels");
    const json& table = maps[i - 1];
    if (!table.is_object()) throw ParseError("maps entries must be objects");
    std::vector<VertexWord> images(ms.source.level_size(n_i));
    std::vector<bool> seen(images.size(), false);
    for (const auto& [vertex, word] : table.items()) {
      const auto w = ms.source.find_vertex(n_i, vertex);
      if (!w)
        throw ParseError("map mentions unknown source vertex \"" + vertex + "\"");
      seen[*w] = true;
      if (!word.is_array()) throw ParseError("map words must be arrays");
      for (const json& letter : word) {
        const auto v = ms.target.find_vertex(i, letter.get<std::string>());
        if (!v)
          throw ParseError("map letter \"" + letter.get<std::string>() +
                           "\" is not a target level-" + std::to_string(i) +
                           " vertex");
        images[*w].push_back(*v);
      }
    }
    for (std::size_t w = 0; w < seen.size(); ++w)
      if (!seen[w])
        throw ParseError("map missing source vertex \"" +
                         ms.source.name(n_i, static_cast<VertexId>(w)) + "\"");
    ms.maps.push_back(std::move(images));
  }
  return ms;
}

std::string diagram_to_dot(const OrderedBratteliDiagram& d) {
  std::ostringstream out;
  out << "digraph bratteli {\n";
  out << "  rankdir=BT;\n";
  out << "  node [shape=box];\n";
  for (std::size_t i = 0; i <= d.depth(); ++i) {
    out << "  { rank=same;";
    for (std::size_t v = 0; v < d.level_size(i); ++v) {
      const std::string id = "L" + std::to_string(i) + "/" +
                             d.name(i, static_cast<VertexId>(v));
      out << " " << quote_dot(id);
      const auto& label = d.label(i, static_cast<VertexId>(v));
      out << " [label=" << quote_dot(label.empty()
                                         ? d.name(i, static_cast<VertexId>(v))
                                         : label)
          << "];";
    }
    out << " }\n";
  }
  for (std::size_t i = 1; i <= d.depth(); ++i) {
    for (std::size_t v = 0; v < d.level_size(i); ++v) {
      const VertexWord& w = d.theta_word(i, static_cast<VertexId>(v));
      for (std::size_t e = 0; e < w.size(); ++e) {
        const std::string from = "L" + std::to_string(i - 1) + "/" +
                                 d.name(i - 1, w[e]);
        const std::string to = "L" + std::to_string(i) + "/" +
                               d.name(i, static_cast<VertexId>(v));
        out << "  " << quote_dot(from) << " -> " << quote_dot(to)
            << " [label=" << quote_dot(std::to_string(e));
        if (e == 0 && e + 1 == w.size()) out << ", style=\"bold,dashed\"";
        else if (e == 0) out << ", style=bold";
        else if (e + 1 == w.size()) out << ", style=dashed";
        out << "];\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

namespace {

/// Minimal validating scanner/parser for the DOT digraph subset.
class DotChecker {
 public:
  explicit DotChecker(const std::string& text) : text_(text) {}

  void run() {
    expect_word("digraph");
    if (peek() != '{') read_id();  // optional graph name
    expect_char('{');
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) throw ParseError("dot: unexpected end of input");
      if (peek() == '}') {
        ++pos_;
        break;
      }
      statement();
    }
    skip_space();
    if (pos_ != text_.size()) throw ParseError("dot: trailing characters");
  }

 private:
  void statement() {
    if (peek() == '{') {  // anonymous subgraph (rank groups)
      ++pos_;
      while (true) {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("dot: unterminated subgraph");
        if (peek() == '}') {
          ++pos_;
          break;
        }
        statement();
      }
      return;
    }
    const std::string id = read_id();
    skip_space();
    if (match("->")) {
      read_id();
      skip_space();
      if (peek() == '[') attr_list();
      expect_char(';');
      return;
    }
    if (peek() == '=') {  // graph attribute, e.g. rankdir=BT
      ++pos_;
      read_id();
      expect_char(';');
      return;
    }
    if (peek() == '[') {  // node statement or node/edge defaults
      attr_list();
      skip_space();
      if (peek() == ';') ++pos_;  // node defaults inside rank groups omit it
      return;
    }
    if (peek() == ';') {  // bare node
      ++pos_;
      return;
    }
    throw ParseError("dot: malformed statement near \"" + id + "\"");
  }

  void attr_list() {
    expect_char('[');
    while (true) {
      skip_space();
      if (peek() == ']') {
        ++pos_;
        return;
      }
      read_id();
      expect_char('=');
      read_id();
      skip_space();
      if (peek() == ',') ++pos_;
    }
  }

  char peek() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("dot: unexpected end of input");
    return text_[pos_];
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool match(const std::string& token) {
    skip_space();
    if (text_.compare(pos_, token.size(), token) == 0) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect_char(char c) {
    if (peek() != c)
      throw ParseError(std::string("dot: expected '") + c + "'");
    ++pos_;
  }

  void expect_word(const std::string& word) {
    if (!match(word)) throw ParseError("dot: expected \"" + word + "\"");
  }

  std::string read_id() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("dot: expected identifier");
    if (text_[pos_] == '"') {
      std::string out;
      ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
        out.push_back(text_[pos_++]);
      }
      if (pos_ >= text_.size()) throw ParseError("dot: unterminated string");
      ++pos_;
      return out;
    }
    std::string out;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_' || text_[pos_] == '.'))
      out.push_back(text_[pos_++]);
    if (out.empty()) throw ParseError("dot: expected identifier");
    return out;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

void check_dot(const std::string& text) { DotChecker(text).run(); }

std::string orbit_to_csv(const OrderedBratteliDiagram& d, const OrbitWord& orbit) {
  std::ostringstream out;
  out << "step,vertex,height,letter\n";
  const bool lettered = !d.label(1, 0).empty();
  for (std::size_t n = 0; n < orbit.entries.size(); ++n) {
    const TruncatedPath& tp = orbit.entries[n];
    out << n << "," << d.name(orbit.level, tp.vertex) << "," << tp.height << ",";
    if (lettered)
      out << read_letter(d, prefix_from_truncation(d, orbit.level, tp));
    out << "\n";
  }
  return out.str();
}

}  // namespace tbv
