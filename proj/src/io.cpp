#include "bushy/io.hpp"

#include <fstream>
#include <sstream>

namespace bushy::io {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

struct Line {
  std::size_t number;
  std::string_view text;
};

std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t n = 0;
  while (!text.empty() || n == 0) {
    ++n;
    auto nl = text.find('\n');
    auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.front() != '#') out.push_back({n, line});
    if (text.empty()) break;
  }
  return out;
}

[[noreturn]] void fail(const Line& l, const std::string& what) {
  throw ParseError("line " + std::to_string(l.number) + ": " + what);
}

// "key: value" -> value, or nullopt when the key does not match.
std::optional<std::string_view> keyed(std::string_view line, std::string_view key) {
  if (line.size() <= key.size() || line.substr(0, key.size()) != key || line[key.size()] != ':') {
    return std::nullopt;
  }
  return trim(line.substr(key.size() + 1));
}

FString parse_string_at(const Line& l, std::string_view s, const std::optional<BoundedSpace>& space) {
  FString out;
  try {
    out = FString::parse(s);
  } catch (const ParseError& e) {
    fail(l, e.what());
  }
  if (space && !space->contains(out)) fail(l, "string " + out.to_string() + " outside the declared space");
  return out;
}

std::uint64_t parse_count(const Line& l, std::string_view s) {
  std::uint64_t v = 0;
  if (s.empty()) fail(l, "expected a number");
  for (char c : s) {
    if (c < '0' || c > '9') fail(l, "expected a number, got '" + std::string(s) + "'");
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    s = trim(s);
    if (s.empty()) break;
    auto sp = s.find_first_of(" \t");
    out.push_back(s.substr(0, sp));
    if (sp == std::string_view::npos) break;
    s.remove_prefix(sp);
  }
  return out;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path);
  out << contents;
}

StringSet parse_set(std::string_view text, const std::optional<BoundedSpace>& space) {
  auto lines = content_lines(text);
  if (lines.empty()) throw ParseError("set file: missing 'mode:' line");
  auto mode = keyed(lines.front().text, "mode");
  if (!mode || (*mode != "explicit" && *mode != "upclosed")) {
    fail(lines.front(), "expected 'mode: explicit' or 'mode: upclosed'");
  }
  std::set<FString> elems;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto s = parse_string_at(lines[i], lines[i].text, space);
    if (!elems.insert(s).second) fail(lines[i], "duplicate string " + s.to_string());
  }
  return *mode == "explicit" ? StringSet::explicit_set(std::move(elems)) : StringSet::upward_closed(elems);
}

std::string format_set(const StringSet& s) {
  std::string out = s.upward() ? "mode: upclosed\n" : "mode: explicit\n";
  for (const auto& e : s.elements()) out += e.to_string() + "\n";
  return out;
}

TreeFile parse_tree(std::string_view text, const std::optional<BoundedSpace>& space) {
  auto lines = content_lines(text);
  if (lines.empty()) throw ParseError("tree file: missing 'stem:' line");
  auto stem_text = keyed(lines.front().text, "stem");
  if (!stem_text) fail(lines.front(), "expected 'stem: <string>'");
  auto stem = parse_string_at(lines.front(), *stem_text, space);
  WidthSpec width;
  bool exact = false;
  std::optional<std::string> leaves_in;
  std::set<FString> nodes;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (leaves_in) fail(l, "trailing content after 'leaves-in:'");
    if (auto w = keyed(l.text, "width")) {
      try {
        width = WidthSpec::parse(*w);
      } catch (const Error& e) {
        fail(l, e.what());
      }
      continue;
    }
    if (auto e = keyed(l.text, "exact")) {
      if (*e != "yes" && *e != "no") fail(l, "expected 'exact: yes|no'");
      exact = *e == "yes";
      continue;
    }
    if (auto li = keyed(l.text, "leaves-in")) {
      leaves_in = std::string(*li);
      continue;
    }
    auto s = parse_string_at(l, l.text, space);
    if (!nodes.insert(s).second) fail(l, "duplicate node " + s.to_string());
  }
  return {BushyTree(stem, std::move(nodes), width, exact), leaves_in};
}

std::string format_tree(const BushyTree& t, const std::optional<std::string>& leaves_in) {
  std::string out = "stem: " + t.stem().to_string() + "\n";
  out += "width: " + t.width().to_string() + "\n";
  out += std::string("exact: ") + (t.exact() ? "yes" : "no") + "\n";
  for (const auto& n : t.nodes()) out += n.to_string() + "\n";
  if (leaves_in) out += "leaves-in: " + *leaves_in + "\n";
  return out;
}

TTFunctional parse_functional(std::string_view text) {
  auto lines = content_lines(text);
  if (lines.size() < 2) throw ParseError("functional file: missing 'space:' or 'out:' header");
  auto sp = keyed(lines[0].text, "space");
  if (!sp) fail(lines[0], "expected 'space: <widths>/<depth>'");
  BoundedSpace space;
  try {
    space = BoundedSpace::parse(*sp);
  } catch (const Error& e) {
    fail(lines[0], e.what());
  }
  auto ar = keyed(lines[1].text, "out");
  if (!ar) fail(lines[1], "expected 'out: <arity>'");
  const auto arity = parse_count(lines[1], *ar);
  if (arity < 2 || arity > 1u << 20) fail(lines[1], "output arity must be at least 2");

  std::map<FString, FString> assigned;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const auto& l = lines[i];
    auto arrow = l.text.find("->");
    if (arrow == std::string_view::npos) fail(l, "expected '<node> -> <output>'");
    auto node = parse_string_at(l, trim(l.text.substr(0, arrow)), space);
    auto out = parse_string_at(l, trim(l.text.substr(arrow + 2)), std::nullopt);
    for (auto s : out.symbols()) {
      if (s >= arity) fail(l, "output symbol " + std::to_string(s) + " exceeds the arity");
    }
    if (!assigned.emplace(node, out).second) fail(l, "duplicate node " + node.to_string());
  }
  auto f = TTFunctional::from_partial(space, static_cast<Symbol>(arity), assigned);
  auto mono = functional::check_monotone(f);
  if (!mono.ok()) throw DomainError("functional is not monotone: " + mono.to_string());
  return f;
}

std::string format_functional(const TTFunctional& f) {
  std::string out = "space: " + f.domain().to_string() + "\n";
  out += "out: " + std::to_string(f.out_arity()) + "\n";
  for (const auto& [node, o] : f.table()) {
    if (!node.empty() && f.at(node.prefix(node.size() - 1)) == o) continue;
    out += node.to_string() + " -> " + o.to_string() + "\n";
  }
  return out;
}

splitting::SplitAllowance parse_allowance(std::string_view text) {
  splitting::SplitAllowance a;
  bool have_h = false, have_g = false, have_n = false, have_levels = false;
  for (const auto& l : content_lines(text)) {
    try {
      if (auto v = keyed(l.text, "h")) {
        if (have_h) fail(l, "duplicate 'h:' line");
        a.h = splitting::DyadicOrderFn::parse(*v);
        have_h = true;
      } else if (auto v = keyed(l.text, "g")) {
        if (have_g) fail(l, "duplicate 'g:' line");
        a.g = splitting::DyadicOrderFn::parse(*v);
        have_g = true;
      } else if (auto v = keyed(l.text, "N")) {
        if (have_n) fail(l, "duplicate 'N:' line");
        a.n = parse_count(l, *v);
        have_n = true;
      } else if (auto v = keyed(l.text, "levels")) {
        if (have_levels) fail(l, "duplicate 'levels:' line");
        for (auto w : words(*v)) a.levels.push_back(parse_count(l, w));
        have_levels = true;
      } else {
        fail(l, "unexpected line '" + std::string(l.text) + "'");
      }
    } catch (const DomainError& e) {
      fail(l, e.what());
    }
  }
  if (!have_h || !have_g || !have_n) throw ParseError("allowance file: need 'h:', 'g:' and 'N:' lines");
  return a;
}

std::string format_allowance(const splitting::SplitAllowance& a) {
  std::string out = "h: " + a.h.to_string() + "\n";
  out += "g: " + a.g.to_string() + "\n";
  out += "N: " + std::to_string(a.n) + "\n";
  out += "levels:";
  for (auto l : a.levels) out += " " + std::to_string(l);
  return out + "\n";
}

forcing::PartialFnTable parse_phis(std::string_view text) {
  forcing::PartialFnTable t;
  for (const auto& l : content_lines(text)) {
    auto w = words(l.text);
    if (w.size() != 4) fail(l, "expected '<n> <m> <value> <stage>'");
    const auto n = parse_count(l, w[0]);
    if (n > 1u << 16) fail(l, "index too large");
    if (t.fns.size() <= n) t.fns.resize(n + 1);
    const auto m = parse_count(l, w[1]);
    if (!t.fns[n].emplace(m, std::pair{parse_count(l, w[2]), parse_count(l, w[3])}).second) {
      fail(l, "duplicate entry for phi_" + std::to_string(n) + "(" + std::to_string(m) + ")");
    }
  }
  return t;
}

std::string format_phis(const forcing::PartialFnTable& t) {
  std::string out;
  for (std::size_t n = 0; n < t.fns.size(); ++n) {
    for (const auto& [m, vs] : t.fns[n]) {
      out += std::to_string(n) + " " + std::to_string(m) + " " + std::to_string(vs.first) + " " +
             std::to_string(vs.second) + "\n";
    }
  }
  return out;
}

std::string format_rational(const Rational& q) {
  return numerator(q).str() + "/" + denominator(q).str();
}

std::string to_dot(const BushyTree& t, const TTFunctional* gamma) {
  std::string out = "digraph tree {\n  node [shape=box];\n";
  auto id = [](const FString& s) { return "\"" + s.to_string() + "\""; };
  std::vector<FString> all;
  for (std::size_t n = 0; n < t.stem().size(); ++n) all.push_back(t.stem().prefix(n));
  all.insert(all.end(), t.nodes().begin(), t.nodes().end());
  for (const auto& s : all) {
    std::string label = s.to_string();
    if (gamma && gamma->domain().contains(s)) label += "\\n" + gamma->at(s).to_string();
    out += "  " + id(s) + " [label=\"" + label + "\"];\n";
  }
  for (const auto& s : all) {
    if (s.empty()) continue;
    out += "  " + id(s.prefix(s.size() - 1)) + " -> " + id(s) + ";\n";
  }
  return out + "}\n";
}

}  // namespace bushy::io
