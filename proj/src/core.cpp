#include "bushy/core.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <sstream>

namespace bushy {

// --- FString ---------------------------------------------------------------

FString FString::child(Symbol s) const {
  auto v = symbols_;
  v.push_back(s);
  return FString(std::move(v));
}

FString FString::prefix(std::size_t n) const {
  n = std::min(n, symbols_.size());
  return FString(std::vector<Symbol>(symbols_.begin(), symbols_.begin() + n));
}

FString FString::concat(const FString& tail) const {
  auto v = symbols_;
  v.insert(v.end(), tail.symbols_.begin(), tail.symbols_.end());
  return FString(std::move(v));
}

bool FString::is_prefix_of(const FString& other) const noexcept {
  return size() <= other.size() &&
         std::equal(symbols_.begin(), symbols_.end(), other.symbols_.begin());
}

std::string FString::to_string() const {
  if (symbols_.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (i) out.push_back('.');
    out += std::to_string(symbols_[i]);
  }
  return out;
}

FString FString::parse(std::string_view text) {
  if (text == "e") return {};
  if (text.empty()) throw ParseError("empty string literal (use `e`)");
  std::vector<Symbol> out;
  std::size_t pos = 0;
  while (true) {
    auto dot = text.find('.', pos);
    auto part = text.substr(pos, dot == std::string_view::npos ? text.npos : dot - pos);
    if (part.empty()) throw ParseError("empty symbol in `" + std::string(text) + "`");
    Symbol value = 0;
    auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc{} || end != part.data() + part.size()) {
      throw ParseError("bad symbol `" + std::string(part) + "`");
    }
    out.push_back(value);
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  return FString(std::move(out));
}

// --- ValidationReport -------------------------------------------------------

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : items_) os << v.what << " at " << v.at.to_string() << '\n';
  return os.str();
}

// --- BoundedSpace -----------------------------------------------------------

BoundedSpace::BoundedSpace(std::size_t depth, std::vector<Width> widths)
    : depth_(depth), widths_(std::move(widths)) {
  if (widths_.size() != depth_) {
    throw DomainError("space: " + std::to_string(widths_.size()) +
                      " widths for depth " + std::to_string(depth_));
  }
  for (std::size_t i = 0; i < widths_.size(); ++i) {
    if (widths_[i] < 2) throw DomainError("space: width below 2 at level " + std::to_string(i));
    if (i && widths_[i] < widths_[i - 1]) {
      throw DomainError("space: widths decrease at level " + std::to_string(i));
    }
  }
}

BoundedSpace BoundedSpace::uniform(Width width, std::size_t depth) {
  return BoundedSpace(depth, std::vector<Width>(depth, width));
}

bool BoundedSpace::contains(const FString& s) const noexcept {
  if (s.size() > depth_) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] >= widths_[i]) return false;
  }
  return true;
}

std::size_t BoundedSpace::count(std::size_t level) const {
  if (level > depth_) throw DomainError("level exceeds space depth");
  std::size_t n = 1;
  for (std::size_t i = 0; i < level; ++i) n *= widths_[i];
  return n;
}

std::vector<FString> BoundedSpace::strings(std::size_t level) const {
  if (level > depth_) {
    throw DomainError("level " + std::to_string(level) + " exceeds depth " +
                      std::to_string(depth_));
  }
  std::vector<FString> out;
  out.reserve(count(level));
  std::vector<Symbol> cur(level, 0);
  while (true) {
    out.emplace_back(cur);
    std::size_t i = level;
    while (i > 0) {
      --i;
      if (++cur[i] < widths_[i]) break;
      cur[i] = 0;
      if (i == 0) return out;
    }
    if (level == 0) return out;
  }
}

std::vector<FString> BoundedSpace::strings_above(const FString& stem) const {
  std::vector<FString> out;
  if (!contains(stem)) return out;
  std::vector<FString> stack{stem};
  while (!stack.empty()) {
    auto s = std::move(stack.back());
    stack.pop_back();
    if (s.size() < depth_) {
      for (Width i = widths_[s.size()]; i-- > 0;) stack.push_back(s.child(static_cast<Symbol>(i)));
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<FString> BoundedSpace::all_strings() const { return strings_above({}); }

std::string BoundedSpace::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < widths_.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(widths_[i]);
  }
  return out + "/" + std::to_string(depth_);
}

namespace {

std::uint64_t parse_u64(std::string_view part, const char* what) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
  if (part.empty() || ec != std::errc{} || end != part.data() + part.size()) {
    throw ParseError(std::string("bad ") + what + " `" + std::string(part) + "`");
  }
  return v;
}

std::vector<std::uint64_t> parse_list(std::string_view text, char sep, const char* what) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (true) {
    auto cut = text.find(sep, pos);
    out.push_back(parse_u64(text.substr(pos, cut == text.npos ? text.npos : cut - pos), what));
    if (cut == text.npos) break;
    pos = cut + 1;
  }
  return out;
}

}  // namespace

BoundedSpace BoundedSpace::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == text.npos) throw ParseError("space must look like W0,W1,.../D");
  auto widths = parse_list(text.substr(0, slash), ',', "width");
  auto depth = parse_u64(text.substr(slash + 1), "depth");
  if (widths.size() == 1 && depth != 1) widths.assign(depth, widths.front());
  try {
    return BoundedSpace(depth, widths);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

// --- WidthSpec --------------------------------------------------------------

WidthSpec WidthSpec::constant(Width n) {
  if (n < 1) throw DomainError("constant width must be >= 1");
  WidthSpec w;
  w.rep_ = n;
  return w;
}

WidthSpec WidthSpec::leveled(std::vector<Width> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 1) throw DomainError("leveled width must be >= 1");
    if (i && values[i] < values[i - 1]) throw DomainError("leveled width decreases");
  }
  WidthSpec w;
  w.rep_ = std::move(values);
  return w;
}

bool WidthSpec::defined_at(std::size_t level) const noexcept {
  if (auto v = levels()) return level < v->size();
  return true;
}

Width WidthSpec::at(std::size_t level) const {
  if (auto n = std::get_if<Width>(&rep_)) return *n;
  const auto& v = std::get<std::vector<Width>>(rep_);
  if (level >= v.size()) {
    throw DomainError("width undefined at level " + std::to_string(level));
  }
  return v[level];
}

WidthSpec WidthSpec::scaled(Width mul, unsigned shift) const {
  auto f = [&](Width x) -> Width {
    Width y = (x != 0 && mul > kUnboundedWidth / x) ? kUnboundedWidth : x * mul;
    if (y != kUnboundedWidth) y = shift >= 64 ? 0 : (y >> shift);
    return std::max<Width>(y, 1);
  };
  WidthSpec w;
  if (auto n = std::get_if<Width>(&rep_)) {
    w.rep_ = f(*n);
  } else {
    auto v = std::get<std::vector<Width>>(rep_);
    for (auto& x : v) x = f(x);
    w.rep_ = std::move(v);
  }
  return w;
}

std::string WidthSpec::to_string() const {
  if (auto n = std::get_if<Width>(&rep_)) return std::to_string(*n);
  std::string out = "[";
  const auto& v = std::get<std::vector<Width>>(rep_);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(v[i]);
  }
  return out + "]";
}

WidthSpec WidthSpec::parse(std::string_view text) {
  try {
    if (!text.empty() && text.front() == '[') {
      if (text.back() != ']') throw ParseError("unterminated width list");
      auto inner = text.substr(1, text.size() - 2);
      return leveled(inner.empty() ? std::vector<Width>{} : parse_list(inner, ',', "width"));
    }
    return constant(parse_u64(text, "width"));
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

// --- BushyTree --------------------------------------------------------------

BushyTree::BushyTree(FString stem, std::set<FString> nodes, WidthSpec width, bool exact)
    : stem_(std::move(stem)), width_(std::move(width)), exact_(exact) {
  for (auto& n : nodes) {
    if (n.is_proper_prefix_of(stem_)) continue;
    nodes_.insert(n);
  }
  nodes_.insert(stem_);
}

BushyTree BushyTree::singleton(FString stem, WidthSpec width) {
  return BushyTree(std::move(stem), {}, std::move(width));
}

BushyTree BushyTree::full(const BoundedSpace& space, const FString& stem) {
  if (!space.contains(stem)) throw DomainError("stem outside space");
  auto all = space.strings_above(stem);
  return BushyTree(stem, std::set<FString>(all.begin(), all.end()),
                   WidthSpec::leveled(space.widths()), true);
}

bool BushyTree::contains(const FString& s) const {
  return s.is_proper_prefix_of(stem_) || nodes_.count(s) > 0;
}

std::vector<FString> BushyTree::children(const FString& node) const {
  std::vector<FString> out;
  auto it = nodes_.upper_bound(node);
  while (it != nodes_.end() && node.is_proper_prefix_of(*it)) {
    if (it->size() == node.size() + 1) {
      out.push_back(*it);
      if (it->back() == std::numeric_limits<Symbol>::max()) break;
      it = nodes_.lower_bound(node.child(it->back() + 1));
    } else {
      // A deeper node without its parent; skip to the next sibling block.
      auto head = it->prefix(node.size() + 1);
      if (head.back() == std::numeric_limits<Symbol>::max()) break;
      it = nodes_.lower_bound(node.child(head.back() + 1));
    }
  }
  return out;
}

std::size_t BushyTree::child_count(const FString& node) const { return children(node).size(); }

bool BushyTree::is_leaf(const FString& node) const {
  if (!nodes_.count(node)) return false;
  auto it = nodes_.upper_bound(node);
  return it == nodes_.end() || !node.is_proper_prefix_of(*it);
}

std::vector<FString> BushyTree::leaves() const {
  std::vector<FString> out;
  for (auto it = nodes_.begin(); it != nodes_.end(); ++it) {
    auto next = std::next(it);
    if (next == nodes_.end() || !it->is_proper_prefix_of(*next)) out.push_back(*it);
  }
  return out;
}

std::vector<FString> BushyTree::nodes_above(const FString& node) const {
  std::vector<FString> out;
  for (auto it = nodes_.lower_bound(node); it != nodes_.end() && node.is_prefix_of(*it); ++it) {
    out.push_back(*it);
  }
  return out;
}

std::size_t BushyTree::height() const {
  std::size_t h = 0;
  for (const auto& n : nodes_) h = std::max(h, n.size());
  return h;
}

BushyTree BushyTree::with_width(WidthSpec width, bool exact) const {
  BushyTree t = *this;
  t.width_ = std::move(width);
  t.exact_ = exact;
  return t;
}

ValidationReport validate_tree(const BushyTree& t) {
  ValidationReport r;
  const auto& stem = t.stem();
  for (const auto& node : t.nodes()) {
    if (!stem.is_prefix_of(node)) {
      r.add(stem.comparable(node) ? "node is a proper prefix of the stem"
                                  : "node incomparable with stem",
            node);
      continue;
    }
    if (node != stem && !t.nodes().count(node.prefix(node.size() - 1))) {
      r.add("parent missing", node);
    }
    auto kids = t.child_count(node);
    if (kids == 0) continue;
    if (!t.width().defined_at(node.size())) {
      r.add("width undefined at node level", node);
      continue;
    }
    auto need = t.width().at(node.size());
    if (kids < need) {
      r.add("non-leaf has " + std::to_string(kids) + " < " + std::to_string(need) +
                " children",
            node);
    } else if (t.exact() && kids != need) {
      r.add("exact tree node has " + std::to_string(kids) + " != " + std::to_string(need) +
                " children",
            node);
    }
  }
  return r;
}

// --- StringSet --------------------------------------------------------------

StringSet StringSet::explicit_set(std::set<FString> elements) {
  StringSet s;
  s.mode_ = Mode::Explicit;
  s.elements_ = std::move(elements);
  return s;
}

StringSet StringSet::upward_closed(const std::set<FString>& generators) {
  StringSet s;
  s.mode_ = Mode::UpwardClosed;
  // In lexicographic order a prefix precedes its extensions, so one pass
  // against the last kept element suffices.
  for (const auto& g : generators) {
    if (!s.elements_.empty() && s.elements_.rbegin()->is_prefix_of(g)) continue;
    s.elements_.insert(s.elements_.end(), g);
  }
  return s;
}

bool StringSet::contains(const FString& s) const {
  if (mode_ == Mode::Explicit) return elements_.count(s) > 0;
  if (elements_.empty()) return false;
  for (std::size_t n = 0; n <= s.size(); ++n) {
    if (elements_.count(s.prefix(n))) return true;
  }
  return false;
}

StringSet StringSet::unite(const StringSet& other) const {
  if (mode_ != other.mode_) throw DomainError("union of sets with different modes");
  std::set<FString> all = elements_;
  all.insert(other.elements_.begin(), other.elements_.end());
  return mode_ == Mode::Explicit ? explicit_set(std::move(all)) : upward_closed(all);
}

bool StringSet::subset_of(const StringSet& other) const {
  if (mode_ == Mode::UpwardClosed && other.mode_ == Mode::Explicit) return elements_.empty();
  for (const auto& e : elements_) {
    if (!other.contains(e)) return false;
  }
  return true;
}

bool set_membership(const StringSet& s, const FString& tau) { return s.contains(tau); }

}  // namespace bushy
