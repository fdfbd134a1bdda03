#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "bushy/error.hpp"
#include "bushy/fstring.hpp"

namespace bushy {

using Width = std::uint64_t;

/// Saturating arithmetic so that astronomically large order-function values
/// degrade to "no finite node can branch this much".
inline constexpr Width kUnboundedWidth = ~Width{0};

struct Violation {
  std::string what;
  FString at;
};

class ValidationReport {
 public:
  void add(std::string what, FString at = {}) {
    items_.push_back({std::move(what), std::move(at)});
  }
  void merge(const ValidationReport& other) {
    items_.insert(items_.end(), other.items_.begin(), other.items_.end());
  }
  bool ok() const noexcept { return items_.empty(); }
  const std::vector<Violation>& items() const noexcept { return items_; }
  std::string to_string() const;

 private:
  std::vector<Violation> items_;
};

/// A finite truncation of a product space prod_{i<depth} {0..widths[i]-1}.
class BoundedSpace {
 public:
  BoundedSpace() = default;
  /// Throws DomainError unless widths are nondecreasing, all >= 2, and
  /// widths.size() == depth.
  BoundedSpace(std::size_t depth, std::vector<Width> widths);
  static BoundedSpace uniform(Width width, std::size_t depth);

  std::size_t depth() const noexcept { return depth_; }
  const std::vector<Width>& widths() const noexcept { return widths_; }
  Width width(std::size_t level) const { return widths_.at(level); }

  bool contains(const FString& s) const noexcept;
  /// All strings of the given length in lexicographic order.
  std::vector<FString> strings(std::size_t level) const;
  /// All strings of length <= depth, lexicographic.
  std::vector<FString> all_strings() const;
  /// All strings of the space extending `stem`, lexicographic.
  std::vector<FString> strings_above(const FString& stem) const;
  std::size_t count(std::size_t level) const;

  /// `W0,W1,.../D`; a single width repeats to the full depth.
  std::string to_string() const;
  static BoundedSpace parse(std::string_view text);

  friend bool operator==(const BoundedSpace&, const BoundedSpace&) = default;

 private:
  std::size_t depth_ = 0;
  std::vector<Width> widths_;
};

/// Required branching per level: a constant n, or an explicit nondecreasing
/// sequence indexed by node length.
class WidthSpec {
 public:
  WidthSpec() : rep_(Width{1}) {}
  static WidthSpec constant(Width n);
  static WidthSpec leveled(std::vector<Width> values);

  bool is_constant() const noexcept { return std::holds_alternative<Width>(rep_); }
  bool defined_at(std::size_t level) const noexcept;
  /// Throws DomainError when the level is beyond a leveled sequence.
  Width at(std::size_t level) const;
  const std::vector<Width>* levels() const noexcept {
    return std::get_if<std::vector<Width>>(&rep_);
  }

  /// floor(value * mul / 2^shift), floored at 1.
  WidthSpec scaled(Width mul, unsigned shift) const;
  WidthSpec halved() const { return scaled(1, 1); }

  std::string to_string() const;
  static WidthSpec parse(std::string_view text);

  friend bool operator==(const WidthSpec&, const WidthSpec&) = default;

 private:
  std::variant<Width, std::vector<Width>> rep_;
};

/// A finite tree above a stem. Only nodes extending the stem are stored;
/// proper prefixes of the stem are implicit members.
class BushyTree {
 public:
  BushyTree() = default;
  BushyTree(FString stem, std::set<FString> nodes, WidthSpec width,
            bool exact = false);
  /// The tree consisting of the stem and its initial segments.
  static BushyTree singleton(FString stem, WidthSpec width);
  /// Every string of `space` above `stem`, exact with the space's widths.
  static BushyTree full(const BoundedSpace& space, const FString& stem);

  const FString& stem() const noexcept { return stem_; }
  const std::set<FString>& nodes() const noexcept { return nodes_; }
  const WidthSpec& width() const noexcept { return width_; }
  bool exact() const noexcept { return exact_; }

  bool contains(const FString& s) const;
  std::vector<FString> children(const FString& node) const;
  std::size_t child_count(const FString& node) const;
  bool is_leaf(const FString& node) const;
  std::vector<FString> leaves() const;
  /// Stored nodes extending `node` (including itself), lexicographic.
  std::vector<FString> nodes_above(const FString& node) const;
  std::size_t height() const;

  BushyTree with_width(WidthSpec width, bool exact = false) const;

  friend bool operator==(const BushyTree&, const BushyTree&) = default;

 private:
  FString stem_;
  std::set<FString> nodes_;
  WidthSpec width_;
  bool exact_ = false;
};

ValidationReport validate_tree(const BushyTree& t);

/// A finite set of strings. In UpwardClosed mode the stored elements are the
/// minimal antichain and membership means "has a prefix among them".
class StringSet {
 public:
  enum class Mode { Explicit, UpwardClosed };

  StringSet() = default;
  static StringSet explicit_set(std::set<FString> elements);
  static StringSet upward_closed(const std::set<FString>& generators);

  Mode mode() const noexcept { return mode_; }
  bool upward() const noexcept { return mode_ == Mode::UpwardClosed; }
  const std::set<FString>& elements() const noexcept { return elements_; }
  bool empty() const noexcept { return elements_.empty(); }

  bool contains(const FString& s) const;
  /// Explicit modes union elementwise, upward-closed modes union generators.
  /// Mixed modes throw DomainError.
  StringSet unite(const StringSet& other) const;
  /// Containment of the denoted sets.
  bool subset_of(const StringSet& other) const;

  friend bool operator==(const StringSet&, const StringSet&) = default;

 private:
  Mode mode_ = Mode::Explicit;
  std::set<FString> elements_;
};

bool set_membership(const StringSet& s, const FString& tau);

}  // namespace bushy
