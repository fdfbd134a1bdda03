#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "bushy/core.hpp"

namespace bushy {

/// A bushy tree whose leaves all lie in `target`: a certificate that the
/// target is big above the tree's stem.
struct BigWitness {
  BushyTree tree;
  StringSet target;
};

namespace bigness {

using Membership = std::function<bool(const FString&)>;

/// Bottom-up bigness table over a finite universe of candidate nodes.
///
/// The universe must contain `stem` and be closed under taking prefixes down
/// to the stem. A node is big iff it is a member or at least width(|node|) of
/// its immediate extensions in the universe are big. Witness extraction takes
/// the lexicographically least sufficient child set at every node.
class BigTable {
 public:
  BigTable(std::vector<FString> universe, const FString& stem, const Membership& member,
           const WidthSpec& width);

  bool big(const FString& node) const;
  bool stem_big() const { return big_[0]; }
  /// The canonical witness above `node`; nullopt when small.
  std::optional<BushyTree> witness(const FString& node) const;
  const std::vector<FString>& universe() const noexcept { return nodes_; }
  std::vector<FString> big_nodes() const;

 private:
  std::ptrdiff_t index_of(const FString& s) const;

  std::vector<FString> nodes_;
  std::vector<char> big_;
  std::vector<char> member_;
  std::vector<std::vector<std::size_t>> kids_;
  WidthSpec width_;
};

/// Nodes that a witness above `stem` for `members` could ever use: the
/// prefix closure of the members extending the stem.
std::vector<FString> prefix_closure_above(const std::set<FString>& members, const FString& stem);

/// Witness that `member` is width-big above `stem`, searching only nodes of
/// `universe` (a tree or any prefix-closed candidate set).
std::optional<BushyTree> big_within(const BushyTree& universe, const FString& stem,
                                    const Membership& member, const WidthSpec& width);
std::optional<BushyTree> big_within(const std::set<FString>& universe, const FString& stem,
                                    const Membership& member, const WidthSpec& width);

/// Witness that the explicit finite set `members` is width-big above `stem`.
std::optional<BushyTree> big_among(const std::set<FString>& members, const FString& stem,
                                   const WidthSpec& width);

/// Decides whether B is width-big above stem and returns the canonical
/// witness when it is. With a space, trees are confined to it. Upward-closed
/// sets are decided over the prefix closure of their generators, which is
/// complete because any witness can be cut at its first member on each path.
std::optional<BigWitness> is_big(const StringSet& b, const FString& stem,
                                 const WidthSpec& width,
                                 const std::optional<BoundedSpace>& space = std::nullopt);

/// All strings of `space` above which B is k-big. The result is upward closed
/// when it happens to be closed under extension inside the space.
StringSet k_closure(const StringSet& b, Width k, const BoundedSpace& space);

struct LabelSplit {
  enum class Side { B, C } side;
  BigWitness witness;
};

/// Backward labelling on an (m+n-1)-bushy tree whose leaves are labelled B
/// and/or C (doubly labelled leaves count as B). Returns an m-bushy witness for
/// the B-labelled leaves or an n-bushy witness for the C-labelled ones.
LabelSplit union_label_split(const BushyTree& t, const std::set<FString>& label_b,
                             const std::set<FString>& label_c, Width m, Width n);

/// Glues a witness above every leaf of `base`.
BigWitness concatenate(const BigWitness& base, const std::map<FString, BigWitness>& extensions);

/// Tree validity plus leaf membership.
ValidationReport check_witness(const BigWitness& w);

}  // namespace bigness
}  // namespace bushy
