#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bushy/bigness.hpp"
#include "bushy/core.hpp"
#include "bushy/functional.hpp"

namespace bushy::splitting {

/// An order function on {0..d-1} taking power-of-two values, stored by its
/// exponents. Values are never materialized.
class DyadicOrderFn {
 public:
  DyadicOrderFn() = default;
  /// Throws DomainError unless every exponent is >= 1 and the sequence is
  /// nondecreasing.
  explicit DyadicOrderFn(std::vector<BigInt> exponents);
  /// No shape checks; used for derived functions whose report carries the
  /// violations.
  static DyadicOrderFn unchecked(std::vector<BigInt> exponents);
  static DyadicOrderFn constant(const BigInt& exponent, std::size_t length);

  std::size_t length() const noexcept { return exp_.size(); }
  const BigInt& exponent(std::size_t n) const;
  const std::vector<BigInt>& exponents() const noexcept { return exp_; }

  /// `exp: e0 e1 ...`
  std::string to_string() const;
  static DyadicOrderFn parse(std::string_view text);

  friend bool operator==(const DyadicOrderFn&, const DyadicOrderFn&) = default;

 private:
  std::vector<BigInt> exp_;
};

/// w(g, l) = 2^log2_w and r(g, l) = 2^(3 + 3w). Both w and the exponent of r
/// are materialized only while log2_w stays below kMaterializeBits.
struct Growth {
  BigInt log2_w;
  std::optional<BigInt> w;
  std::optional<BigInt> r_exponent;
};
inline constexpr unsigned kMaterializeBits = 1u << 20;

Growth growth(const DyadicOrderFn& g, std::size_t l);

/// Exact test of x >= i * (3 + 3 * 2^log2_w) that stays cheap when the right
/// side is astronomically large.
bool exponent_at_least(const BigInt& x, const BigInt& i, const BigInt& log2_w);

DyadicOrderFn middle(const DyadicOrderFn& h, const DyadicOrderFn& g);
/// Exponent shifted by c, floored at 1.
DyadicOrderFn scale(const DyadicOrderFn& h, const BigInt& c);
/// The width sequence h / 2^c with values floored at 1 and saturated at
/// kUnboundedWidth.
WidthSpec to_width(const DyadicOrderFn& h, unsigned c = 0);

struct SplitAllowance {
  DyadicOrderFn h;
  DyadicOrderFn g;
  std::size_t n = 0;
  std::vector<std::size_t> levels;
};

/// Conditions (1)-(3) on the finite data. Condition (3) at level l_i compares
/// e_h(l_i) - e_g(l_i) against i * r-exponent(h, l_i).
ValidationReport check_allows_splitting(const SplitAllowance& a);

struct DerivedHS {
  DyadicOrderFn h_s;
  ValidationReport chain;          // h_S(j_i)/h_B(j_i) >= r(h_S, j_i)^i
  std::vector<std::string> notes;  // shape remarks such as a decreasing step
};

/// h_S(n) = h_M(n) below j_0 = l_1, then h_M(j_i) / r(h_S, j_i) on
/// [j_i, j_{i+1}). Underflow below exponent 1 throws DomainError.
DerivedHS derive_hS(const DyadicOrderFn& h_m, const DyadicOrderFn& h_b,
                    const std::vector<std::size_t>& levels);

/// Every cross pair of outputs is incomparable.
bool is_splitting_pair(const std::vector<FString>& a0, const std::vector<FString>& a1,
                       const TTFunctional& gamma);
bool is_splitting_pair(const BushyTree& a0, const BushyTree& a1, const TTFunctional& gamma);

/// Witness trees above roots[i]; members are the leaves.
struct SplitFamily {
  std::vector<FString> roots;
  std::vector<BushyTree> witnesses;
};

/// Pairwise splitting plus per-member validity at `width`.
ValidationReport verify_family(const SplitFamily& f, const TTFunctional& gamma,
                               const WidthSpec& width);

struct FoundSplitting {
  BigWitness a;  // g-big above alpha, inside A'
  BigWitness b;  // h-big above beta, inside the leaves of B
  std::size_t rounds = 0;  // times sigma_s was extended
  int which = 0;  // 1: incomparable set, 2: prefix case, 3: extension case
};

/// The splitting lemma loop. `pairs` maps each leaf of A to its two
/// splitting witnesses. With check_widths the 4g / 4h hypotheses are
/// enforced; the output hypothesis on B is always enforced.
FoundSplitting find_splitting(const BushyTree& a,
                              const std::map<FString, std::pair<BushyTree, BushyTree>>& pairs,
                              const BushyTree& b, const TTFunctional& gamma, const WidthSpec& g,
                              const WidthSpec& h, bool check_widths = true);

/// Two witnesses above rho inside T \ B whose outputs extend y0 and y1 for
/// some incomparable y0, y1, searched in order of y.
std::optional<std::pair<BushyTree, BushyTree>> local_splitting(const BushyTree& t,
                                                               const StringSet& b,
                                                               const TTFunctional& gamma,
                                                               const FString& rho,
                                                               const WidthSpec& width);

struct ExtendedFamily {
  SplitFamily family;
  WidthSpec member_width;  // h_M / 2^(3 + 3(k+1))
  std::vector<std::string> notes;
};

/// Adds tau_new to a pairwise splitting family of k+1 members at length l.
/// `h_b` enables the ratio precondition check. Unmet hypotheses become notes
/// unless `strict`.
ExtendedFamily extend_family(const SplitFamily& family, const FString& tau_new,
                             const BushyTree& t, const StringSet& b, const TTFunctional& gamma,
                             const DyadicOrderFn& h_m, std::size_t l,
                             const std::optional<DyadicOrderFn>& h_b = std::nullopt,
                             bool strict = false);

struct Trace {
  FString y;
  std::size_t y0_length = 0;
  std::vector<BushyTree> s;  // s[i]: every leaf output extends y restricted to y0_length + i
  bool complete = false;
  std::string note;
};
struct SplittingPair {
  BigWitness a0;
  BigWitness a1;
  std::size_t step = 0;
};
using TraceOutcome = std::variant<SplittingPair, Trace>;

TraceOutcome build_trace(const BushyTree& t, const StringSet& b, const FString& tau,
                         const TTFunctional& gamma, const DyadicOrderFn& h_m, std::size_t nbits);

struct SplitBlock {
  FString parent;
  std::size_t level = 0;       // l: children of parent
  std::size_t next_level = 0;  // l': grandchildren
};

struct SplitTree {
  BushyTree tree;
  StringSet d;
  WidthSpec h_s;
  std::vector<SplitBlock> blocks;
  bool exhausted = false;
  std::string note;
};

/// Builds the delayed-splitting subtree of T above sigma over `blocks`
/// splitting blocks. Levels are the splitting levels; nodes beyond
/// depth_budget are never searched.
SplitTree build_splitting_tree(const BushyTree& t, const StringSet& b, const FString& sigma,
                               const TTFunctional& gamma, const WidthSpec& h_s,
                               const WidthSpec& h_b, const std::vector<std::size_t>& levels,
                               std::size_t depth_budget, std::size_t blocks = 1);
SplitTree build_splitting_tree(const BushyTree& t, const StringSet& b, const FString& sigma,
                               const TTFunctional& gamma, const DyadicOrderFn& h_m,
                               const DyadicOrderFn& h_b, const std::vector<std::size_t>& levels,
                               std::size_t depth_budget, std::size_t blocks = 1);

/// Whether D ∪ B is `width`-big above sigma.
bool union_big(const StringSet& d, const StringSet& b, const FString& sigma,
               const WidthSpec& width);

/// Pair scan of the delayed splitting property for each recorded block.
ValidationReport check_delayed_splitting(const SplitTree& s, const TTFunctional& gamma);

}  // namespace bushy::splitting
