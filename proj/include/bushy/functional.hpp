#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bushy/core.hpp"

namespace bushy {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// A total finite truth-table functional: every string of the domain space
/// maps to an output string over {0..out_arity-1}. Monotonicity is not
/// enforced on construction; see functional::check_monotone.
class TTFunctional {
 public:
  TTFunctional() = default;
  /// Throws DomainError when a domain string is missing, a key lies outside
  /// the space, or an output symbol is out of range.
  TTFunctional(BoundedSpace domain, Symbol out_arity, std::map<FString, FString> table);
  /// Omitted nodes inherit their parent's output.
  static TTFunctional from_partial(BoundedSpace domain, Symbol out_arity,
                                   const std::map<FString, FString>& assigned);

  const BoundedSpace& domain() const noexcept { return domain_; }
  Symbol out_arity() const noexcept { return out_arity_; }
  const std::map<FString, FString>& table() const noexcept { return table_; }
  /// Throws DomainError outside the domain space.
  const FString& at(const FString& sigma) const;
  /// Output symbol at position x, if the output is that long.
  std::optional<Symbol> bit(const FString& sigma, std::size_t x) const;

  friend bool operator==(const TTFunctional&, const TTFunctional&) = default;

 private:
  BoundedSpace domain_;
  Symbol out_arity_ = 2;
  std::map<FString, FString> table_;
};

/// A finite union of binary cylinders kept as a canonical antichain: covered
/// cylinders are absorbed and sibling pairs merge into their parent.
class MeasuredClass {
 public:
  MeasuredClass() = default;
  /// Throws DomainError for non-binary symbols.
  explicit MeasuredClass(std::span<const FString> cylinders);

  const std::set<FString>& cylinders() const noexcept { return cylinders_; }
  bool empty() const noexcept { return cylinders_.empty(); }
  bool covers(const FString& w) const;
  Rational measure() const;

  friend bool operator==(const MeasuredClass&, const MeasuredClass&) = default;

 private:
  std::set<FString> cylinders_;
};

namespace functional {

const FString& evaluate(const TTFunctional& gamma, const FString& sigma);
ValidationReport check_monotone(const TTFunctional& gamma);
/// Least level at which every string gives at least `bits` output symbols.
std::optional<std::size_t> convergence_level(const TTFunctional& gamma, std::size_t bits);
/// Binary outputs only.
MeasuredClass image_class(const TTFunctional& gamma, std::span<const FString> leaves);
Rational measure(const MeasuredClass& c);

/// Measure of the subclass whose bits at the given (distinct) positions take
/// the given values.
Rational measure_with_bits(const MeasuredClass& c,
                           std::span<const std::pair<std::size_t, Symbol>> fixed);

}  // namespace functional
}  // namespace bushy
