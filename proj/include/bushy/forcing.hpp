#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "bushy/bigness.hpp"
#include "bushy/core.hpp"
#include "bushy/functional.hpp"

namespace bushy::forcing {

/// (σ, B) with B k-small above σ.
struct BasicCondition {
  FString sigma;
  StringSet bad;
  Width k = 2;
};

/// (σ, T, B) with T exactly j-bushy and B bound(|σ|)-small above σ.
struct TreeCondition {
  FString sigma;
  BushyTree tree;
  StringSet bad;
  WidthSpec j;
  WidthSpec bound;
};

ValidationReport check_condition(const BasicCondition& c);
ValidationReport check_condition(const TreeCondition& c);

/// c1 extends c2: longer (or equal) stem, larger bad set.
bool extends(const BasicCondition& c1, const BasicCondition& c2);

struct ForcedValue {
  Symbol value = 0;
  BigWitness witness;
};

/// Least value i such that {τ ⪰ stem : Γ(τ)[m] = i, τ ∉ avoid} is k-big above
/// the stem, with its canonical witness.
std::optional<ForcedValue> force_value(const TTFunctional& gamma, const FString& stem,
                                       std::size_t m, Width k, const StringSet& avoid);

/// One diagonalization round's input e and the value the opponent commits to
/// at e. Without a value the trap adopts whatever gets forced.
struct Trap {
  std::size_t input = 0;
  std::optional<Symbol> value;
};

struct DiagRound {
  std::size_t round = 0;
  std::size_t defeated = 0;  // index into the original family
  FString stem;
  Symbol value = 0;
  BigWitness witness;
};

/// Output of the first functional (by convergence height, then list order)
/// to give at least x+1 symbols along τ.
std::optional<std::pair<std::size_t, Symbol>> first_convergence(
    const std::vector<const TTFunctional*>& family, const FString& tau, std::size_t x);

std::vector<DiagRound> diagonalize_family(const std::vector<TTFunctional>& family,
                                          const std::vector<Trap>& traps, Width k,
                                          const FString& stem = {});

/// The divergence-forcing branch: τ with bad set C_x ∪ B kept small.
struct DivergenceCondition {
  FString tau;
  StringSet bad;
  WidthSpec width;
};
using PartialityOutcome = std::variant<DivergenceCondition, BigWitness>;

/// C_x = {ρ ∈ T : |Γ(ρ)| > x}. If C_x ∪ B is w_small-small above τ within T,
/// returns the divergence condition; otherwise a w_big witness for C_x \ B
/// (w_big defaults to half of w_small).
PartialityOutcome partiality_split(const TTFunctional& gamma, const BushyTree& t,
                                   const StringSet& b, const FString& tau, std::size_t x,
                                   const WidthSpec& w_small,
                                   const std::optional<WidthSpec>& w_big = std::nullopt);

struct TotalSubtree {
  BushyTree tree;
  WidthSpec width;
  std::vector<std::size_t> levels;
};

/// A node above which C_x ∪ B is not j(|τ|)-big: the Case-2 alternative.
struct PartialityWitness {
  FString tau;
  std::size_t x = 0;
  StringSet bad;  // (C_x ∪ B) restricted to T above τ
};
using TotalityOutcome = std::variant<TotalSubtree, PartialityWitness>;

/// Thins T above σ, round by round, to a regular tree whose level-l_i leaves
/// give at least i output symbols or lie in B. B is read as upward closed.
TotalityOutcome build_total_subtree(const BushyTree& t, const StringSet& b,
                                    const TTFunctional& gamma, const FString& sigma,
                                    std::size_t rounds);

struct KurtzStep {
  BushyTree next;
  std::size_t r = 0;
  std::size_t s = 0;
  std::size_t m = 0;            // max output length over the padded leaves
  std::size_t pad_level = 0;    // level of the padded leaves
  std::size_t force_level = 0;  // level l of the new leaves
  std::vector<std::vector<char>> rho;  // rho[k - m][j]
  Rational mu_before;
  Rational mu_after;
  Rational mu_excluded;  // measure of Γ(S_i) ∩ {X : X(r) = 0, X(s) = 1}
};

/// One measure-reduction round on a regular 2-bushy tree inside Γ's domain.
KurtzStep kurtz_step(const TTFunctional& gamma, const BushyTree& s_i);

struct KurtzRecord {
  std::size_t round = 0;
  BushyTree tree;
  std::optional<std::size_t> r;
  std::optional<std::size_t> s;
  Rational mu;
};

struct KurtzTrace {
  std::vector<KurtzRecord> records;
  bool truncated = false;
  std::string note;
};

KurtzTrace kurtz_run(const TTFunctional& gamma, std::size_t rounds, const FString& stem = {});

struct Majorant {
  Symbol value = 0;
  BushyTree witness;
};

/// Value at position i after the patch "nodes in B read as 0". The canonical
/// witness within T at T's width, and the largest value on it.
std::optional<Symbol> patched_value(const TTFunctional& xi, const StringSet& b,
                                    const FString& tau, std::size_t i);
Majorant majorize(const BushyTree& t, const StringSet& b, const TTFunctional& xi, std::size_t i);

/// φ_n as a finite table input -> (value, stage of convergence).
struct PartialFnTable {
  std::vector<std::map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>>> fns;

  /// Value of φ_n(m) if it has converged by `stage`.
  std::optional<std::uint64_t> value(std::size_t n, std::uint64_t m, std::uint64_t stage) const;
};

struct ReductionTable {
  std::map<std::pair<FString, std::uint64_t>, std::uint64_t> entries;
  std::map<FString, std::uint64_t> reservations;
  /// stage s -> T_s; everything outside [T_s] gets the default value 0 at s.
  std::vector<std::set<FString>> defaults;

  ValidationReport check_consistency() const;
  /// Ψ^g(m) as determined by the finite string g alone.
  std::optional<std::uint64_t> eval(const FString& g, std::uint64_t m) const;
};

struct PsiIdentity {
  FString node;
  std::size_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t phi = 0;
  std::uint64_t psi = 0;
};

struct ProbeReport {
  FString probe;
  std::vector<FString> halted;  // prefixes where a subconstruction is stuck
  std::vector<std::optional<std::uint64_t>> values;  // Ψ^g(m) for m < stages
  std::vector<PsiIdentity> identities;
};

struct PsiReport {
  std::vector<ProbeReport> probes;
  std::size_t waiting = 0;  // subconstructions still waiting when the budget ran out
};

struct PsiResult {
  ReductionTable psi;
  PsiReport report;
};

/// Runs the subconstructions above every proper prefix of the probes for the
/// given number of stages.
PsiResult psi_simulate(const PartialFnTable& phis, std::uint64_t stages,
                       const std::vector<FString>& probes);

}  // namespace bushy::forcing
