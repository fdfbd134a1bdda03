#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "bushy/core.hpp"
#include "bushy/forcing.hpp"
#include "bushy/functional.hpp"
#include "bushy/splitting.hpp"

// Text formats. Blank lines and lines starting with '#' are ignored by every
// parser; anything else that does not fit the grammar is a ParseError.
namespace bushy::io {

/// Whole file contents; ParseError when it cannot be read.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

/// `mode: explicit|upclosed` then one string per line.
StringSet parse_set(std::string_view text, const std::optional<BoundedSpace>& space = std::nullopt);
std::string format_set(const StringSet& s);

struct TreeFile {
  BushyTree tree;
  std::optional<std::string> leaves_in;
};
/// `stem: <string>`, optional `width: <spec>` and `exact: yes|no`, one node
/// per line, optional trailing `leaves-in: <setfile>`.
TreeFile parse_tree(std::string_view text, const std::optional<BoundedSpace>& space = std::nullopt);
std::string format_tree(const BushyTree& t, const std::optional<std::string>& leaves_in = std::nullopt);

/// `space: <widths>/<depth>`, `out: <arity>`, then `<node> -> <output>`.
/// Omitted nodes inherit the parent's output; the expansion must be monotone.
TTFunctional parse_functional(std::string_view text);
/// Canonical form: the root and every node whose output differs from its
/// parent's.
std::string format_functional(const TTFunctional& f);

/// Lines `h: exp: ...`, `g: exp: ...`, `N: <n>`, `levels: l0 l1 ...`.
splitting::SplitAllowance parse_allowance(std::string_view text);
std::string format_allowance(const splitting::SplitAllowance& a);

/// Lines `<n> <m> <value> <stage>`.
forcing::PartialFnTable parse_phis(std::string_view text);
std::string format_phis(const forcing::PartialFnTable& t);

std::string format_rational(const Rational& q);

/// Graphviz rendering; outputs become labels when a functional is given.
std::string to_dot(const BushyTree& t, const TTFunctional* gamma = nullptr);

}  // namespace bushy::io
