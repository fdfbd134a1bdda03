#include <sstream>

#include "bushy/splitting.hpp"

namespace bushy::splitting {

DyadicOrderFn::DyadicOrderFn(std::vector<BigInt> exponents) : exp_(std::move(exponents)) {
  for (std::size_t n = 0; n < exp_.size(); ++n) {
    if (exp_[n] < 1) throw DomainError("order function: exponent below 1 at " + std::to_string(n));
    if (n > 0 && exp_[n] < exp_[n - 1]) {
      throw DomainError("order function: exponents decrease at " + std::to_string(n));
    }
  }
}

DyadicOrderFn DyadicOrderFn::unchecked(std::vector<BigInt> exponents) {
  DyadicOrderFn f;
  f.exp_ = std::move(exponents);
  return f;
}

DyadicOrderFn DyadicOrderFn::constant(const BigInt& exponent, std::size_t length) {
  return DyadicOrderFn(std::vector<BigInt>(length, exponent));
}

const BigInt& DyadicOrderFn::exponent(std::size_t n) const {
  if (n >= exp_.size()) {
    throw DomainError("order function: level " + std::to_string(n) + " outside domain of length " +
                      std::to_string(exp_.size()));
  }
  return exp_[n];
}

std::string DyadicOrderFn::to_string() const {
  std::string out = "exp:";
  for (const auto& e : exp_) out += " " + e.str();
  return out;
}

DyadicOrderFn DyadicOrderFn::parse(std::string_view text) {
  std::string s(text);
  auto colon = s.find(':');
  if (colon == std::string::npos || s.substr(0, colon).find("exp") == std::string::npos) {
    throw ParseError("order function: expected 'exp: e0 e1 ...'");
  }
  std::istringstream in(s.substr(colon + 1));
  std::vector<BigInt> exps;
  std::string tok;
  while (in >> tok) {
    if (tok.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("order function: bad exponent '" + tok + "'");
    }
    exps.emplace_back(tok);
  }
  return DyadicOrderFn(std::move(exps));
}

namespace {

BigInt sum_below(const DyadicOrderFn& g, std::size_t l) {
  BigInt total = 0;
  for (std::size_t i = 0; i < l; ++i) total += g.exponent(i);
  return total;
}

}  // namespace

Growth growth(const DyadicOrderFn& g, std::size_t l) {
  if (l > g.length()) {
    throw DomainError("growth: level " + std::to_string(l) + " beyond domain of length " +
                      std::to_string(g.length()));
  }
  Growth out;
  out.log2_w = sum_below(g, l);
  if (out.log2_w <= kMaterializeBits) {
    out.w = BigInt(1) << out.log2_w.convert_to<unsigned>();
    out.r_exponent = 3 + 3 * *out.w;
  }
  return out;
}

bool exponent_at_least(const BigInt& x, const BigInt& i, const BigInt& log2_w) {
  if (i <= 0) return x >= 0;
  if (x <= 0) return false;
  // 3 * 2^K alone exceeds x once K passes the bit length of x.
  if (log2_w > BigInt(msb(x)) + 1) return false;
  const BigInt rhs = i * (3 + 3 * (BigInt(1) << log2_w.convert_to<unsigned>()));
  return x >= rhs;
}

DyadicOrderFn middle(const DyadicOrderFn& h, const DyadicOrderFn& g) {
  if (h.length() != g.length()) throw DomainError("middle: domain lengths differ");
  std::vector<BigInt> e(h.length());
  for (std::size_t n = 0; n < e.size(); ++n) e[n] = (h.exponent(n) + g.exponent(n)) / 2;
  return DyadicOrderFn::unchecked(std::move(e));
}

DyadicOrderFn scale(const DyadicOrderFn& h, const BigInt& c) {
  std::vector<BigInt> e(h.length());
  for (std::size_t n = 0; n < e.size(); ++n) {
    e[n] = h.exponent(n) + c;
    if (e[n] < 1) e[n] = 1;
  }
  return DyadicOrderFn::unchecked(std::move(e));
}

WidthSpec to_width(const DyadicOrderFn& h, unsigned c) {
  std::vector<Width> v(h.length());
  for (std::size_t n = 0; n < v.size(); ++n) {
    const BigInt e = h.exponent(n) - c;
    if (e <= 0) {
      v[n] = 1;
    } else if (e >= 64) {
      v[n] = kUnboundedWidth;
    } else {
      v[n] = Width{1} << e.convert_to<unsigned>();
    }
  }
  return WidthSpec::leveled(std::move(v));
}

ValidationReport check_allows_splitting(const SplitAllowance& a) {
  ValidationReport r;
  const auto& h = a.h;
  const auto& g = a.g;
  if (h.length() != g.length()) {
    r.add("h and g have different domains");
    return r;
  }
  if (a.n >= h.length()) {
    r.add("N = " + std::to_string(a.n) + " outside the domain");
    return r;
  }
  if (h.exponent(a.n) < g.exponent(a.n)) r.add("condition (1): h(N) < g(N) at level " + std::to_string(a.n));
  for (auto n = a.n + 1; n < h.length(); ++n) {
    if (h.exponent(n) - g.exponent(n) < h.exponent(n - 1) - g.exponent(n - 1)) {
      r.add("condition (2): h/g decreases at level " + std::to_string(n));
      break;
    }
  }
  for (std::size_t i = 0; i < a.levels.size(); ++i) {
    const auto l = a.levels[i];
    if (i == 0 && l < a.n) {
      r.add("condition (3): l_0 = " + std::to_string(l) + " below N");
      break;
    }
    if (i > 0 && l <= a.levels[i - 1]) {
      r.add("condition (3): levels not increasing at l_" + std::to_string(i));
      break;
    }
    if (l >= h.length()) {
      r.add("condition (3): l_" + std::to_string(i) + " = " + std::to_string(l) + " outside the domain");
      break;
    }
    if (!exponent_at_least(h.exponent(l) - g.exponent(l), BigInt(i), sum_below(h, l))) {
      r.add("condition (3): h/g < r(h, l)^" + std::to_string(i) + " at level " + std::to_string(l));
      break;
    }
  }
  return r;
}

DerivedHS derive_hS(const DyadicOrderFn& h_m, const DyadicOrderFn& h_b,
                    const std::vector<std::size_t>& levels) {
  if (h_m.length() != h_b.length()) throw DomainError("derive_hS: h_M and h_B have different domains");
  DerivedHS out;
  std::vector<BigInt> e(h_m.exponents());
  std::vector<std::size_t> j;
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i] <= levels[i - 1]) throw DomainError("derive_hS: levels not increasing");
    if (levels[i] >= h_m.length()) {
      throw DomainError("derive_hS: level " + std::to_string(levels[i]) + " outside the domain");
    }
    j.push_back(levels[i]);
  }
  std::vector<BigInt> log2_w(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    BigInt k = 0;
    for (std::size_t n = 0; n < j[i]; ++n) k += e[n];
    log2_w[i] = k;
    // e_M(j_i) - (3 + 3 * 2^k) must stay >= 1.
    if (!exponent_at_least(h_m.exponent(j[i]) - 1, BigInt(1), k)) {
      throw DomainError("derive_hS: exponent underflow at level " + std::to_string(j[i]));
    }
    const BigInt value = h_m.exponent(j[i]) - (3 + 3 * (BigInt(1) << k.convert_to<unsigned>()));
    const auto end = i + 1 < j.size() ? j[i + 1] : e.size();
    for (auto n = j[i]; n < end; ++n) e[n] = value;
  }
  for (std::size_t n = 1; n < e.size(); ++n) {
    if (e[n] < e[n - 1]) out.notes.push_back("h_S decreases at level " + std::to_string(n));
  }
  out.h_s = DyadicOrderFn::unchecked(std::move(e));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const BigInt diff = out.h_s.exponent(j[i]) - h_b.exponent(j[i]);
    if (!exponent_at_least(diff, BigInt(i), log2_w[i])) {
      out.chain.add("h_S/h_B < r(h_S, j)^" + std::to_string(i) + " at level " + std::to_string(j[i]));
    }
  }
  return out;
}

}  // namespace bushy::splitting
