#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bushy {

using Symbol = std::uint32_t;

/// A finite string of naturals. Ordering is lexicographic with a proper
/// prefix sorting before its extensions.
class FString {
 public:
  FString() = default;
  FString(std::initializer_list<Symbol> symbols) : symbols_(symbols) {}
  explicit FString(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {}

  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  Symbol back() const { return symbols_.back(); }
  std::span<const Symbol> symbols() const noexcept { return symbols_; }

  /// The string extended by one symbol.
  FString child(Symbol s) const;
  /// The length-n initial segment; n is clamped to size().
  FString prefix(std::size_t n) const;
  FString concat(const FString& tail) const;

  bool is_prefix_of(const FString& other) const noexcept;
  bool is_proper_prefix_of(const FString& other) const noexcept {
    return size() < other.size() && is_prefix_of(other);
  }
  bool comparable(const FString& other) const noexcept {
    return is_prefix_of(other) || other.is_prefix_of(*this);
  }
  bool incomparable(const FString& other) const noexcept {
    return !comparable(other);
  }

  /// `e` for the empty string, otherwise dot-joined decimals.
  std::string to_string() const;
  /// Inverse of to_string(); throws ParseError.
  static FString parse(std::string_view text);

  friend bool operator==(const FString&, const FString&) = default;
  friend std::strong_ordering operator<=>(const FString& a, const FString& b) {
    return a.symbols_ <=> b.symbols_;
  }

 private:
  std::vector<Symbol> symbols_;
};

}  // namespace bushy

template <>
struct std::hash<bushy::FString> {
  std::size_t operator()(const bushy::FString& s) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto x : s.symbols()) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h ^ s.size();
  }
};
