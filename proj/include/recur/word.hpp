#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace recur {

using Symbol = std::uint32_t;

/// Finite prefix of a one-sided symbolic sequence.
///
/// Symbols are ids in [0, alphabet_size).  Alphabets of up to 62 letters
/// print as single characters 0-9, a-z, A-Z; larger alphabets print as
/// dot-separated ids.
class Word {
 public:
  Word() = default;
  Word(std::vector<Symbol> symbols, std::size_t alphabet_size);

  /// Parses "0101" style text, or "12.0.7" when the text contains a dot.
  static Word parse(std::string_view text, std::size_t alphabet_size);

  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  std::span<const Symbol> symbols() const noexcept { return symbols_; }

  bool starts_with(const Word& prefix) const;
  bool occurs_at(const Word& block, std::size_t pos) const;
  Word prefix(std::size_t length) const;
  Word slice(std::size_t pos, std::size_t length) const;
  Word concat(const Word& other) const;
  std::string to_string() const;

  friend bool operator==(const Word&, const Word&) = default;
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    return a.symbols_ <=> b.symbols_;
  }

 private:
  std::vector<Symbol> symbols_;
  std::size_t alphabet_size_ = 1;
};

char symbol_char(Symbol s);

}  // namespace recur
