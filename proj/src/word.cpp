#include "recur/word.hpp"

#include <algorithm>
#include <string>

#include "recur/error.hpp"

namespace recur {

namespace {

constexpr std::string_view kSymbolChars =
    "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

}  // namespace

char symbol_char(Symbol s) {
  require(s < kSymbolChars.size(), ErrorKind::InvalidArgument,
          "symbol has no single-character name");
  return kSymbolChars[s];
}

Word::Word(std::vector<Symbol> symbols, std::size_t alphabet_size)
    : symbols_(std::move(symbols)), alphabet_size_(alphabet_size) {
  require(alphabet_size_ > 0, ErrorKind::InvalidArgument,
          "alphabet size must be positive");
  for (Symbol s : symbols_)
    if (s >= alphabet_size_)
      fail(ErrorKind::InvalidArgument,
           "symbol " + std::to_string(s) + " outside alphabet of size " +
               std::to_string(alphabet_size_));
}

Word Word::parse(std::string_view text, std::size_t alphabet_size) {
  std::vector<Symbol> symbols;
  if (text.find('.') != std::string_view::npos) {
    std::size_t start = 0;
    while (start <= text.size()) {
      auto end = text.find('.', start);
      if (end == std::string_view::npos) end = text.size();
      auto token = std::string(text.substr(start, end - start));
      require(!token.empty() &&
                  token.find_first_not_of("0123456789") == std::string::npos,
              ErrorKind::InvalidArgument, "bad symbol id '" + token + "'");
      symbols.push_back(static_cast<Symbol>(std::stoul(token)));
      start = end + 1;
    }
  } else {
    for (char ch : text) {
      if (ch == ' ' || ch == '_') continue;
      auto pos = kSymbolChars.find(ch);
      require(pos != std::string_view::npos, ErrorKind::InvalidArgument,
              std::string("unknown symbol character '") + ch + "'");
      symbols.push_back(static_cast<Symbol>(pos));
    }
  }
  return Word(std::move(symbols), alphabet_size);
}

bool Word::starts_with(const Word& prefix) const {
  return occurs_at(prefix, 0);
}

bool Word::occurs_at(const Word& block, std::size_t pos) const {
  if (pos + block.size() > size()) return false;
  return std::equal(block.symbols_.begin(), block.symbols_.end(),
                    symbols_.begin() + static_cast<std::ptrdiff_t>(pos));
}

Word Word::prefix(std::size_t length) const { return slice(0, length); }

Word Word::slice(std::size_t pos, std::size_t length) const {
  require(pos + length <= size(), ErrorKind::InvalidArgument,
          "slice outside word");
  auto first = symbols_.begin() + static_cast<std::ptrdiff_t>(pos);
  return Word({first, first + static_cast<std::ptrdiff_t>(length)},
              alphabet_size_);
}

Word Word::concat(const Word& other) const {
  std::vector<Symbol> out = symbols_;
  out.insert(out.end(), other.symbols_.begin(), other.symbols_.end());
  return Word(std::move(out), std::max(alphabet_size_, other.alphabet_size_));
}

std::string Word::to_string() const {
  std::string out;
  if (alphabet_size_ <= kSymbolChars.size()) {
    out.reserve(size());
    for (Symbol s : symbols_) out.push_back(kSymbolChars[s]);
    return out;
  }
  for (std::size_t i = 0; i < size(); ++i) {
    if (i) out.push_back('.');
    out += std::to_string(symbols_[i]);
  }
  return out;
}

}  // namespace recur
