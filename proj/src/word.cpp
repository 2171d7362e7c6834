#include "thermo/word.hpp"

#include "thermo/language.hpp"
#include "thermo/numeric.hpp"

#include <algorithm>

namespace thermo {

std::uint64_t encode(std::span<const Symbol> w, std::size_t alphabet_size) {
  std::uint64_t code = 0;
  for (Symbol s : w) code = code * alphabet_size + s;
  return code;
}

Word decode(std::uint64_t code, std::size_t length, std::size_t alphabet_size) {
  Word w(length);
  for (std::size_t i = length; i-- > 0;) {
    w[i] = static_cast<Symbol>(code % alphabet_size);
    code /= alphabet_size;
  }
  return w;
}

std::uint64_t code_space(std::size_t alphabet_size, std::size_t n) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > (std::uint64_t{1} << 62) / std::max<std::size_t>(alphabet_size, 1))
      throw CapError("word codes of length " + std::to_string(n) + " exceed 63 bits");
    total *= alphabet_size;
  }
  return total;
}

Word concat(std::span<const Symbol> a, std::span<const Symbol> b) {
  Word out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Word repeat(std::span<const Symbol> block, std::size_t times) {
  Word out;
  out.reserve(block.size() * times);
  for (std::size_t i = 0; i < times; ++i) out.insert(out.end(), block.begin(), block.end());
  return out;
}

namespace {
bool single_char_names(const std::vector<std::string>& names) {
  return std::all_of(names.begin(), names.end(), [](const std::string& s) { return s.size() == 1; });
}
}  // namespace

std::string format_word(std::span<const Symbol> w, const std::vector<std::string>& names) {
  const bool compact = single_char_names(names);
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!compact && i > 0) out += '.';
    out += names.at(w[i]);
  }
  return out;
}

Word parse_word(std::string_view text, const std::vector<std::string>& names) {
  auto lookup = [&](std::string_view name) -> Symbol {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return static_cast<Symbol>(i);
    throw SpecError("unknown symbol '" + std::string(name) + "'");
  };
  Word w;
  if (text.empty()) return w;
  if (single_char_names(names)) {
    for (char c : text) w.push_back(lookup(std::string_view(&c, 1)));
    return w;
  }
  std::size_t start = 0;
  while (true) {
    std::size_t dot = text.find('.', start);
    w.push_back(lookup(text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start)));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return w;
}

std::vector<Word> Language::blocks(std::size_t n) const {
  std::vector<Word> out;
  Word cur;
  const std::size_t L = alphabet_size();
  auto rec = [&](auto&& self) -> void {
    if (cur.size() == n) {
      out.push_back(cur);
      return;
    }
    for (std::size_t s = 0; s < L; ++s) {
      cur.push_back(static_cast<Symbol>(s));
      if (contains(cur)) self(self);
      cur.pop_back();
    }
  };
  rec(rec);
  return out;
}

std::vector<Word> Language::extensions(std::span<const Symbol> w, std::size_t len) const {
  std::vector<Word> out;
  Word cur(w.begin(), w.end());
  const std::size_t base = cur.size();
  const std::size_t L = alphabet_size();
  auto rec = [&](auto&& self) -> void {
    if (cur.size() == base + len) {
      out.emplace_back(cur.begin() + static_cast<std::ptrdiff_t>(base), cur.end());
      return;
    }
    for (std::size_t s = 0; s < L; ++s) {
      cur.push_back(static_cast<Symbol>(s));
      if (contains(cur)) self(self);
      cur.pop_back();
    }
  };
  rec(rec);
  return out;
}

}  // namespace thermo
