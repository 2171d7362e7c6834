#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace thermo {

using Symbol = std::uint16_t;
/// A finite block of symbol indices; the empty word is the empty vector.
using Word = std::vector<Symbol>;

/// Base-|alphabet| code of a word. Numeric order of codes of equal-length
/// words is lexicographic order of the words.
std::uint64_t encode(std::span<const Symbol> w, std::size_t alphabet_size);
Word decode(std::uint64_t code, std::size_t length, std::size_t alphabet_size);
/// alphabet_size^n, throwing CapError if it does not fit in 63 bits.
std::uint64_t code_space(std::size_t alphabet_size, std::size_t n);

Word concat(std::span<const Symbol> a, std::span<const Symbol> b);
Word repeat(std::span<const Symbol> block, std::size_t times);

/// Words are written as the concatenation of symbol names when every name is
/// a single character, and as dot-separated names otherwise.
std::string format_word(std::span<const Symbol> w, const std::vector<std::string>& names);
Word parse_word(std::string_view text, const std::vector<std::string>& names);

}  // namespace thermo
