#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace relcay {

  // A signed generator. The code 2g + s (s = 1 for the inverse) makes the
  // natural integer order the global letter order a < a^-1 < b < b^-1 < ...
  class Letter {
   public:
    constexpr Letter() = default;
    constexpr Letter(std::uint32_t generator, bool inverted)
        : _code(2 * generator + (inverted ? 1 : 0)) {}

    static constexpr Letter from_code(std::uint32_t code) {
      Letter x;
      x._code = code;
      return x;
    }

    constexpr std::uint32_t code() const noexcept {
      return _code;
    }
    constexpr std::uint32_t generator() const noexcept {
      return _code >> 1;
    }
    constexpr bool inverted() const noexcept {
      return (_code & 1) != 0;
    }
    constexpr int sign() const noexcept {
      return inverted() ? -1 : 1;
    }
    constexpr Letter inverse() const noexcept {
      return from_code(_code ^ 1);
    }

    constexpr auto operator<=>(Letter const&) const = default;

   private:
    std::uint32_t _code = 0;
  };

  using Word = std::vector<Letter>;

  struct WordHash {
    std::size_t operator()(Word const& w) const noexcept;
  };

  Word inverse(std::span<Letter const> w);
  Word concat(std::span<Letter const> u, std::span<Letter const> v);
  Word power(std::span<Letter const> w, long exponent);

  // Deletes adjacent x x^-1 pairs until none remain.
  Word free_reduce(std::span<Letter const> w);
  bool is_freely_reduced(std::span<Letter const> w);
  bool is_cyclically_reduced(std::span<Letter const> w);

  // Length first, then lexicographic in the letter order.
  bool shortlex_less(std::span<Letter const> u, std::span<Letter const> v);

  // Generator symbols. Each generator is a single lowercase ASCII letter; the
  // uppercase form denotes its inverse.
  class Alphabet {
   public:
    Alphabet() = default;
    explicit Alphabet(std::vector<char> symbols);

    std::size_t size() const noexcept {
      return _symbols.size();
    }
    char symbol(std::size_t generator) const {
      return _symbols.at(generator);
    }
    std::vector<char> const& symbols() const noexcept {
      return _symbols;
    }
    // Returns size() when absent.
    std::size_t index_of(char symbol) const noexcept;
    bool contains(char symbol) const noexcept {
      return index_of(symbol) != size();
    }
    void push_back(char symbol);

    bool operator==(Alphabet const&) const = default;

   private:
    std::vector<char> _symbols;
  };

  // Renders with uppercase inverses; the empty word is "1".
  std::string to_string(std::span<Letter const> w, Alphabet const& alphabet);
  std::string to_string(Letter x, Alphabet const& alphabet);

  // Accepts juxtaposed letters, uppercase or x^-1 for inverses, integer powers
  // x^n, parenthesised groups (uv)^n, commutators [u,v] = u v u^-1 v^-1 and
  // "1" for the empty word. Whitespace between tokens is ignored. Throws
  // ParseError with a 1-based column on malformed input.
  Word parse_word(std::string_view text, Alphabet const& alphabet);

}  // namespace relcay
