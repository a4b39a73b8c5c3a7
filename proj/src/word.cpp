#include "relcay/word.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "relcay/errors.hpp"

namespace relcay {

  std::size_t WordHash::operator()(Word const& w) const noexcept {
    // FNV-1a over the letter codes.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (Letter x : w) {
      h ^= x.code() + 1;
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }

  Word inverse(std::span<Letter const> w) {
    Word result;
    result.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      result.push_back(it->inverse());
    }
    return result;
  }

  Word concat(std::span<Letter const> u, std::span<Letter const> v) {
    Word result;
    result.reserve(u.size() + v.size());
    result.insert(result.end(), u.begin(), u.end());
    result.insert(result.end(), v.begin(), v.end());
    return result;
  }

  Word power(std::span<Letter const> w, long exponent) {
    Word base = exponent < 0 ? inverse(w) : Word(w.begin(), w.end());
    Word result;
    long n = exponent < 0 ? -exponent : exponent;
    result.reserve(base.size() * static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
      result.insert(result.end(), base.begin(), base.end());
    }
    return result;
  }

  Word free_reduce(std::span<Letter const> w) {
    Word stack;
    stack.reserve(w.size());
    for (Letter x : w) {
      if (!stack.empty() && stack.back() == x.inverse()) {
        stack.pop_back();
      } else {
        stack.push_back(x);
      }
    }
    return stack;
  }

  bool is_freely_reduced(std::span<Letter const> w) {
    for (std::size_t i = 1; i < w.size(); ++i) {
      if (w[i] == w[i - 1].inverse()) {
        return false;
      }
    }
    return true;
  }

  bool is_cyclically_reduced(std::span<Letter const> w) {
    return is_freely_reduced(w)
           && (w.size() < 2 || w.front() != w.back().inverse());
  }

  bool shortlex_less(std::span<Letter const> u, std::span<Letter const> v) {
    if (u.size() != v.size()) {
      return u.size() < v.size();
    }
    return std::lexicographical_compare(u.begin(), u.end(), v.begin(), v.end());
  }

  Alphabet::Alphabet(std::vector<char> symbols) {
    for (char c : symbols) {
      push_back(c);
    }
  }

  std::size_t Alphabet::index_of(char symbol) const noexcept {
    auto it = std::find(_symbols.begin(), _symbols.end(), symbol);
    return static_cast<std::size_t>(it - _symbols.begin());
  }

  void Alphabet::push_back(char symbol) {
    if (!std::islower(static_cast<unsigned char>(symbol))) {
      throw ValidationError(std::string("generator symbol '") + symbol
                            + "' must be a lowercase letter");
    }
    if (contains(symbol)) {
      throw ValidationError(std::string("duplicate generator symbol '")
                            + symbol + "'");
    }
    _symbols.push_back(symbol);
  }

  std::string to_string(Letter x, Alphabet const& alphabet) {
    char c = alphabet.symbol(x.generator());
    return std::string(
        1, x.inverted() ? static_cast<char>(std::toupper(c)) : c);
  }

  std::string to_string(std::span<Letter const> w, Alphabet const& alphabet) {
    if (w.empty()) {
      return "1";
    }
    std::string result;
    result.reserve(w.size());
    for (Letter x : w) {
      result += to_string(x, alphabet);
    }
    return result;
  }

  namespace {

    class WordParser {
     public:
      WordParser(std::string_view text, Alphabet const& alphabet)
          : _text(text), _alphabet(alphabet) {}

      Word parse() {
        Word w = sequence();
        skip_space();
        if (_pos != _text.size()) {
          fail("unexpected character '" + std::string(1, _text[_pos]) + "'");
        }
        return w;
      }

     private:
      [[noreturn]] void fail(std::string const& message) const {
        throw ParseError(message, 1, _pos + 1);
      }

      void skip_space() {
        while (_pos < _text.size()
               && std::isspace(static_cast<unsigned char>(_text[_pos]))) {
          ++_pos;
        }
      }

      bool at_term_start() {
        skip_space();
        if (_pos == _text.size()) {
          return false;
        }
        char c = _text[_pos];
        return std::isalpha(static_cast<unsigned char>(c)) || c == '1'
               || c == '(' || c == '[';
      }

      Word sequence() {
        Word w;
        while (at_term_start()) {
          Word t = term();
          w.insert(w.end(), t.begin(), t.end());
        }
        return w;
      }

      Word term() {
        Word a = atom();
        skip_space();
        if (_pos < _text.size() && _text[_pos] == '^') {
          ++_pos;
          skip_space();
          std::size_t start = _pos;
          if (_pos < _text.size() && (_text[_pos] == '-' || _text[_pos] == '+')) {
            ++_pos;
          }
          while (_pos < _text.size()
                 && std::isdigit(static_cast<unsigned char>(_text[_pos]))) {
            ++_pos;
          }
          long exponent = 0;
          char const* first = _text.data() + start;
          if (*first == '+') {
            ++first;
          }
          auto [ptr, ec]
              = std::from_chars(first, _text.data() + _pos, exponent);
          if (ec != std::errc() || ptr != _text.data() + _pos) {
            _pos = start;
            fail("expected an integer exponent");
          }
          return power(a, exponent);
        }
        return a;
      }

      Word atom() {
        skip_space();
        char c = _text[_pos];
        if (c == '1') {
          ++_pos;
          return {};
        }
        if (c == '(') {
          ++_pos;
          Word inner = sequence();
          expect(')');
          return inner;
        }
        if (c == '[') {
          ++_pos;
          Word u = sequence();
          expect(',');
          Word v = sequence();
          expect(']');
          Word result = concat(u, v);
          Word ui = inverse(u), vi = inverse(v);
          result.insert(result.end(), ui.begin(), ui.end());
          result.insert(result.end(), vi.begin(), vi.end());
          return result;
        }
        bool inverted = std::isupper(static_cast<unsigned char>(c)) != 0;
        char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        std::size_t g = _alphabet.index_of(lower);
        if (g == _alphabet.size()) {
          fail("unknown generator '" + std::string(1, c) + "'");
        }
        ++_pos;
        return {Letter(static_cast<std::uint32_t>(g), inverted)};
      }

      void expect(char c) {
        skip_space();
        if (_pos >= _text.size() || _text[_pos] != c) {
          fail(std::string("expected '") + c + "'");
        }
        ++_pos;
      }

      std::string_view _text;
      Alphabet const&  _alphabet;
      std::size_t      _pos = 0;
    };

  }  // namespace

  Word parse_word(std::string_view text, Alphabet const& alphabet) {
    return WordParser(text, alphabet).parse();
  }

}  // namespace relcay
