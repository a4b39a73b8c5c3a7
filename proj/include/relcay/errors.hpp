#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace relcay {

  class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
    virtual char const* kind() const noexcept {
      return "Error";
    }
  };

#define RELCAY_DEFINE_ERROR(NAME, BASE)                  \
  class NAME : public BASE {                             \
   public:                                               \
    using BASE::BASE;                                    \
    char const* kind() const noexcept override {         \
      return #NAME;                                      \
    }                                                    \
  };

  // Caller supplied something inconsistent with a documented precondition.
  RELCAY_DEFINE_ERROR(ValidationError, Error)
  RELCAY_DEFINE_ERROR(DehnNotApplicable, ValidationError)
  RELCAY_DEFINE_ERROR(ModeUnsupported, ValidationError)
  RELCAY_DEFINE_ERROR(MembershipFailed, ValidationError)
  RELCAY_DEFINE_ERROR(Uncertified, ValidationError)

  // A memory or enumeration budget ran out before the answer was known.
  RELCAY_DEFINE_ERROR(BallExhausted, Error)
  RELCAY_DEFINE_ERROR(BallTooSmall, BallExhausted)

  RELCAY_DEFINE_ERROR(SingularSystem, Error)

#undef RELCAY_DEFINE_ERROR

  class ParseError : public ValidationError {
   public:
    ParseError(std::string const& message, std::size_t line, std::size_t column)
        : ValidationError(std::to_string(line) + ":" + std::to_string(column)
                          + ": " + message),
          _line(line),
          _column(column) {}

    char const* kind() const noexcept override {
      return "ParseError";
    }
    std::size_t line() const noexcept {
      return _line;
    }
    std::size_t column() const noexcept {
      return _column;
    }

   private:
    std::size_t _line;
    std::size_t _column;
  };

}  // namespace relcay
