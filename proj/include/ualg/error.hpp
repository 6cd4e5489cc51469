#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ualg {

  // Base of every exception thrown by the library.
  class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // Bad user input: unknown element, unknown symbol, malformed description.
  class InputError : public Error {
   public:
    using Error::Error;
  };

  // Two algebras (or an algebra and an equation set) disagree on symbols.
  class SignatureError : public Error {
   public:
    using Error::Error;
  };

  // A search or closure would exceed its configured work limit.
  class BudgetExceeded : public Error {
   public:
    using Error::Error;
  };

  // Error tied to a position in a text file (1-based line and column).
  class ParseError : public Error {
   public:
    ParseError(std::size_t line, std::size_t column, std::string const& message)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": "
                + message),
          line_(line),
          column_(column),
          message_(message) {}

    std::size_t line() const noexcept {
      return line_;
    }
    std::size_t column() const noexcept {
      return column_;
    }
    std::string const& message() const noexcept {
      return message_;
    }

   private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
  };

}  // namespace ualg
