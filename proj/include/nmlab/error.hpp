#ifndef NMLAB_ERROR_HPP
#define NMLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace nmlab {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Syntax or well-formedness error in a formula, matrix or machine text.
/// `where` is a human-readable location ("line 3", "position 17").
class ParseError : public Error {
public:
  ParseError(const std::string& where, const std::string& msg)
      : Error(where + ": " + msg), where_(where) {}
  const std::string& where() const { return where_; }

private:
  std::string where_;
};

/// Raised when an enumeration would exceed its configured cap.  The caller
/// asked a question the engine refuses to answer by brute force; this is a
/// resource refusal, not a negative answer.
class CapExceeded : public Error {
public:
  explicit CapExceeded(const std::string& msg) : Error(msg) {}
};

} // namespace nmlab

#endif
