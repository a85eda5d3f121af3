#pragma once

#include <stdexcept>
#include <string>

namespace ldlab {

enum class ErrorKind {
  precondition,  // caller-supplied value outside an operation's domain
  fixture,       // missing or malformed input file, table too short
  numeric,       // a numerical consistency check failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorKind::precondition, what);
}

}  // namespace ldlab
