#pragma once

#include <stdexcept>
#include <string>

namespace vss {

enum class ErrorKind {
  config,      // invalid or inconsistent configuration
  domain,      // argument outside the mathematical domain
  input,       // malformed data handed to an analysis routine
  numerical,   // a numerical routine failed or a consistency check tripped
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

const char* to_string(ErrorKind kind) noexcept;

}  // namespace vss
