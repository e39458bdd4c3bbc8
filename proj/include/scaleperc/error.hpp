#pragma once

#include <stdexcept>
#include <string>

namespace scaleperc {

enum class ErrorKind {
  invalid_argument,
  budget_exceeded,
  empty_sphere,
  ball_exceeds_graph,
  no_segment,
  verification_failed,
  not_regular,
  numeric_overflow,
  precondition_violated,
  too_large,
  parse_error,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace scaleperc
