#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dppalm {

// Every failure carries a kind so the command-line front end can map it to
// an exit code without string matching.
enum class ErrorKind {
  validation,         // a kernel or parameter violates an existence condition
  parse,              // malformed input document
  size_guard,         // state space too large for exact enumeration
  numerical,          // quadrature non-convergence and similar
  theorem_violation,  // coupling infeasible; should never happen
  domain,             // argument outside the function's domain
};

// Named condition tokens used in validation diagnostics.
namespace condition {
inline constexpr std::string_view non_hermitian = "non-hermitian";
inline constexpr std::string_view spectrum = "spectrum";
inline constexpr std::string_view existence_bound = "existence-bound";
inline constexpr std::string_view param_bound = "param-bound";
inline constexpr std::string_view vanishing_intensity = "vanishing-intensity";
inline constexpr std::string_view positive_definiteness = "positive-definiteness";
}  // namespace condition

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string token, const std::string& message)
      : std::runtime_error(token.empty() ? message : token + ": " + message),
        kind_(kind),
        token_(std::move(token)),
        message_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Short machine-readable tag, e.g. "spectrum" or "param-bound".
  const std::string& token() const noexcept { return token_; }
  // Description without the token prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string token_;
  std::string message_;
};

inline Error validation_error(std::string_view token, const std::string& message) {
  return Error(ErrorKind::validation, std::string(token), message);
}

inline Error domain_error(const std::string& message) {
  return Error(ErrorKind::domain, "domain", message);
}

inline Error numerical_error(const std::string& message) {
  return Error(ErrorKind::numerical, "quadrature", message);
}

inline Error size_guard_error(const std::string& message) {
  return Error(ErrorKind::size_guard, "size-guard", message);
}

inline Error parse_error(const std::string& message) {
  return Error(ErrorKind::parse, "parse", message);
}

}  // namespace dppalm
