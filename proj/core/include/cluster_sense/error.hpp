#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cluster_sense {

/// Machine-readable failure category. The token form is what the sweep
/// writes into the `status` column (`error:<token>`).
enum class ErrorCode {
  invalid_argument,
  parse,
  io,
  inverted_noise_range,
  degenerate_data,
  non_finite,
};

constexpr std::string_view to_token(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::parse: return "parse";
    case ErrorCode::io: return "io";
    case ErrorCode::inverted_noise_range: return "inverted_noise_range";
    case ErrorCode::degenerate_data: return "degenerate_data";
    case ErrorCode::non_finite: return "non_finite";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the text loaders; carries the 1-based line that failed.
class ParseError : public Error {
 public:
  ParseError(std::string file, std::size_t line, const std::string& message)
      : Error(ErrorCode::parse, file + ":" + std::to_string(line) + ": " + message),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

}  // namespace cluster_sense
