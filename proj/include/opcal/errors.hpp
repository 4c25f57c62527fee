#pragma once

#include <stdexcept>
#include <string>

namespace opcal {

struct MixedBaseError : std::runtime_error {
  explicit MixedBaseError(const std::string& m) : std::runtime_error("MixedBase: " + m) {}
};
struct NotFunctorialError : std::runtime_error {
  explicit NotFunctorialError(const std::string& m) : std::runtime_error("NotFunctorial: " + m) {}
};
struct NotInvertibleError : std::runtime_error {
  explicit NotInvertibleError(const std::string& m) : std::runtime_error("NotInvertible: " + m) {}
};
struct DescentError : std::runtime_error {
  explicit DescentError(const std::string& m) : std::runtime_error("DescentError: " + m) {}
};
struct NotMonoError : std::runtime_error {
  explicit NotMonoError(const std::string& m) : std::runtime_error("NotMono: " + m) {}
};
struct TruncationRequiredError : std::runtime_error {
  explicit TruncationRequiredError(const std::string& m)
      : std::runtime_error("TruncationRequired: " + m) {}
};
struct ColorMismatchError : std::runtime_error {
  explicit ColorMismatchError(const std::string& m) : std::runtime_error("ColorMismatch: " + m) {}
};
struct InexactBracketingError : std::runtime_error {
  explicit InexactBracketingError(const std::string& m)
      : std::runtime_error("InexactBracketing: " + m) {}
};
struct InfiniteEnumerationError : std::runtime_error {
  explicit InfiniteEnumerationError(const std::string& m)
      : std::runtime_error("InfiniteEnumeration: " + m) {}
};
struct UnboundedSupportError : std::runtime_error {
  explicit UnboundedSupportError(const std::string& m)
      : std::runtime_error("UnboundedSupport: " + m) {}
};
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& m) : std::runtime_error("ParseError: " + m) {}
};
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& m) : std::runtime_error("ValidationError: " + m) {}
};

} // namespace opcal
