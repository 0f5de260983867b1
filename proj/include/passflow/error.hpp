#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace passflow {

enum class Errc {
  MalformedXml,
  UnsupportedElement,
  StructuralError,
  InvariantViolation,
  MalformedRdf,
  UnknownClass,
  UnmappableElement,
  DanglingMessageFlow,
  Untranslatable,
  CompileError,
  UnsupportedConstruct,
  DecodeError,
  DuplicateInstance,
  NoStartSubject,
  CrossInstanceConflict,
  PlacementError,
  UnknownRequestId,
  NotFound,
  ValidationError,
  Stalled,
  IoError,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure surfaced by the library. `details` carries the offending
/// component ids (or findings) so callers can report them without parsing
/// the message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, std::vector<std::string> details = {});

  Errc code() const noexcept { return code_; }
  const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  Errc code_;
  std::vector<std::string> details_;
};

}  // namespace passflow
