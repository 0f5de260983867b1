#include "passflow/error.hpp"

namespace passflow {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedXml: return "MalformedXml";
    case Errc::UnsupportedElement: return "UnsupportedElement";
    case Errc::StructuralError: return "StructuralError";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::MalformedRdf: return "MalformedRdf";
    case Errc::UnknownClass: return "UnknownClass";
    case Errc::UnmappableElement: return "UnmappableElement";
    case Errc::DanglingMessageFlow: return "DanglingMessageFlow";
    case Errc::Untranslatable: return "Untranslatable";
    case Errc::CompileError: return "CompileError";
    case Errc::UnsupportedConstruct: return "UnsupportedConstruct";
    case Errc::DecodeError: return "DecodeError";
    case Errc::DuplicateInstance: return "DuplicateInstance";
    case Errc::NoStartSubject: return "NoStartSubject";
    case Errc::CrossInstanceConflict: return "CrossInstanceConflict";
    case Errc::PlacementError: return "PlacementError";
    case Errc::UnknownRequestId: return "UnknownRequestId";
    case Errc::NotFound: return "NotFound";
    case Errc::ValidationError: return "ValidationError";
    case Errc::Stalled: return "Stalled";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message, std::vector<std::string> details)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      details_(std::move(details)) {}

}  // namespace passflow
