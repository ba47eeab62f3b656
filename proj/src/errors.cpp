#include "loopm/errors.hpp"

#include <cstdlib>
#include <sstream>

#include "loopm/limits.hpp"

namespace loopm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::ProbabilityError: return "ProbabilityError";
    case ErrorKind::R1Violation: return "R1Violation";
    case ErrorKind::NormalizeError: return "NormalizeError";
    case ErrorKind::NotFinite: return "NotFinite";
    case ErrorKind::DefectiveDependency: return "DefectiveDependency";
    case ErrorKind::UnsupportedMoment: return "UnsupportedMoment";
    case ErrorKind::UnsupportedEigenvalue: return "UnsupportedEigenvalue";
    case ErrorKind::UnboundParameter: return "UnboundParameter";
    case ErrorKind::ParamCondition: return "ParamCondition";
    case ErrorKind::NotUnsolvable: return "NotUnsolvable";
    case ErrorKind::ResourceLimit: return "ResourceLimit";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::string AnalysisError::diagnostic() const {
  std::string out = "error[" + std::string(to_string(kind_)) + "] " + module_;
  if (!restriction_.empty()) out += " (" + restriction_ + ")";
  return out + ": " + what();
}

ResourceLimits ResourceLimits::parse(const std::string& spec) {
  ResourceLimits limits;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw AnalysisError(ErrorKind::InvalidArgument, "limits", "expected key=value in '" + item + "'");
    std::string key = item.substr(0, eq);
    long value = std::stol(item.substr(eq + 1));
    if (value <= 0)
      throw AnalysisError(ErrorKind::InvalidArgument, "limits", "limit must be positive: " + item);
    if (key == "spairs")
      limits.max_spairs = static_cast<std::size_t>(value);
    else if (key == "terms")
      limits.max_poly_terms = static_cast<std::size_t>(value);
    else if (key == "closure")
      limits.max_closure_monomials = static_cast<std::size_t>(value);
    else if (key == "hilbert")
      limits.hilbert_entry_bound = value;
    else if (key == "surd")
      limits.surd_exponent_bound = static_cast<int>(value);
    else
      throw AnalysisError(ErrorKind::InvalidArgument, "limits", "unknown limit '" + key + "'");
  }
  return limits;
}

const ResourceLimits& ResourceLimits::current() {
  static const ResourceLimits limits = [] {
    const char* env = std::getenv("LOOPM_RESOURCE_LIMITS");
    return env ? parse(env) : ResourceLimits{};
  }();
  return limits;
}

}  // namespace loopm
