#pragma once

#include <cstddef>
#include <string>

namespace loopm {

/// Caps that turn runaway computations into ResourceLimit errors.
struct ResourceLimits {
  std::size_t max_spairs = 100000;
  std::size_t max_poly_terms = 1000000;
  std::size_t max_closure_monomials = 2000;
  long hilbert_entry_bound = 64;
  int surd_exponent_bound = 4;

  /// Process-wide limits: defaults overridden by LOOPM_RESOURCE_LIMITS
  /// ("spairs=1000,terms=5000,closure=300,hilbert=32,surd=3").
  static const ResourceLimits& current();

  /// Parses the override syntax on top of the defaults. Unknown keys throw.
  static ResourceLimits parse(const std::string& spec);
};

}  // namespace loopm
