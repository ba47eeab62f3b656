#pragma once

#include <vector>

namespace loopm {

/// Integer coefficient matrix; rows are equations of A*v = 0.
using DioSystem = std::vector<std::vector<long>>;
using NatVector = std::vector<long>;

/// Componentwise-minimal nonzero natural solutions of A*v = 0, sorted
/// lexicographically (Contejean-Devie completion). Throws ResourceLimit when an
/// entry would exceed the configured bound.
std::vector<NatVector> hilbert_basis_nat(const DioSystem& system, std::size_t unknowns);

}  // namespace loopm
