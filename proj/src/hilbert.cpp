#include "loopm/hilbert.hpp"

#include <algorithm>
#include <set>

#include "loopm/errors.hpp"
#include "loopm/limits.hpp"

namespace loopm {

namespace {

std::vector<long> apply(const DioSystem& a, const NatVector& v) {
  std::vector<long> out(a.size(), 0);
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c) out[r] += a[r][c] * v[c];
  return out;
}

bool dominates(const NatVector& v, const NatVector& b) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] < b[i]) return false;
  return true;
}

}  // namespace

std::vector<NatVector> hilbert_basis_nat(const DioSystem& system, std::size_t n) {
  long bound = ResourceLimits::current().hilbert_entry_bound;
  std::vector<std::vector<long>> columns;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<long> col;
    for (const auto& row : system) col.push_back(row.at(j));
    columns.push_back(std::move(col));
  }
  std::vector<NatVector> basis;
  std::set<NatVector> frontier;
  for (std::size_t j = 0; j < n; ++j) {
    NatVector e(n, 0);
    e[j] = 1;
    frontier.insert(e);
  }
  while (!frontier.empty()) {
    std::vector<std::pair<NatVector, std::vector<long>>> open;
    for (const auto& v : frontier) {
      auto image = apply(system, v);
      if (std::all_of(image.begin(), image.end(), [](long x) { return x == 0; }))
        basis.push_back(v);
      else
        open.emplace_back(v, std::move(image));
    }
    std::set<NatVector> next;
    for (const auto& [v, image] : open) {
      for (std::size_t j = 0; j < n; ++j) {
        long dot = 0;
        for (std::size_t r = 0; r < image.size(); ++r) dot += image[r] * columns[j][r];
        if (dot >= 0) continue;
        NatVector w = v;
        if (++w[j] > bound)
          throw AnalysisError(ErrorKind::ResourceLimit, "algebra",
                              "Hilbert basis entry exceeds bound " + std::to_string(bound));
        bool pruned = false;
        for (const auto& b : basis)
          if (dominates(w, b)) {
            pruned = true;
            break;
          }
        if (!pruned) next.insert(std::move(w));
      }
    }
    frontier = std::move(next);
  }
  std::sort(basis.begin(), basis.end());
  return basis;
}

}  // namespace loopm
