#ifndef SUPERSEL_OVERLAP_SCALING_HPP
#define SUPERSEL_OVERLAP_SCALING_HPP

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "supersel/branch.hpp"
#include "supersel/scaling.hpp"

namespace supersel {

/// Two spin-half (d = 2) product configurations of N sites: the last
/// N - m "ground" sites meet with per-site overlap eta, built as (1,0)
/// against (eta, sqrt(1-eta^2)); the first m "excited" sites are seeded
/// random unit vectors whose pairwise overlaps are engineered to equal
/// excited_overlaps exactly. The pair's product overlap is then
/// (prod_j excited_overlaps[j]) * eta^(N-m).
struct FerromagnetSpec {
  std::size_t total_sites = 1;   // N
  std::size_t excited_sites = 0; // m, strictly below N
  double eta = 0.0;              // ground per-site overlap, in [0, 1]
  /// One complex overlap per excited site, |value| <= 1. Empty means
  /// "default every excited overlap to eta".
  std::vector<Complex> excited_overlaps;
  std::uint64_t seed = 42;
};

/// Builds the two single-branch states. Errors: m >= N, eta outside [0, 1],
/// an excited overlap of magnitude above 1, or an overlap list whose length
/// is neither 0 nor m.
std::pair<BranchState, BranchState> build_ferromagnet_pair(
    const FerromagnetSpec& spec);

/// Overlap magnitude against site count on semi-log axes: log|<A|B>| is
/// linear in N with slope log(eta), taken from the log-magnitude companion
/// so the law survives far past raw-double underflow (eta = 0.5 underflows
/// near N = 1490). Shape fields other than total_sites come from `spec`;
/// every requested N must exceed excited_sites. eta = 0 yields an
/// exact-zero series with no fit.
ScalingSeries overlap_curve(const FerromagnetSpec& spec,
                            const std::vector<std::size_t>& site_counts);

}  // namespace supersel

#endif
