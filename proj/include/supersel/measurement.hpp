#ifndef SUPERSEL_MEASUREMENT_HPP
#define SUPERSEL_MEASUREMENT_HPP

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "supersel/branch.hpp"
#include "supersel/scaling.hpp"

namespace supersel {

/// Premeasurement setup: outcome amplitudes on the object, apparatus size,
/// and the per-site pointer overlap (0 = macroscopically distinct pointers).
struct MeasurementSpec {
  std::vector<Complex> outcome_amplitudes;
  std::size_t apparatus_sites = 0;
  double pointer_overlap = 0.0;
  Eigen::Index object_dim = 2;
};

/// Environment coupling: each scattered site records the branch label with
/// fidelity 1 - kappa, per-site overlap kappa between records.
struct EnvironmentSpec {
  std::size_t env_sites = 0;
  double kappa = 0.0;
};

enum class DephasingMode { analytic, sampled };

/// Per-site phase diffusion with variance 2 * gamma * t; the phase average
/// is the factor e^(-gamma t) per site. Sampled mode estimates that factor
/// as a Monte-Carlo mean of e^(i phi) over `samples` draws.
struct DephasingSpec {
  double gamma = 0.0;
  double time = 0.0;
  DephasingMode mode = DephasingMode::analytic;
  std::uint64_t seed = 42;
  std::size_t samples = 0;  // required >= 1 in sampled mode
};

/// A branch-creating map acting on `locality` sites: the new branch's state
/// is `displacement` on the touched sites and shared everywhere else.
struct SplitterSpec {
  std::size_t locality = 1;
  SiteState displacement = SiteState::basis(2, 1);
  /// Explicit touched sites; empty means the first `locality` sites. When
  /// given, the list must have exactly `locality` distinct valid indices.
  std::vector<std::size_t> sites;
};

/// What a dephasing pass did: the per-site factors it applied to the
/// inter-branch overlap, their product, and (in sampled mode) the standard
/// error of each per-site mean's real part.
struct DephasingReport {
  double analytic_factor = 1.0;       // e^(-gamma t), per site
  std::vector<Complex> site_factors;  // in the dephased-site list's order
  Complex total_factor{1.0, 0.0};
  /// Sampled mode: standard error of each per-site mean's real part.
  std::vector<double> site_standard_errors;
};

/// Coherence and distance metrics of a reduced state against the ideal
/// per-outcome mixture.
struct PairMetric {
  std::size_t k = 0;
  std::size_t k2 = 0;
  double coherence = 0.0;         // |branch-coefficient| off-diagonal
  double kept_overlap = 0.0;      // |Gram off-diagonal| of kept parts
};
struct DecoherenceMetrics {
  std::vector<PairMetric> pairs;
  double purity = 0.0;
  double trace_distance_to_mixture = 0.0;
};

/// Sites where one branch pair differs appreciably.
struct PairDistinguishability {
  std::size_t k = 0;
  std::size_t k2 = 0;
  std::size_t count = 0;  // sites with |per-site overlap| < 1 - epsilon
};

/// Object-apparatus entanglement in branch form: branch k carries amplitude
/// c_k, the object site (index 0) in basis state k, and apparatus_sites
/// pointer sites with pairwise per-site overlap pointer_overlap. Entangled
/// (more than one branch) whenever two or more amplitudes are nonzero.
BranchState premeasure(const MeasurementSpec& spec);

/// Appends env_sites environment sites; branch k gets record state e_k at
/// each with <e_k'|e_k> = kappa for k != k'. Tracing them later multiplies
/// every inter-branch coherence by kappa^env_sites.
BranchState environment_scatter(const BranchState& state,
                                const EnvironmentSpec& env);

/// Phase diffusion on a two-branch state. Every dephased site's
/// inter-branch overlap is multiplied by the per-site factor (analytic:
/// exactly e^(-gamma t); sampled: the Monte-Carlo mean). `sites` selects
/// the dephased subset; empty means all sites. The state's norm is left
/// untouched: it drifts only at the order of the inter-branch overlap the
/// factors remove, and renormalizing would distort amplitude-based
/// coherence readings.
std::pair<BranchState, DephasingReport> infrared_dephase(
    const BranchState& state, const DephasingSpec& spec,
    const std::vector<std::size_t>& sites = {});

/// Reduces onto `keep` (must contain the object site 0) and reports
/// per-pair coherences, purity, and the trace distance to the ideal
/// mixture sum_k |c_k|^2 |kept_k><kept_k| built from spec amplitudes.
DecoherenceMetrics decoherence_report(const BranchState& state,
                                      const std::vector<std::size_t>& keep,
                                      const MeasurementSpec& spec);

/// Doubles every branch: each child pair shares the parent's sites except
/// on the splitter's touched sites, where the second child carries
/// `displacement`. Children keep the parent's amplitude split evenly, and
/// the result is renormalized. Output branch order interleaves each
/// parent's children.
BranchState split(const BranchState& state, const SplitterSpec& spec);

/// For every branch pair, how many sites have |overlap| < 1 - epsilon.
/// After any sequence of k_1-, k_2-, ... local splits the count never
/// exceeds sum k_j. Requires epsilon in (0, 1). Single branch: empty.
std::vector<PairDistinguishability> branch_distinguishability(
    const BranchState& state, double epsilon);

/// Cat-coherence half-life against site count: t_half(N) = ln2 / (gamma N),
/// on log-log axes with slope exactly -1. Requires gamma > 0 and positive
/// site counts.
ScalingSeries cat_lifetime(const std::vector<std::size_t>& site_counts,
                           double gamma);

/// Order-of-magnitude mass of an N-atom body: n_atoms * atom_mass_kg.
/// Requires positive inputs.
double estimate_scale(double n_atoms, double atom_mass_kg);

}  // namespace supersel

#endif
