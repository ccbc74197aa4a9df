#ifndef SUPERSEL_EXPERIMENT_HPP
#define SUPERSEL_EXPERIMENT_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "supersel/scaling.hpp"

namespace supersel {

/// Sweep |<A|B>| of the two-orientation pair over site counts; the semi-log
/// slope should be log(eta).
struct OverlapParams {
  double eta = 0.9;
  std::size_t excited_sites = 0;
  std::vector<std::size_t> site_counts = {10, 100, 1000, 10000, 100000};
};

/// Sweep the largest probe matrix element of [X, P] over particle counts;
/// the log-log slope should be -1 (exact-zero commutators are reported as
/// such).
struct CommutatorParams {
  std::string expression = "p1^2";
  Eigen::Index dim = 16;
  std::size_t probes = 2;
  std::vector<std::size_t> particle_counts = {8,   16,  32,  64,
                                              128, 256, 512, 1024};
};

/// Sweep the trace distance to the ideal mixture over environment sizes;
/// the semi-log slope should be log(kappa).
struct MeasureParams {
  std::vector<double> amplitudes = {0.6, 0.8};
  double kappa = 0.95;
  std::size_t apparatus_sites = 0;
  double pointer_overlap = 0.0;
  std::vector<std::size_t> env_counts = {0, 5, 10, 15, 20, 25, 30, 35, 40};
};

/// Sweep splitter locality on a product state; the branch-pair
/// distinguishability count equals the locality for a separated
/// displacement, a log-log slope of +1.
struct SplitParams {
  std::size_t total_sites = 16;
  std::vector<std::size_t> localities = {1, 2, 4, 8, 16};
  double displacement_overlap = 0.0;
  double epsilon = 0.5;
};

/// Sweep cat half-life over site counts; the log-log slope should be -1.
struct CatParams {
  double gamma = 0.01;
  std::vector<std::size_t> site_counts = {10, 100, 1000, 10000};
};

/// One-shot order-of-magnitude estimate, no sweep.
struct ScaleParams {
  double atoms = 1e10;
  double atom_mass_kg = 1e-26;
};

enum class Subcommand { overlap, commutator, measure, split, cat, scale };

/// A fully validated experiment description. `threads` bounds concurrent
/// sweep-point evaluation; outputs never depend on it.
struct ExperimentConfig {
  Subcommand subcommand = Subcommand::overlap;
  std::variant<OverlapParams, CommutatorParams, MeasureParams, SplitParams,
               CatParams, ScaleParams>
      params = OverlapParams{};
  std::uint64_t seed = 42;
  std::string output_path;  // empty: supersel_<subcommand>.csv
  unsigned threads = 1;
  double tolerance = 1e-6;  // slope-vs-expectation acceptance window
};

/// What one run produced: the CSV bytes (header row names columns; the
/// parameter column carries the axis convention as ":semilog" or ":loglog"),
/// stdout lines (summary `slope=<v> stderr=<v> expected=<v> pass=<bool>`,
/// preceded for `scale` by `mass_kg=<v>`), and the underlying series.
struct RunResult {
  std::string csv;
  std::string output_lines;  // newline-terminated stdout payload
  ScalingSeries series;
  double expected_slope = 0.0;
  bool pass = false;
};

/// Effective output path (config's, or the subcommand default).
std::string resolved_output_path(const ExperimentConfig& config);

/// Executes the sweep (concurrently up to config.threads, results indexed
/// by sweep position) and renders CSV + summary. Bytes are identical for
/// identical (config, seed) regardless of thread count. Module errors
/// (capacity, domain, shape) propagate as exceptions.
RunResult run_experiment(const ExperimentConfig& config);

}  // namespace supersel

#endif
