// supersel: command-line runner for superposition-scaling experiments.
//
// Subcommands sweep one parameter each and emit a CSV (deterministic bytes
// for a fixed config and seed) plus a one-line slope summary on stdout.
// Exit codes: 0 success, 1 runtime/capacity failure, 2 usage error.

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "supersel/errors.hpp"
#include "supersel/experiment.hpp"
#include "supersel/operator_algebra.hpp"

namespace {

int usage_error(const std::string& message) {
  std::cerr << "error: " << message << std::endl;
  return 2;
}

// Applies `key = value` lines from the file at `path` to options of `sub`
// that were not set on the command line or environment (those win).
// Returns 0 on success, else the process exit code.
int apply_config_defaults(CLI::App* sub, const std::string& path) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI{}.from_file(path);
  } catch (const CLI::FileError& e) {
    return usage_error(e.what());
  }
  for (const CLI::ConfigItem& item : items) {
    if (!item.parents.empty()) {
      return usage_error("config: unknown section in key \"" +
                         item.fullname() + "\"");
    }
    if (item.name == "config") continue;
    CLI::Option* op = sub->get_option_no_throw("--" + item.name);
    if (op == nullptr) {
      return usage_error("config: unknown key \"" + item.name + "\"");
    }
    if (!op->empty()) continue;
    try {
      for (const std::string& input : item.inputs) {
        op->add_result(input);
      }
      op->run_callback();
    } catch (const CLI::Error& e) {
      return usage_error("config: " + item.name + ": " + e.what());
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace supersel;

  CLI::App app{
      "supersel — scaling experiments on superpositions of product states:\n"
      "overlap orthogonalization, collective-coordinate commutator\n"
      "suppression, decoherence toward the outcome mixture, splitter\n"
      "locality, cat-coherence lifetime, and order-of-magnitude scales.\n"
      "Each subcommand writes a CSV (the parameter column name carries the\n"
      "fit-axis convention, e.g. \"N:semilog\") and prints\n"
      "  slope=<v> stderr=<v> expected=<v> pass=<bool>\n"
      "comparing the fitted slope against the closed form. An identically\n"
      "zero series passes with slope=nan."};
  app.require_subcommand(1);

  ExperimentConfig config;
  OverlapParams overlap_params;
  CommutatorParams commutator_params;
  MeasureParams measure_params;
  SplitParams split_params;
  CatParams cat_params;
  ScaleParams scale_params;

  std::string config_file_path;
  auto add_common = [&config, &config_file_path](CLI::App* sub) {
    sub->add_option("--seed", config.seed, "Seed for all randomized pieces")
        ->capture_default_str();
    sub->add_option("--out", config.output_path,
                    "CSV output path (default: supersel_<subcommand>.csv)");
    sub->add_option("--threads", config.threads,
                    "Concurrent sweep-point workers (output bytes do not "
                    "depend on this)")
        ->envname("SUPERSEL_THREADS")
        ->check(CLI::Range(1u, 256u))
        ->capture_default_str();
    sub->add_option("--tolerance", config.tolerance,
                    "Slope acceptance window for the pass verdict")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--config", config_file_path,
                    "Line-oriented key = value defaults; command-line flags "
                    "and SUPERSEL_THREADS override the file");
  };

  CLI::App* overlap =
      app.add_subcommand("overlap", "Pair overlap vs site count N; the "
                                    "semi-log slope should equal log(eta). "
                                    "CSV: N:semilog,overlap_abs,log_overlap");
  overlap->add_option("--eta", overlap_params.eta,
                      "Per-site ground overlap in [0, 1]")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  overlap->add_option("--m", overlap_params.excited_sites,
                      "Excited (shared-overlap) site count")
      ->capture_default_str();
  overlap->add_option("--n-list", overlap_params.site_counts,
                      "Comma-separated site counts (each above m)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(overlap);

  CLI::App* commutator = app.add_subcommand(
      "commutator",
      "Largest probe element of [X, P] vs particle count N; the log-log "
      "slope should be -1. CSV: N:loglog,max_element,log_max_element");
  commutator->add_option("--expr", commutator_params.expression,
                         "Operator polynomial, e.g. \"p1^2 + 0.5*x2*p2\" "
                         "(x/p factors, 1-based sites, ^ exponents, complex "
                         "coefficients like (1+2i))")
      ->capture_default_str();
  commutator->add_option("--dim", commutator_params.dim,
                         "Per-site truncation dimension")
      ->check(CLI::Range(2, 64))
      ->capture_default_str();
  commutator->add_option("--probes", commutator_params.probes,
                         "Number of safe-subspace probe vectors")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  commutator->add_option("--n-list", commutator_params.particle_counts,
                         "Comma-separated particle counts")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(commutator);

  CLI::App* measure = app.add_subcommand(
      "measure",
      "Trace distance to the outcome mixture vs environment size; the "
      "semi-log slope should equal log(kappa). CSV: "
      "N_env:semilog,trace_distance,log_trace_distance,max_coherence");
  measure->add_option("--amplitudes", measure_params.amplitudes,
                      "Comma-separated real outcome amplitudes (unit "
                      "probability sum)")
      ->delimiter(',')
      ->capture_default_str();
  measure->add_option("--kappa", measure_params.kappa,
                      "Per-site environment-record overlap in [0, 1]")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  measure->add_option("--apparatus-sites", measure_params.apparatus_sites,
                      "Pointer sites appended to the object")
      ->capture_default_str();
  measure->add_option("--pointer-overlap", measure_params.pointer_overlap,
                      "Per-site overlap between distinct pointer states")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  measure->add_option("--ne-list", measure_params.env_counts,
                      "Comma-separated environment-site counts")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  add_common(measure);

  CLI::App* split_cmd = app.add_subcommand(
      "split",
      "Branch distinguishability vs splitter locality k on a product "
      "state; the count equals k (log-log slope +1) for a separated "
      "displacement. CSV: locality:loglog,distinguish_count,"
      "log_distinguish_count,amplitude_coherence");
  split_cmd->add_option("--sites", split_params.total_sites,
                        "Total sites of the split body")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  split_cmd->add_option("--k-list", split_params.localities,
                        "Comma-separated splitter localities")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  split_cmd->add_option("--displacement-overlap",
                        split_params.displacement_overlap,
                        "Overlap of the displaced site state against the "
                        "original, in [0, 1]")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  split_cmd->add_option("--epsilon", split_params.epsilon,
                        "Distinguishability threshold in (0, 1)")
      ->capture_default_str();
  add_common(split_cmd);

  CLI::App* cat = app.add_subcommand(
      "cat",
      "Cat-coherence half-life vs site count N: t_half = ln2/(gamma N), "
      "log-log slope -1. CSV: N:loglog,t_half,log_t_half");
  cat->add_option("--gamma", cat_params.gamma, "Per-site dephasing rate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cat->add_option("--n-list", cat_params.site_counts,
                  "Comma-separated site counts")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(cat);

  CLI::App* scale = app.add_subcommand(
      "scale", "Order-of-magnitude mass of an N-atom body; prints "
               "mass_kg=<v>. CSV: atoms,atom_mass_kg,mass_kg");
  scale->add_option("--atoms", scale_params.atoms, "Atom count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  scale->add_option("--atom-mass", scale_params.atom_mass_kg,
                    "Mass per atom in kg")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(scale);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (!config_file_path.empty()) {
    CLI::App* active = app.get_subcommands().front();
    if (const int code = apply_config_defaults(active, config_file_path);
        code != 0) {
      return code;
    }
  }

  // Semantic usage checks beyond per-flag ranges.
  if (*overlap) {
    config.subcommand = Subcommand::overlap;
    for (std::size_t n : overlap_params.site_counts) {
      if (n <= overlap_params.excited_sites) {
        return usage_error("every N in --n-list must exceed --m");
      }
    }
    config.params = overlap_params;
  } else if (*commutator) {
    config.subcommand = Subcommand::commutator;
    try {
      const OperatorPolynomial poly =
          parse_operator(commutator_params.expression);
      const auto support = poly.support();
      for (std::size_t n : commutator_params.particle_counts) {
        if (!support.empty() && support.back() > n) {
          return usage_error(
              "--expr touches site " + std::to_string(support.back()) +
              " but --n-list includes N = " + std::to_string(n));
        }
      }
    } catch (const SyntaxError& e) {
      return usage_error(std::string("--expr: ") + e.what());
    }
    config.params = commutator_params;
  } else if (*measure) {
    config.subcommand = Subcommand::measure;
    double total = 0.0;
    for (double c : measure_params.amplitudes) {
      if (c == 0.0) return usage_error("--amplitudes entries must be nonzero");
      total += c * c;
    }
    if (std::abs(total - 1.0) > 1e-10) {
      return usage_error("--amplitudes must have unit probability sum");
    }
    config.params = measure_params;
  } else if (*split_cmd) {
    config.subcommand = Subcommand::split;
    if (!(split_params.epsilon > 0.0 && split_params.epsilon < 1.0)) {
      return usage_error("--epsilon must lie strictly inside (0, 1)");
    }
    for (std::size_t k : split_params.localities) {
      if (k > split_params.total_sites) {
        return usage_error("--k-list entries must not exceed --sites");
      }
    }
    config.params = split_params;
  } else if (*cat) {
    config.subcommand = Subcommand::cat;
    config.params = cat_params;
  } else {
    config.subcommand = Subcommand::scale;
    config.params = scale_params;
  }

  try {
    const RunResult result = run_experiment(config);
    const std::string path = resolved_output_path(config);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
      std::cerr << "error: cannot open output file " << path << std::endl;
      return 1;
    }
    file << result.csv;
    file.close();
    if (!file) {
      std::cerr << "error: failed writing " << path << std::endl;
      return 1;
    }
    std::cout << result.output_lines;
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
}
