#include "supersel/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "supersel/errors.hpp"
#include "supersel/rng.hpp"

namespace supersel {

namespace {

/// K unit vectors in C^dim (dim >= max(2, K)) with every pairwise overlap
/// equal to `overlap`. K = 2 uses the exact (1,0) vs (q, sqrt(1-q^2)) pair;
/// K >= 3 uses the symmetric construction a*e_k + b*f with f the uniform
/// unit vector over the first K coordinates.
std::vector<SiteState> equal_overlap_family(std::size_t count, double overlap,
                                            Eigen::Index dim) {
  if (!(overlap >= 0.0 && overlap <= 1.0)) {
    throw DomainError("pairwise overlap must lie in [0, 1]");
  }
  const SiteState first = SiteState::basis(dim, 0);
  if (count == 1) return {first};
  if (count == 2) return {first, with_overlap(first, Complex{overlap, 0.0})};

  if (dim < static_cast<Eigen::Index>(count)) {
    throw DomainError("family dimension below member count");
  }
  const double k = static_cast<double>(count);
  const double a = std::sqrt(1.0 - overlap);
  const double b =
      -a / std::sqrt(k) + std::sqrt((1.0 - overlap) / k + overlap);

  std::vector<SiteState> family;
  family.reserve(count);
  for (std::size_t member = 0; member < count; ++member) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    for (std::size_t j = 0; j < count; ++j) v(j) = b / std::sqrt(k);
    v(member) += a;
    family.emplace_back(SiteState(std::move(v)));
  }
  return family;
}

void validate_amplitudes(const std::vector<Complex>& amplitudes) {
  double total = 0.0;
  for (const Complex& c : amplitudes) total += std::norm(c);
  if (std::abs(total - 1.0) > kSpectralTol) {
    throw DomainError("outcome amplitudes must have unit probability sum");
  }
}

std::vector<std::size_t> resolve_site_list(const std::vector<std::size_t>& given,
                                           std::size_t site_count) {
  std::vector<std::size_t> sites = given;
  if (sites.empty()) {
    sites.resize(site_count);
    std::iota(sites.begin(), sites.end(), std::size_t{0});
    return sites;
  }
  std::set<std::size_t> distinct(sites.begin(), sites.end());
  if (distinct.size() != sites.size()) {
    throw DomainError("site list has duplicate indices");
  }
  for (std::size_t j : sites) {
    if (j >= site_count) {
      throw DomainError("site index " + std::to_string(j) +
                        " outside site count " + std::to_string(site_count));
    }
  }
  return sites;
}

/// Replaces v's overlap against u: v = z u + chi w  ->  z' u + chi' w,
/// keeping v's own perpendicular direction where it has one.
SiteState adjust_overlap(const SiteState& u, const SiteState& v, Complex target) {
  if (std::abs(target) > 1.0) target /= std::abs(target);  // roundoff guard
  const Complex z = site_overlap(u, v);
  Eigen::VectorXcd w = v.amplitudes() - z * u.amplitudes();
  const double w_norm = w.norm();
  if (w_norm == 0.0) return with_overlap(u, target);
  const double chi =
      std::sqrt(std::max(0.0, 1.0 - std::norm(target)));
  Eigen::VectorXcd adjusted = target * u.amplitudes() + (chi / w_norm) * w;
  return SiteState(std::move(adjusted));
}

}  // namespace

BranchState premeasure(const MeasurementSpec& spec) {
  const std::size_t outcomes = spec.outcome_amplitudes.size();
  if (outcomes == 0) throw DomainError("need at least one outcome amplitude");
  if (spec.object_dim < 2) throw DomainError("object dimension must be >= 2");
  if (static_cast<Eigen::Index>(outcomes) > spec.object_dim) {
    throw DomainError("more outcomes than object dimension");
  }
  validate_amplitudes(spec.outcome_amplitudes);

  const Eigen::Index pointer_dim =
      std::max<Eigen::Index>(2, static_cast<Eigen::Index>(outcomes));
  const std::vector<SiteState> pointers =
      equal_overlap_family(outcomes, spec.pointer_overlap, pointer_dim);

  std::vector<Branch> branches;
  branches.reserve(outcomes);
  for (std::size_t k = 0; k < outcomes; ++k) {
    Branch b{spec.outcome_amplitudes[k], {}};
    b.sites.reserve(1 + spec.apparatus_sites);
    b.sites.push_back(
        SiteState::basis(spec.object_dim, static_cast<Eigen::Index>(k)));
    for (std::size_t j = 0; j < spec.apparatus_sites; ++j) {
      b.sites.push_back(pointers[k]);
    }
    branches.push_back(std::move(b));
  }
  return BranchState(std::move(branches));
}

BranchState environment_scatter(const BranchState& state,
                                const EnvironmentSpec& env) {
  if (!(env.kappa >= 0.0 && env.kappa <= 1.0)) {
    throw DomainError("kappa must lie in [0, 1]");
  }
  if (env.env_sites == 0) return state;

  const std::size_t count = state.branch_count();
  const Eigen::Index record_dim =
      std::max<Eigen::Index>(2, static_cast<Eigen::Index>(count));
  const std::vector<SiteState> records =
      equal_overlap_family(count, env.kappa, record_dim);

  std::vector<Branch> branches = state.branches();
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t j = 0; j < env.env_sites; ++j) {
      branches[k].sites.push_back(records[k]);
    }
  }
  return BranchState(std::move(branches));
}

std::pair<BranchState, DephasingReport> infrared_dephase(
    const BranchState& state, const DephasingSpec& spec,
    const std::vector<std::size_t>& sites) {
  if (spec.gamma < 0.0) throw DomainError("dephasing rate must be >= 0");
  if (spec.time < 0.0) throw DomainError("elapsed time must be >= 0");
  if (state.branch_count() != 2) {
    throw DomainError("dephasing acts on a two-branch state");
  }
  const std::vector<std::size_t> dephased =
      resolve_site_list(sites, state.site_count());

  DephasingReport report;
  report.analytic_factor = std::exp(-spec.gamma * spec.time);
  report.site_factors.reserve(dephased.size());

  if (spec.mode == DephasingMode::sampled) {
    if (spec.samples == 0) {
      throw DomainError("sampled dephasing needs at least one sample");
    }
    const double sigma = std::sqrt(2.0 * spec.gamma * spec.time);
    for (std::size_t j : dephased) {
      auto rng = make_rng(spec.seed, j);
      std::normal_distribution<double> phase(0.0, sigma);
      double sum_re = 0.0;
      double sum_im = 0.0;
      double sum_re_sq = 0.0;
      for (std::size_t s = 0; s < spec.samples; ++s) {
        const double phi = phase(rng);
        const double re = std::cos(phi);
        sum_re += re;
        sum_im += std::sin(phi);
        sum_re_sq += re * re;
      }
      const double n = static_cast<double>(spec.samples);
      const Complex mean{sum_re / n, sum_im / n};
      report.site_factors.push_back(mean);
      double standard_error = 0.0;
      if (spec.samples > 1) {
        const double var = std::max(
            0.0, (sum_re_sq - n * mean.real() * mean.real()) / (n - 1.0));
        standard_error = std::sqrt(var / n);
      }
      report.site_standard_errors.push_back(standard_error);
    }
  } else {
    report.site_factors.assign(dephased.size(),
                               Complex{report.analytic_factor, 0.0});
  }

  Complex total{1.0, 0.0};
  for (const Complex& f : report.site_factors) total *= f;
  report.total_factor = total;

  std::vector<Branch> branches = state.branches();
  Branch& follower = branches[1];
  const Branch& leader = branches[0];
  for (std::size_t idx = 0; idx < dephased.size(); ++idx) {
    const Complex f = report.site_factors[idx];
    if (f == Complex{1.0, 0.0}) continue;  // zero rate or time: untouched
    const std::size_t j = dephased[idx];
    const Complex z = site_overlap(leader.sites[j], follower.sites[j]);
    follower.sites[j] = adjust_overlap(leader.sites[j], follower.sites[j], f * z);
  }
  return {BranchState(std::move(branches)), std::move(report)};
}

DecoherenceMetrics decoherence_report(const BranchState& state,
                                      const std::vector<std::size_t>& keep,
                                      const MeasurementSpec& spec) {
  if (std::find(keep.begin(), keep.end(), std::size_t{0}) == keep.end()) {
    throw DomainError("keep set must include the object site 0");
  }
  if (spec.outcome_amplitudes.size() != state.branch_count()) {
    throw ShapeError("need one outcome amplitude per branch");
  }
  validate_amplitudes(spec.outcome_amplitudes);

  const ReducedDensityMatrix rho = reduce(state, keep);

  // The ideal mixture: same kept parts, coherence-free weights |c_k|^2.
  Eigen::MatrixXcd mixture;
  double total_weight = 0.0;
  for (std::size_t k = 0; k < state.branch_count(); ++k) {
    Branch pure{Complex{1.0, 0.0}, state.branches()[k].sites};
    const ReducedDensityMatrix rho_k = reduce(BranchState({std::move(pure)}), keep);
    const double weight = std::norm(spec.outcome_amplitudes[k]);
    if (mixture.size() == 0) {
      mixture = weight * rho_k.matrix();
    } else {
      mixture += weight * rho_k.matrix();
    }
    total_weight += weight;
  }
  mixture /= total_weight;

  DecoherenceMetrics metrics;
  for (std::size_t k = 0; k < state.branch_count(); ++k) {
    for (std::size_t k2 = k + 1; k2 < state.branch_count(); ++k2) {
      PairMetric pair;
      pair.k = k;
      pair.k2 = k2;
      pair.coherence = coherence(rho, k, k2);
      pair.kept_overlap = std::abs(rho.kept_gram()(
          static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k2)));
      metrics.pairs.push_back(pair);
    }
  }
  metrics.purity = purity(rho);
  metrics.trace_distance_to_mixture = trace_distance(rho.matrix(), mixture);
  return metrics;
}

BranchState split(const BranchState& state, const SplitterSpec& spec) {
  const std::size_t n = state.site_count();
  if (spec.locality == 0) throw DomainError("splitter locality must be >= 1");
  if (spec.locality > n) {
    throw DomainError("splitter locality " + std::to_string(spec.locality) +
                      " exceeds site count " + std::to_string(n));
  }
  std::vector<std::size_t> touched = spec.sites;
  if (touched.empty()) {
    touched.resize(spec.locality);
    std::iota(touched.begin(), touched.end(), std::size_t{0});
  } else if (touched.size() != spec.locality) {
    throw DomainError("touched-site list must match the locality");
  }
  touched = resolve_site_list(touched, n);
  for (std::size_t j : touched) {
    if (state.site_dims()[j] != spec.displacement.dim()) {
      throw ShapeError("displacement dimension mismatch at site " +
                       std::to_string(j));
    }
  }
  if (2 * state.branch_count() > kMaxBranches) {
    throw CapacityError("split would exceed the branch cap");
  }

  const double half = 1.0 / std::sqrt(2.0);
  std::vector<Branch> children;
  children.reserve(2 * state.branch_count());
  for (const Branch& parent : state.branches()) {
    Branch stay{parent.amplitude * half, parent.sites};
    Branch moved{parent.amplitude * half, parent.sites};
    for (std::size_t j : touched) moved.sites[j] = spec.displacement;
    children.push_back(std::move(stay));
    children.push_back(std::move(moved));
  }
  return normalize(BranchState(std::move(children)));
}

std::vector<PairDistinguishability> branch_distinguishability(
    const BranchState& state, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("epsilon must lie in (0, 1)");
  }
  std::vector<PairDistinguishability> pairs;
  for (std::size_t k = 0; k < state.branch_count(); ++k) {
    for (std::size_t k2 = k + 1; k2 < state.branch_count(); ++k2) {
      PairDistinguishability pair;
      pair.k = k;
      pair.k2 = k2;
      for (std::size_t j = 0; j < state.site_count(); ++j) {
        const Complex overlap = site_overlap(state.branches()[k].sites[j],
                                             state.branches()[k2].sites[j]);
        if (std::abs(overlap) < 1.0 - epsilon) ++pair.count;
      }
      pairs.push_back(pair);
    }
  }
  return pairs;
}

ScalingSeries cat_lifetime(const std::vector<std::size_t>& site_counts,
                           double gamma) {
  if (!(gamma > 0.0)) throw DomainError("dephasing rate must be positive");
  if (site_counts.empty()) {
    throw DomainError("lifetime sweep needs at least one site count");
  }
  std::vector<ScalingPoint> points;
  points.reserve(site_counts.size());
  for (std::size_t n : site_counts) {
    if (n == 0) throw DomainError("site counts must be positive");
    ScalingPoint point;
    point.parameter = static_cast<double>(n);
    point.value = std::log(2.0) / (gamma * static_cast<double>(n));
    point.log_value = std::log(point.value);
    points.push_back(point);
  }
  return make_series(std::move(points), FitAxes::loglog);
}

double estimate_scale(double n_atoms, double atom_mass_kg) {
  if (!(n_atoms > 0.0) || !(atom_mass_kg > 0.0)) {
    throw DomainError("scale estimate needs positive inputs");
  }
  return n_atoms * atom_mass_kg;
}

}  // namespace supersel
