#include "supersel/overlap_scaling.hpp"

#include <cmath>
#include <string>

#include "supersel/errors.hpp"
#include "supersel/rng.hpp"

namespace supersel {

namespace {

constexpr Eigen::Index kSpinDim = 2;

SiteState random_unit_site(std::uint64_t seed, std::uint64_t stream) {
  auto rng = make_rng(seed, stream);
  Eigen::VectorXcd v(kSpinDim);
  for (Eigen::Index i = 0; i < kSpinDim; ++i) v(i) = random_complex(rng);
  return SiteState::normalized(std::move(v));
}

}  // namespace

std::pair<BranchState, BranchState> build_ferromagnet_pair(
    const FerromagnetSpec& spec) {
  if (spec.total_sites == 0) {
    throw DomainError("ferromagnet pair needs at least one site");
  }
  if (spec.excited_sites >= spec.total_sites) {
    throw DomainError("excited sites must number strictly below total sites");
  }
  if (!(spec.eta >= 0.0 && spec.eta <= 1.0)) {
    throw DomainError("eta must lie in [0, 1]");
  }
  std::vector<Complex> excited = spec.excited_overlaps;
  if (excited.empty()) {
    excited.assign(spec.excited_sites, Complex{spec.eta, 0.0});
  }
  if (excited.size() != spec.excited_sites) {
    throw DomainError("need one excited overlap per excited site (or none)");
  }
  for (const Complex& z : excited) {
    if (std::abs(z) > 1.0) {
      throw DomainError("unrealizable excited overlap: magnitude above 1");
    }
  }

  const SiteState ground_a = SiteState::basis(kSpinDim, 0);
  const SiteState ground_b = with_overlap(ground_a, Complex{spec.eta, 0.0});

  Branch a{Complex{1.0, 0.0}, {}};
  Branch b{Complex{1.0, 0.0}, {}};
  a.sites.reserve(spec.total_sites);
  b.sites.reserve(spec.total_sites);
  for (std::size_t j = 0; j < spec.excited_sites; ++j) {
    const SiteState base = random_unit_site(spec.seed, j);
    a.sites.push_back(base);
    b.sites.push_back(with_overlap(base, excited[j]));
  }
  for (std::size_t j = spec.excited_sites; j < spec.total_sites; ++j) {
    a.sites.push_back(ground_a);
    b.sites.push_back(ground_b);
  }

  return {BranchState({std::move(a)}), BranchState({std::move(b)})};
}

ScalingSeries overlap_curve(const FerromagnetSpec& spec,
                            const std::vector<std::size_t>& site_counts) {
  if (site_counts.empty()) {
    throw DomainError("overlap sweep needs at least one site count");
  }

  std::vector<ScalingPoint> points;
  points.reserve(site_counts.size());
  for (std::size_t n : site_counts) {
    FerromagnetSpec point_spec = spec;
    point_spec.total_sites = n;
    auto [a, b] = build_ferromagnet_pair(point_spec);

    const OverlapResult overlap =
        product_overlap(a.branches().front(), b.branches().front());
    ScalingPoint point;
    point.parameter = static_cast<double>(n);
    point.log_value = overlap.log_abs;
    // The raw product may underflow; the log companion is authoritative and
    // the value column is reconstructed from it.
    point.value = std::exp(overlap.log_abs);
    points.push_back(point);
  }
  return make_series(std::move(points), FitAxes::semilog);
}

}  // namespace supersel
