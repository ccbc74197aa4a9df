#include "supersel/branch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <utility>

#include "supersel/errors.hpp"

namespace supersel {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

SiteState::SiteState(Eigen::VectorXcd amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 2) {
    throw DomainError("site dimension must be >= 2, got " + std::to_string(amplitudes_.size()));
  }
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kAlgebraTol) {
    throw DomainError("site state must have unit norm, got " + std::to_string(norm));
  }
}

SiteState SiteState::normalized(Eigen::VectorXcd amplitudes) {
  const double norm = amplitudes.norm();
  if (norm == 0.0) {
    throw DegenerateStateError("cannot normalize a zero site vector");
  }
  amplitudes /= norm;
  return SiteState(std::move(amplitudes));
}

SiteState SiteState::basis(Eigen::Index dim, Eigen::Index level) {
  if (level < 0 || level >= dim) {
    throw DomainError("basis level " + std::to_string(level) + " outside dimension " +
                      std::to_string(dim));
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v(level) = 1.0;
  return SiteState(std::move(v));
}

Complex site_overlap(const SiteState& a, const SiteState& b) {
  if (a.dim() != b.dim()) {
    throw ShapeError("site dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                     std::to_string(b.dim()));
  }
  return a.amplitudes().dot(b.amplitudes());  // Eigen dot conjugates the left argument
}

SiteState with_overlap(const SiteState& reference, Complex overlap) {
  if (std::abs(overlap) > 1.0) {
    throw DomainError("overlap magnitude exceeds 1");
  }
  const Eigen::VectorXcd& u = reference.amplitudes();

  // Deterministic orthogonal complement: project out u from the basis
  // direction where u has least weight (ties broken by lowest index). That
  // direction can never be parallel to a unit vector in d >= 2 dimensions.
  Eigen::Index least = 0;
  for (Eigen::Index i = 1; i < u.size(); ++i) {
    if (std::abs(u(i)) < std::abs(u(least))) least = i;
  }
  Eigen::VectorXcd w = -std::conj(u(least)) * u;
  w(least) += 1.0;
  w /= w.norm();

  const double residual = 1.0 - std::norm(overlap);
  Eigen::VectorXcd v = overlap * u + std::sqrt(std::max(residual, 0.0)) * w;
  return SiteState(std::move(v));
}

BranchState::BranchState(std::vector<Branch> branches) {
  std::vector<Branch> kept;
  kept.reserve(branches.size());
  for (auto& b : branches) {
    if (std::abs(b.amplitude) == 0.0) continue;  // dropped, not an error
    kept.push_back(std::move(b));
  }
  if (kept.empty()) {
    throw DegenerateStateError("state has no branch with nonzero amplitude");
  }
  if (kept.size() > kMaxBranches) {
    throw CapacityError("branch count " + std::to_string(kept.size()) + " exceeds cap " +
                        std::to_string(kMaxBranches));
  }
  site_dims_.reserve(kept.front().sites.size());
  for (const auto& s : kept.front().sites) site_dims_.push_back(s.dim());
  for (const auto& b : kept) {
    if (b.sites.size() != site_dims_.size()) {
      throw ShapeError("branch site count " + std::to_string(b.sites.size()) +
                       " does not match state site count " + std::to_string(site_dims_.size()));
    }
    for (std::size_t j = 0; j < site_dims_.size(); ++j) {
      if (b.sites[j].dim() != site_dims_[j]) {
        throw ShapeError("site " + std::to_string(j) + " dimension mismatch across branches");
      }
    }
  }
  branches_ = std::move(kept);
}

double BranchState::norm_squared() const {
  Complex total{0.0, 0.0};
  for (const auto& a : branches_) {
    for (const auto& b : branches_) {
      total += product_overlap(a, b).value;
    }
  }
  return total.real();
}

OverlapResult product_overlap(const Branch& a, const Branch& b) {
  if (a.sites.size() != b.sites.size()) {
    throw ShapeError("branch site counts differ: " + std::to_string(a.sites.size()) + " vs " +
                     std::to_string(b.sites.size()));
  }
  OverlapResult out;
  out.value = std::conj(b.amplitude) * a.amplitude;
  out.log_abs = std::log(std::abs(a.amplitude)) + std::log(std::abs(b.amplitude));
  bool exact_zero_factor = !(out.log_abs > -kInf);
  for (std::size_t j = 0; j < a.sites.size(); ++j) {
    const Complex f = site_overlap(b.sites[j], a.sites[j]);
    out.value *= f;
    const double mag = std::abs(f);
    if (mag == 0.0) {
      exact_zero_factor = true;
      out.log_abs = -kInf;
    } else {
      out.log_abs += std::log(mag);
    }
  }
  out.underflowed = (out.value == Complex{0.0, 0.0}) && !exact_zero_factor;
  return out;
}

BranchState normalize(const BranchState& state) {
  const double n2 = state.norm_squared();
  if (!(n2 > 0.0)) {
    throw DegenerateStateError("state norm^2 is not positive: " + std::to_string(n2));
  }
  const double scale = 1.0 / std::sqrt(n2);
  std::vector<Branch> branches = state.branches();
  for (auto& b : branches) b.amplitude *= scale;
  return BranchState(std::move(branches));
}

ReducedDensityMatrix::ReducedDensityMatrix(std::vector<std::size_t> kept_sites,
                                           Eigen::MatrixXcd matrix, Eigen::MatrixXcd branch_coeff,
                                           Eigen::MatrixXcd kept_gram)
    : kept_sites_(std::move(kept_sites)),
      matrix_(std::move(matrix)),
      branch_coeff_(std::move(branch_coeff)),
      kept_gram_(std::move(kept_gram)) {}

namespace {

/// Tensor product of a branch's kept site states, slowest index first.
Eigen::VectorXcd kept_vector(const Branch& branch, const std::vector<std::size_t>& keep,
                             Eigen::Index dim) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
  for (std::size_t idx : keep) {
    const Eigen::VectorXcd& s = branch.sites[idx].amplitudes();
    Eigen::VectorXcd next(v.size() * s.size());
    for (Eigen::Index i = 0; i < v.size(); ++i)
      for (Eigen::Index j = 0; j < s.size(); ++j) next(i * s.size() + j) = v(i) * s(j);
    v = std::move(next);
  }
  if (v.size() != dim) throw ShapeError("kept vector dimension mismatch");
  return v;
}

}  // namespace

ReducedDensityMatrix reduce(const BranchState& state, const std::vector<std::size_t>& keep,
                            Eigen::Index dim_cap) {
  if (keep.empty()) throw DomainError("keep set must be nonempty");
  std::set<std::size_t> keep_set(keep.begin(), keep.end());
  if (keep_set.size() != keep.size()) throw DomainError("keep set has duplicate site indices");
  for (std::size_t idx : keep) {
    if (idx >= state.site_count()) {
      throw DomainError("keep index " + std::to_string(idx) + " outside site count " +
                        std::to_string(state.site_count()));
    }
  }

  Eigen::Index dim = 1;
  for (std::size_t idx : keep) {
    dim *= state.site_dims()[idx];
    if (dim > dim_cap) {
      throw CapacityError("kept dimension exceeds cap " + std::to_string(dim_cap));
    }
  }

  const std::size_t n_branches = state.branch_count();
  std::vector<Eigen::VectorXcd> kept(n_branches);
  for (std::size_t k = 0; k < n_branches; ++k) {
    kept[k] = kept_vector(state.branches()[k], keep, dim);
  }

  Eigen::MatrixXcd coeff(n_branches, n_branches);
  Eigen::MatrixXcd gram(n_branches, n_branches);
  for (std::size_t k = 0; k < n_branches; ++k) {
    for (std::size_t k2 = 0; k2 < n_branches; ++k2) {
      const Branch& bk = state.branches()[k];
      const Branch& bk2 = state.branches()[k2];
      Complex traced = bk.amplitude * std::conj(bk2.amplitude);
      for (std::size_t j = 0; j < state.site_count(); ++j) {
        if (keep_set.count(j)) continue;
        traced *= site_overlap(bk2.sites[j], bk.sites[j]);
      }
      coeff(k, k2) = traced;
      gram(k, k2) = kept[k2].dot(kept[k]);
    }
  }

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t k = 0; k < n_branches; ++k) {
    for (std::size_t k2 = 0; k2 < n_branches; ++k2) {
      rho.noalias() += coeff(k, k2) * kept[k] * kept[k2].adjoint();
    }
  }
  rho = (rho + rho.adjoint().eval()) / 2.0;
  const double tr = rho.trace().real();
  if (!(tr > 0.0)) throw DegenerateStateError("reduced matrix has nonpositive trace");
  rho /= tr;

  return ReducedDensityMatrix(keep, std::move(rho), std::move(coeff), std::move(gram));
}

double coherence(const ReducedDensityMatrix& rho, std::size_t k, std::size_t k2) {
  if (rho.source_branch_count() == 1 && k != k2) return 0.0;  // no off-diagonal exists
  if (k >= rho.source_branch_count() || k2 >= rho.source_branch_count()) {
    throw DomainError("branch label out of range");
  }
  return std::abs(rho.branch_coeff()(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k2)));
}

double purity(const ReducedDensityMatrix& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw ShapeError("trace_distance: matrix shapes differ");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho - sigma,
                                                         Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum() / 2.0;
}

double trace_distance(const ReducedDensityMatrix& rho, const ReducedDensityMatrix& sigma) {
  return trace_distance(rho.matrix(), sigma.matrix());
}

}  // namespace supersel
