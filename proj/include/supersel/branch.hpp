#ifndef SUPERSEL_BRANCH_HPP
#define SUPERSEL_BRANCH_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <vector>

namespace supersel {

using Complex = std::complex<double>;

/// Tolerance for exact algebraic identities (double-precision headroom).
inline constexpr double kAlgebraTol = 1e-12;
/// Tolerance for eigenvalue-based and accumulated checks.
inline constexpr double kSpectralTol = 1e-10;

/// Default cap on the tensor dimension of a kept-site reduction.
inline constexpr Eigen::Index kDefaultKeptDimCap = 4096;

/// Cap on branch count; superpositions here stay few-branch by design.
inline constexpr std::size_t kMaxBranches = 16;

/// State of a single site: a unit vector in C^d, d >= 2.
class SiteState {
 public:
  /// Validates d >= 2 and unit norm within 1e-12; does not rescale, so
  /// overlaps engineered by the caller survive exactly.
  explicit SiteState(Eigen::VectorXcd amplitudes);

  /// Rescales an arbitrary nonzero vector to unit norm.
  static SiteState normalized(Eigen::VectorXcd amplitudes);

  /// Basis vector |level> in C^dim.
  static SiteState basis(Eigen::Index dim, Eigen::Index level);

  Eigen::Index dim() const { return amplitudes_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }

 private:
  Eigen::VectorXcd amplitudes_;
};

/// <a|b>, conjugating `a`.
Complex site_overlap(const SiteState& a, const SiteState& b);

/// A unit vector v with <reference|v> equal to `overlap` by construction:
/// v = z * u + sqrt(1 - |z|^2) * w with w a deterministic unit vector
/// orthogonal to u (the basis direction of least weight in u, projected).
/// Requires |overlap| <= 1.
SiteState with_overlap(const SiteState& reference, Complex overlap);

/// One product-state term of a superposition: amplitude times a product of
/// per-site states.
struct Branch {
  Complex amplitude;
  std::vector<SiteState> sites;
};

/// A superposition of product states over N sites. The representation keeps
/// cost polynomial in N and branch count; no dense tensor is ever built.
class BranchState {
 public:
  /// Validates matching site counts and per-site dimensions; drops branches
  /// with exactly zero amplitude; an all-zero state is an error.
  explicit BranchState(std::vector<Branch> branches);

  std::size_t branch_count() const { return branches_.size(); }
  std::size_t site_count() const { return site_dims_.size(); }
  const std::vector<Branch>& branches() const { return branches_; }
  const std::vector<Eigen::Index>& site_dims() const { return site_dims_; }

  /// Sum over branch pairs of amplitude products times site-overlap products;
  /// real up to roundoff for any state.
  double norm_squared() const;

 private:
  std::vector<Branch> branches_;
  std::vector<Eigen::Index> site_dims_;
};

/// Overlap of two product branches with a log-magnitude companion. The raw
/// value may underflow to exact zero for large N; `log_abs` carries the
/// magnitude regardless (-inf only when some factor is exactly zero), and
/// `underflowed` flags the raw-zero-but-nonzero-magnitude case.
struct OverlapResult {
  Complex value{0.0, 0.0};
  double log_abs = 0.0;
  bool underflowed = false;
};

/// conj(amp_b) * amp_a * prod_j <s_{b,j}|s_{a,j}>, i.e. <b|a>, as a running
/// product over sites.
OverlapResult product_overlap(const Branch& a, const Branch& b);

/// Rescales amplitudes so that norm^2 == 1; relative branch phases unchanged.
BranchState normalize(const BranchState& state);

/// Density matrix of a kept-site subsystem. Carries the tensor-basis matrix
/// and, alongside it, the branch-label coefficient matrix
///   coeff(k,k') = c_k * conj(c_k') * prod_{j traced} <s_{k',j}|s_{k,j}>
/// together with the Gram matrix of the kept product vectors. When kept parts
/// are orthonormal the coefficient matrix is the density matrix in the
/// branch-label basis; otherwise the Gram off-diagonals say how far that
/// reading is from exact.
class ReducedDensityMatrix {
 public:
  ReducedDensityMatrix(std::vector<std::size_t> kept_sites, Eigen::MatrixXcd matrix,
                       Eigen::MatrixXcd branch_coeff, Eigen::MatrixXcd kept_gram);

  const std::vector<std::size_t>& kept_sites() const { return kept_sites_; }
  /// Hermitian, unit trace, PSD up to roundoff; dimension = product of kept dims.
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const Eigen::MatrixXcd& branch_coeff() const { return branch_coeff_; }
  const Eigen::MatrixXcd& kept_gram() const { return kept_gram_; }
  std::size_t source_branch_count() const { return static_cast<std::size_t>(branch_coeff_.rows()); }

 private:
  std::vector<std::size_t> kept_sites_;
  Eigen::MatrixXcd matrix_;
  Eigen::MatrixXcd branch_coeff_;
  Eigen::MatrixXcd kept_gram_;
};

/// Partial trace over the complement of `keep`, computed analytically from
/// branch overlaps. `keep` must be a nonempty set of valid site indices and
/// the product of kept dimensions must not exceed `dim_cap`.
ReducedDensityMatrix reduce(const BranchState& state, const std::vector<std::size_t>& keep,
                            Eigen::Index dim_cap = kDefaultKeptDimCap);

/// |coeff(k, k2)| in the branch-label basis. For a reduction of a
/// single-branch state there is no off-diagonal; any k != k2 returns 0 by
/// convention. Otherwise labels must address source branches.
double coherence(const ReducedDensityMatrix& rho, std::size_t k, std::size_t k2);

/// trace(rho^2), in (0, 1].
double purity(const ReducedDensityMatrix& rho);

/// Half the absolute-eigenvalue sum of rho - sigma, in [0, 1].
double trace_distance(const ReducedDensityMatrix& rho, const ReducedDensityMatrix& sigma);
double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);

}  // namespace supersel

#endif
