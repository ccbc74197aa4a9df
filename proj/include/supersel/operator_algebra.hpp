#ifndef SUPERSEL_OPERATOR_ALGEBRA_HPP
#define SUPERSEL_OPERATOR_ALGEBRA_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "supersel/branch.hpp"
#include "supersel/scaling.hpp"

namespace supersel {

/// Largest exponent the parser accepts on a single x or p factor.
inline constexpr int kMaxExponent = 16;

/// Smallest and largest per-site truncation the matrix backend supports.
inline constexpr Eigen::Index kMinSiteDim = 2;
inline constexpr Eigen::Index kMaxSiteDim = 64;

/// One site's normal-ordered factor x^a p^b (positions to the left of
/// momenta). Exponents are never both zero inside a stored term.
struct SiteFactor {
  std::size_t site = 0;  // 1-based particle index
  int x_exp = 0;
  int p_exp = 0;

  friend bool operator==(const SiteFactor&, const SiteFactor&) = default;
};

/// A single normal-ordered product term: coefficient times x^a p^b factors
/// on distinct sites, sorted by site index.
struct OperatorTerm {
  Complex coefficient{1.0, 0.0};
  std::vector<SiteFactor> factors;

  int total_degree() const;
  int momentum_degree() const;

  friend bool operator==(const OperatorTerm&, const OperatorTerm&) = default;
};

/// A polynomial in site positions and momenta, kept in a canonical form:
/// every term normal-ordered, like terms merged, zero coefficients dropped,
/// terms sorted by their factor signature. Equality of canonical forms is
/// operator equality.
class OperatorPolynomial {
 public:
  /// The zero polynomial.
  OperatorPolynomial() = default;

  /// Canonicalizes arbitrary normal-ordered terms: merges duplicates,
  /// drops exact zeros, sorts.
  static OperatorPolynomial from_terms(std::vector<OperatorTerm> terms);

  /// A constant polynomial (empty factor list) unless the value is zero.
  static OperatorPolynomial constant(Complex value);

  const std::vector<OperatorTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Sorted distinct site indices appearing in any term.
  std::vector<std::size_t> support() const;

  /// Largest total exponent over terms (0 for constants and zero).
  int degree() const;

  /// Largest momentum exponent sum over terms; the `n` of the suppression
  /// and counting statements.
  int momentum_degree() const;

  OperatorPolynomial operator+(const OperatorPolynomial& rhs) const;
  OperatorPolynomial operator-(const OperatorPolynomial& rhs) const;
  OperatorPolynomial scaled(Complex factor) const;

  /// Right-multiplies by x_site^exp or p_site^exp, re-establishing normal
  /// order via x^a p^b * x = x^(a+1) p^b - i b x^a p^(b-1).
  OperatorPolynomial times_position(std::size_t site, int exp) const;
  OperatorPolynomial times_momentum(std::size_t site, int exp) const;

  friend bool operator==(const OperatorPolynomial&,
                         const OperatorPolynomial&) = default;

 private:
  std::vector<OperatorTerm> terms_;
};

/// Parses the operator grammar:
///
///   expression  := ['+'|'-'] term (('+'|'-') term)*
///   term        := coefficient? ('*'? factor)*
///   factor      := ('x'|'p') index ('^' exponent)?
///   coefficient := decimal | decimal 'i' | '(' decimal ('+'|'-') decimal 'i' ')'
///
/// Site indices are 1-based, exponents are capped at kMaxExponent, and
/// whitespace between tokens is insignificant. Products are normal-ordered
/// during parsing, so parse_operator("p1*x1") equals x1*p1 - 1i.
/// Malformed input raises SyntaxError carrying the byte offset.
OperatorPolynomial parse_operator(std::string_view text);

/// Canonical rendering; parse_operator(format_operator(P)) reproduces P
/// exactly. The zero polynomial prints as "0".
std::string format_operator(const OperatorPolynomial& poly);

/// The commutator [x_site, P], computed term by term from
/// [x, x^a p^b] = i b x^a p^(b-1). Exact and symbolic.
OperatorPolynomial commutator_x(std::size_t site,
                                       const OperatorPolynomial& poly);

/// The collective coordinate (1/N) * sum_i x_i of an N-particle body.
struct ComOperator {
  std::size_t particle_count = 0;
};

/// [X, P] for the collective coordinate. Only sites in the support of P
/// contribute, so the sum has at most |support| nonzero pieces; N enters
/// purely as the scalar prefactor 1/N. Requires every site of P to lie in
/// 1..N.
OperatorPolynomial commutator_com(const ComOperator& com,
                                  const OperatorPolynomial& poly);

/// Term counting for sum_{i in support} [x_i, P]: the canonical term count
/// against the m*n budget (m = support size, n = momentum degree) that the
/// suppression argument allots to series-shaped observables.
struct TermCount {
  std::size_t actual = 0;
  std::size_t bound = 0;
};
TermCount term_count_bound(const OperatorPolynomial& poly);

/// Truncated single-site quadratures in the number basis: a[n-1][n] = sqrt(n),
/// x = (a + a^T) / sqrt(2), p = -i (a - a^T) / sqrt(2). The canonical pair
/// satisfies [x, p] = i exactly on entries away from the last level.
struct SiteMatrices {
  Eigen::Index dim = 0;
  Eigen::MatrixXcd x;
  Eigen::MatrixXcd p;
};
SiteMatrices build_site_matrices(Eigen::Index dim);

/// Realizes a polynomial as a dense matrix on the tensor product of the
/// given support sites (slowest index first), factor matrices composed per
/// site and Kronecker-multiplied. `support` must cover the polynomial's own
/// support; extra sites act as identity. Defaults to the polynomial's
/// support. Throws CapacityError once dim^|support| exceeds dim_cap.
Eigen::MatrixXcd realize(const OperatorPolynomial& poly,
                         const SiteMatrices& mats,
                         std::vector<std::size_t> support = {},
                         Eigen::Index dim_cap = kDefaultKeptDimCap);

/// Probe vectors for commutator norms: seeded complex-normal vectors
/// restricted to number levels <= dim - 1 - degree, where truncation
/// artifacts cannot reach.
struct ProbeSpec {
  std::uint64_t seed = 42;
  std::size_t count = 2;
};

/// Sweeps N and records the largest probe matrix element
/// |<u| realize([X, P]) |v>|. The commutator's dependence on N is exactly
/// the scalar 1/N, so the sweep evaluates the N-free realization once and
/// scales it, making the 1/N law exact by construction and cheap to sample.
/// Fits log(value) against log(N); a symbolically zero commutator yields an
/// all-zero series flagged exact_zero.
ScalingSeries commutator_scaling(const OperatorPolynomial& poly,
                                 Eigen::Index dim,
                                 const std::vector<std::size_t>& particle_counts,
                                 const ProbeSpec& probe = {});

}  // namespace supersel

#endif
