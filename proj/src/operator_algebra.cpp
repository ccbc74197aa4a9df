#include "supersel/operator_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <utility>

#include "supersel/errors.hpp"
#include "supersel/rng.hpp"

namespace supersel {

namespace {

std::tuple<std::size_t, int, int> factor_key(const SiteFactor& f) {
  return {f.site, f.x_exp, f.p_exp};
}

bool term_signature_less(const OperatorTerm& a, const OperatorTerm& b) {
  return std::lexicographical_compare(
      a.factors.begin(), a.factors.end(), b.factors.begin(), b.factors.end(),
      [](const SiteFactor& x, const SiteFactor& y) {
        return factor_key(x) < factor_key(y);
      });
}

bool same_signature(const OperatorTerm& a, const OperatorTerm& b) {
  return a.factors == b.factors;
}

// Nonzero entries of a small dense matrix, used to realize tensor factors
// without touching the (mostly zero) full product space entry by entry.
struct SparseEntry {
  Eigen::Index row;
  Eigen::Index col;
  Complex value;
};

std::vector<SparseEntry> nonzero_entries(const Eigen::MatrixXcd& m) {
  std::vector<SparseEntry> entries;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (m(r, c) != Complex{}) entries.push_back({r, c, m(r, c)});
    }
  }
  return entries;
}

}  // namespace

int OperatorTerm::total_degree() const {
  int degree = 0;
  for (const SiteFactor& f : factors) degree += f.x_exp + f.p_exp;
  return degree;
}

int OperatorTerm::momentum_degree() const {
  int degree = 0;
  for (const SiteFactor& f : factors) degree += f.p_exp;
  return degree;
}

OperatorPolynomial OperatorPolynomial::from_terms(
    std::vector<OperatorTerm> terms) {
  for (OperatorTerm& term : terms) {
    for (const SiteFactor& f : term.factors) {
      if (f.site == 0) throw DomainError("site indices are 1-based");
      if (f.x_exp < 0 || f.p_exp < 0) {
        throw DomainError("factor exponents must be non-negative");
      }
    }
    std::erase_if(term.factors, [](const SiteFactor& f) {
      return f.x_exp == 0 && f.p_exp == 0;
    });
    std::sort(term.factors.begin(), term.factors.end(),
              [](const SiteFactor& a, const SiteFactor& b) {
                return factor_key(a) < factor_key(b);
              });
    for (std::size_t i = 1; i < term.factors.size(); ++i) {
      if (term.factors[i - 1].site == term.factors[i].site) {
        throw DomainError("duplicate site in term factors");
      }
    }
  }

  std::sort(terms.begin(), terms.end(), term_signature_less);

  OperatorPolynomial poly;
  for (OperatorTerm& term : terms) {
    if (!poly.terms_.empty() && same_signature(poly.terms_.back(), term)) {
      poly.terms_.back().coefficient += term.coefficient;
      if (poly.terms_.back().coefficient == Complex{}) poly.terms_.pop_back();
    } else if (term.coefficient != Complex{}) {
      poly.terms_.push_back(std::move(term));
    }
  }
  return poly;
}

OperatorPolynomial OperatorPolynomial::constant(Complex value) {
  return from_terms({OperatorTerm{value, {}}});
}

std::vector<std::size_t> OperatorPolynomial::support() const {
  std::vector<std::size_t> sites;
  for (const OperatorTerm& term : terms_) {
    for (const SiteFactor& f : term.factors) sites.push_back(f.site);
  }
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  return sites;
}

int OperatorPolynomial::degree() const {
  int degree = 0;
  for (const OperatorTerm& term : terms_) {
    degree = std::max(degree, term.total_degree());
  }
  return degree;
}

int OperatorPolynomial::momentum_degree() const {
  int degree = 0;
  for (const OperatorTerm& term : terms_) {
    degree = std::max(degree, term.momentum_degree());
  }
  return degree;
}

OperatorPolynomial OperatorPolynomial::operator+(
    const OperatorPolynomial& rhs) const {
  std::vector<OperatorTerm> all = terms_;
  all.insert(all.end(), rhs.terms_.begin(), rhs.terms_.end());
  return from_terms(std::move(all));
}

OperatorPolynomial OperatorPolynomial::operator-(
    const OperatorPolynomial& rhs) const {
  return *this + rhs.scaled(Complex{-1.0, 0.0});
}

OperatorPolynomial OperatorPolynomial::scaled(Complex factor) const {
  std::vector<OperatorTerm> scaled_terms = terms_;
  for (OperatorTerm& term : scaled_terms) term.coefficient *= factor;
  return from_terms(std::move(scaled_terms));
}

OperatorPolynomial OperatorPolynomial::times_position(std::size_t site,
                                                      int exp) const {
  if (site == 0) throw DomainError("site indices are 1-based");
  if (exp < 0) throw DomainError("factor exponents must be non-negative");

  OperatorPolynomial result = *this;
  for (int step = 0; step < exp; ++step) {
    std::vector<OperatorTerm> next;
    next.reserve(2 * result.terms_.size());
    for (const OperatorTerm& term : result.terms_) {
      SiteFactor current{site, 0, 0};
      for (const SiteFactor& f : term.factors) {
        if (f.site == site) current = f;
      }

      // x^a p^b * x = x^(a+1) p^b - i b x^a p^(b-1), other sites commute.
      OperatorTerm raised = term;
      bool found = false;
      for (SiteFactor& f : raised.factors) {
        if (f.site == site) {
          ++f.x_exp;
          found = true;
        }
      }
      if (!found) raised.factors.push_back({site, 1, 0});
      next.push_back(std::move(raised));

      if (current.p_exp >= 1) {
        OperatorTerm lowered = term;
        lowered.coefficient *=
            Complex{0.0, -static_cast<double>(current.p_exp)};
        for (SiteFactor& f : lowered.factors) {
          if (f.site == site) --f.p_exp;
        }
        next.push_back(std::move(lowered));
      }
    }
    result = from_terms(std::move(next));
  }
  return result;
}

OperatorPolynomial OperatorPolynomial::times_momentum(std::size_t site,
                                                      int exp) const {
  if (site == 0) throw DomainError("site indices are 1-based");
  if (exp < 0) throw DomainError("factor exponents must be non-negative");

  std::vector<OperatorTerm> next = terms_;
  for (OperatorTerm& term : next) {
    bool found = false;
    for (SiteFactor& f : term.factors) {
      if (f.site == site) {
        f.p_exp += exp;
        found = true;
      }
    }
    if (!found && exp > 0) term.factors.push_back({site, 0, exp});
  }
  return from_terms(std::move(next));
}

OperatorPolynomial commutator_x(std::size_t site,
                                       const OperatorPolynomial& poly) {
  if (site == 0) throw DomainError("site indices are 1-based");

  // [x, x^a p^b] = i b x^a p^(b-1) on the matching site, identity elsewhere.
  std::vector<OperatorTerm> out;
  for (const OperatorTerm& term : poly.terms()) {
    for (const SiteFactor& f : term.factors) {
      if (f.site != site || f.p_exp == 0) continue;
      OperatorTerm lowered = term;
      lowered.coefficient *= Complex{0.0, static_cast<double>(f.p_exp)};
      for (SiteFactor& g : lowered.factors) {
        if (g.site == site) --g.p_exp;
      }
      out.push_back(std::move(lowered));
    }
  }
  return OperatorPolynomial::from_terms(std::move(out));
}

OperatorPolynomial commutator_com(const ComOperator& com,
                                  const OperatorPolynomial& poly) {
  if (com.particle_count == 0) {
    throw DomainError("collective coordinate needs at least one particle");
  }
  const std::vector<std::size_t> sites = poly.support();
  if (!sites.empty() && sites.back() > com.particle_count) {
    throw DomainError(
        "operator support exceeds the collective coordinate's particle count");
  }

  OperatorPolynomial sum;
  for (std::size_t site : sites) {
    sum = sum + commutator_x(site, poly);
  }
  const double n = static_cast<double>(com.particle_count);
  return sum.scaled(Complex{1.0 / n, 0.0});
}

TermCount term_count_bound(const OperatorPolynomial& poly) {
  OperatorPolynomial sum;
  for (std::size_t site : poly.support()) {
    sum = sum + commutator_x(site, poly);
  }
  TermCount count;
  count.actual = sum.terms().size();
  count.bound = poly.support().size() *
                static_cast<std::size_t>(poly.momentum_degree());
  return count;
}

SiteMatrices build_site_matrices(Eigen::Index dim) {
  if (dim < kMinSiteDim || dim > kMaxSiteDim) {
    throw DomainError("site dimension must lie in [2, 64]");
  }
  Eigen::MatrixXcd lower = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index n = 1; n < dim; ++n) {
    lower(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  const Eigen::MatrixXcd raise = lower.adjoint();

  SiteMatrices mats;
  mats.dim = dim;
  mats.x = (lower + raise) / std::sqrt(2.0);
  mats.p = Complex{0.0, -1.0} * (lower - raise) / std::sqrt(2.0);
  return mats;
}

Eigen::MatrixXcd realize(const OperatorPolynomial& poly,
                         const SiteMatrices& mats,
                         std::vector<std::size_t> support,
                         Eigen::Index dim_cap) {
  if (support.empty()) support = poly.support();
  {
    std::vector<std::size_t> sorted = support;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw DomainError("realization support has duplicate sites");
    }
    for (std::size_t site : poly.support()) {
      if (!std::binary_search(sorted.begin(), sorted.end(), site)) {
        throw DomainError("realization support does not cover the polynomial");
      }
    }
  }

  const Eigen::Index d = mats.dim;
  Eigen::Index dims = 1;
  for (std::size_t s = 0; s < support.size(); ++s) {
    if (dims > dim_cap / d) {
      throw CapacityError("realization dimension exceeds the cap");
    }
    dims *= d;
  }

  // Strides with the first listed site slowest, matching the tensor-basis
  // convention of reduced density matrices.
  const std::size_t m = support.size();
  std::vector<Eigen::Index> stride(m, 1);
  for (std::size_t s = m; s-- > 1;) {
    stride[s - 1] = stride[s] * d;
  }

  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dims, dims);
  const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(d, d);

  for (const OperatorTerm& term : poly.terms()) {
    // Per-site factor matrices x^a p^b; absent sites act as identity.
    std::vector<std::vector<SparseEntry>> factors(m);
    for (std::size_t s = 0; s < m; ++s) {
      const SiteFactor* f = nullptr;
      for (const SiteFactor& g : term.factors) {
        if (g.site == support[s]) f = &g;
      }
      if (f == nullptr) {
        factors[s] = nonzero_entries(identity);
        continue;
      }
      Eigen::MatrixXcd site_mat = identity;
      for (int k = 0; k < f->x_exp; ++k) site_mat = site_mat * mats.x;
      for (int k = 0; k < f->p_exp; ++k) site_mat = site_mat * mats.p;
      factors[s] = nonzero_entries(site_mat);
    }

    // A factor matrix with no nonzero entries annihilates the whole term.
    if (std::any_of(factors.begin(), factors.end(),
                    [](const auto& f) { return f.empty(); })) {
      continue;
    }

    // Accumulate the Kronecker product over its nonzero entries only.
    std::vector<std::size_t> pick(m, 0);
    while (true) {
      Eigen::Index row = 0;
      Eigen::Index col = 0;
      Complex value = term.coefficient;
      for (std::size_t s = 0; s < m; ++s) {
        const SparseEntry& e = factors[s][pick[s]];
        row += e.row * stride[s];
        col += e.col * stride[s];
        value *= e.value;
      }
      acc(row, col) += value;

      bool rolled_over = true;
      for (std::size_t s = m; s-- > 0;) {
        if (++pick[s] < factors[s].size()) {
          rolled_over = false;
          break;
        }
        pick[s] = 0;
      }
      if (rolled_over) break;
    }
  }
  return acc;
}

ScalingSeries commutator_scaling(const OperatorPolynomial& poly,
                                 Eigen::Index dim,
                                 const std::vector<std::size_t>& particle_counts,
                                 const ProbeSpec& probe) {
  if (particle_counts.empty()) {
    throw DomainError("scaling sweep needs at least one particle count");
  }
  if (probe.count == 0) {
    throw DomainError("scaling sweep needs at least one probe vector");
  }
  const std::vector<std::size_t> support = poly.support();
  for (std::size_t n : particle_counts) {
    if (n == 0) throw DomainError("particle counts must be positive");
    if (!support.empty() && support.back() > n) {
      throw DomainError(
          "operator support exceeds the collective coordinate's particle "
          "count");
    }
  }

  const SiteMatrices mats = build_site_matrices(dim);
  const Eigen::Index safe_cap = dim - 1 - static_cast<Eigen::Index>(poly.degree());
  if (safe_cap < 0) {
    throw DomainError(
        "site dimension too small to probe below the truncation boundary");
  }

  // [X, P] = (1/N) * sum_{i in support} [x_i, P]: the particle count enters
  // only as the scalar 1/N, so one realization of the N-free sum serves the
  // whole sweep and the 1/N law is exact by construction.
  OperatorPolynomial sum;
  for (std::size_t site : support) {
    sum = sum + commutator_x(site, poly);
  }

  double peak = 0.0;
  if (!sum.is_zero()) {
    const Eigen::MatrixXcd matrix = realize(sum, mats, support);
    const Eigen::Index dims = matrix.rows();
    const std::size_t m = support.size();

    // Probes live on per-site levels <= dim - 1 - degree, where the
    // truncated realization is exact.
    std::vector<Eigen::VectorXcd> probes;
    for (std::size_t q = 0; q < probe.count; ++q) {
      auto rng = make_rng(probe.seed, q);
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dims);
      for (Eigen::Index i = 0; i < dims; ++i) {
        bool safe = true;
        Eigen::Index rest = i;
        for (std::size_t s = 0; s < m; ++s) {
          const Eigen::Index digit = rest % dim;
          rest /= dim;
          if (digit > safe_cap) safe = false;
        }
        if (safe) v(i) = random_complex(rng);
      }
      const double norm = v.norm();
      if (norm == 0.0) throw DegenerateStateError("probe vector vanished");
      probes.push_back(v / norm);
    }

    for (const Eigen::VectorXcd& u : probes) {
      for (const Eigen::VectorXcd& v : probes) {
        peak = std::max(peak, std::abs(u.dot(matrix * v)));
      }
    }
  }

  std::vector<ScalingPoint> points;
  points.reserve(particle_counts.size());
  for (std::size_t n : particle_counts) {
    const double nd = static_cast<double>(n);
    ScalingPoint point;
    point.parameter = nd;
    point.value = peak / nd;
    point.log_value = std::log(peak) - std::log(nd);
    points.push_back(point);
  }

  ScalingSeries series = make_series(std::move(points), FitAxes::loglog);
  series.exact_zero = sum.is_zero();
  return series;
}

}  // namespace supersel
