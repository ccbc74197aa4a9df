// Deterministic random inputs for property tests, plus adapters that
// re-express library objects in the naive dense representation of
// dense_oracle.hpp so the two can be compared.
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dense_oracle.hpp"
#include "supersel/branch.hpp"
#include "supersel/operator_algebra.hpp"
#include "supersel/rng.hpp"

namespace testgen {

using supersel::Branch;
using supersel::BranchState;
using supersel::Complex;
using supersel::OperatorPolynomial;
using supersel::OperatorTerm;
using supersel::SiteFactor;
using supersel::SiteState;

// --- random library objects ---------------------------------------------

inline SiteState random_site(std::mt19937_64& rng, Eigen::Index dim) {
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = supersel::random_complex(rng);
  return SiteState::normalized(std::move(v));
}

inline Complex random_amplitude(std::mt19937_64& rng) {
  Complex c = supersel::random_complex(rng);
  while (c == Complex{}) c = supersel::random_complex(rng);
  return c;
}

inline BranchState random_state(std::mt19937_64& rng, std::size_t branches,
                                std::size_t sites, Eigen::Index dim) {
  std::vector<Branch> out;
  for (std::size_t k = 0; k < branches; ++k) {
    Branch b;
    b.amplitude = random_amplitude(rng);
    for (std::size_t j = 0; j < sites; ++j) b.sites.push_back(random_site(rng, dim));
    out.push_back(std::move(b));
  }
  return BranchState(std::move(out));
}

// --- random polynomials -------------------------------------------------

// A polynomial in the series shape the counting bound addresses: at most one
// momentum-carrying term per (site, momentum-degree) pair, each term's
// momentum concentrated on that single site, plus optional pure-position
// terms. Guaranteed to contain at least one momentum term. Total degree per
// term stays <= 6 so a dim-16 truncation keeps a roomy safe subspace.
inline OperatorPolynomial random_series_poly(std::mt19937_64& rng,
                                             std::size_t max_sites = 3,
                                             int max_momentum = 4) {
  std::uniform_int_distribution<std::size_t> site_count_dist(1, max_sites);
  std::uniform_int_distribution<int> degree_dist(1, max_momentum);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> xexp_dist(0, 2);

  // Distinct 1-based sites drawn from a window barely wider than needed.
  std::vector<std::size_t> sites;
  {
    const std::size_t count = site_count_dist(rng);
    std::vector<std::size_t> pool{1, 2, 3, 4};
    std::shuffle(pool.begin(), pool.end(), rng);
    sites.assign(pool.begin(), pool.begin() + count);
    std::sort(sites.begin(), sites.end());
  }
  const int n = degree_dist(rng);

  auto random_coeff = [&rng] {
    Complex c = supersel::random_complex(rng);
    while (std::abs(c) < 0.2) c = supersel::random_complex(rng);
    return c / std::abs(c) * 0.5;  // unit direction, modest magnitude
  };

  std::vector<OperatorTerm> terms;
  for (std::size_t s : sites) {
    for (int k = 1; k <= n; ++k) {
      if (unit(rng) > 0.55) continue;
      OperatorTerm term;
      term.coefficient = random_coeff();
      int budget = 6 - k;
      for (std::size_t s2 : sites) {
        const int a = std::min(xexp_dist(rng), budget);
        budget -= a;
        if (s2 == s) {
          term.factors.push_back({s2, a, k});
        } else if (a > 0) {
          term.factors.push_back({s2, a, 0});
        }
      }
      terms.push_back(std::move(term));
    }
    // Occasional pure-position term: widens the support bound side only.
    if (unit(rng) < 0.3) {
      OperatorTerm term;
      term.coefficient = random_coeff();
      term.factors.push_back({s, 1 + xexp_dist(rng) % 2, 0});
      terms.push_back(std::move(term));
    }
  }
  bool any_momentum = false;
  for (const auto& t : terms)
    for (const auto& f : t.factors) any_momentum |= f.p_exp > 0;
  if (!any_momentum) {
    OperatorTerm term;
    term.coefficient = random_coeff();
    term.factors.push_back({sites.front(), 0, 1});
    terms.push_back(std::move(term));
  }
  return OperatorPolynomial::from_terms(std::move(terms));
}

// Free-form polynomial with no shape guarantees; used for algebra-soundness
// checks against the dense oracle.
inline OperatorPolynomial random_free_poly(std::mt19937_64& rng,
                                           std::size_t max_site = 2,
                                           int max_x = 2, int max_p = 2,
                                           std::size_t max_terms = 4) {
  std::uniform_int_distribution<std::size_t> term_count_dist(1, max_terms);
  std::uniform_int_distribution<int> xdist(0, max_x);
  std::uniform_int_distribution<int> pdist(0, max_p);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<OperatorTerm> terms;
  const std::size_t count = term_count_dist(rng);
  for (std::size_t t = 0; t < count; ++t) {
    OperatorTerm term;
    term.coefficient = supersel::random_complex(rng) * 0.5;
    for (std::size_t s = 1; s <= max_site; ++s) {
      if (unit(rng) < 0.35) continue;
      const int a = xdist(rng);
      const int b = pdist(rng);
      if (a == 0 && b == 0) continue;
      term.factors.push_back({s, a, b});
    }
    terms.push_back(std::move(term));  // may be a constant: also legal input
  }
  return OperatorPolynomial::from_terms(std::move(terms));
}

// --- grammar-random expression strings ----------------------------------

inline std::string random_expression(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> term_count_dist(1, 4);
  std::uniform_int_distribution<int> factor_count_dist(0, 3);
  std::uniform_int_distribution<int> site_dist(1, 12);
  std::uniform_int_distribution<int> exp_dist(1, 4);
  std::uniform_int_distribution<int> int_dist(0, 9);

  std::string out;
  auto maybe_space = [&] {
    if (unit(rng) < 0.3) out += ' ';
  };
  auto emit_decimal = [&] {
    out += std::to_string(int_dist(rng));
    if (unit(rng) < 0.5) {
      out += '.';
      out += std::to_string(int_dist(rng));
      if (unit(rng) < 0.4) out += std::to_string(int_dist(rng));
    }
  };
  auto emit_coefficient = [&] {
    const double which = unit(rng);
    if (which < 0.45) {
      emit_decimal();
    } else if (which < 0.7) {
      emit_decimal();
      out += 'i';
    } else {
      out += '(';
      maybe_space();
      if (unit(rng) < 0.3) out += '-';
      emit_decimal();
      maybe_space();
      out += unit(rng) < 0.5 ? '+' : '-';
      maybe_space();
      emit_decimal();
      out += 'i';
      maybe_space();
      out += ')';
    }
  };
  auto emit_factor = [&] {
    out += unit(rng) < 0.5 ? 'x' : 'p';
    out += std::to_string(site_dist(rng));
    if (unit(rng) < 0.5) {
      out += '^';
      out += std::to_string(exp_dist(rng));
    }
  };

  const int terms = term_count_dist(rng);
  for (int t = 0; t < terms; ++t) {
    if (t == 0) {
      if (unit(rng) < 0.2) {
        out += unit(rng) < 0.5 ? '+' : '-';
        maybe_space();
      }
    } else {
      maybe_space();
      out += unit(rng) < 0.5 ? '+' : '-';
      maybe_space();
    }
    int factors = factor_count_dist(rng);
    const bool with_coefficient = factors == 0 || unit(rng) < 0.6;
    if (with_coefficient) emit_coefficient();
    for (int f = 0; f < factors; ++f) {
      if (f > 0 || with_coefficient) {
        maybe_space();
        if (unit(rng) < 0.5) {
          out += '*';
          maybe_space();
        }
      }
      emit_factor();
    }
  }
  return out;
}

// --- library -> dense adapters ------------------------------------------

inline oracle::Vec to_vec(const SiteState& s) {
  oracle::Vec v(static_cast<std::size_t>(s.dim()));
  for (Eigen::Index i = 0; i < s.dim(); ++i)
    v[static_cast<std::size_t>(i)] = s.amplitudes()(i);
  return v;
}

// Full product vector of a branch, site 0 slowest.
inline oracle::Vec branch_vec(const Branch& b) {
  oracle::Vec v{1.0};
  for (const auto& site : b.sites) v = oracle::kron_vec(v, to_vec(site));
  return v;
}

// Dense normalized density matrix of a whole branch state.
inline oracle::Mat dense_density(const BranchState& state) {
  std::size_t dim = 1;
  for (Eigen::Index d : state.site_dims()) dim *= static_cast<std::size_t>(d);
  oracle::Mat rho(dim, dim);
  for (const auto& bk : state.branches()) {
    const oracle::Vec vk = branch_vec(bk);
    for (const auto& bl : state.branches()) {
      const oracle::Vec vl = branch_vec(bl);
      const oracle::C w = bk.amplitude * std::conj(bl.amplitude);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
          rho(i, j) += w * vk[i] * std::conj(vl[j]);
    }
  }
  oracle::C trace{};
  for (std::size_t i = 0; i < dim; ++i) trace += rho(i, i);
  for (auto& v : rho.a) v /= trace.real();
  return rho;
}

// Dense realization of a polynomial over `support` (ascending, slowest
// first), built purely from oracle matrices.
inline oracle::Mat dense_realize(const OperatorPolynomial& poly,
                                 const std::vector<std::size_t>& support,
                                 std::size_t dim) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < support.size(); ++i) total *= dim;
  oracle::Mat out(total, total);
  // Per term: enumerate products of nonzero per-site matrix entries and
  // scatter them at the chained Kronecker index (support order, slowest
  // axis first), exactly expanding kron(kron(f_1, f_2), ...).
  struct Entry {
    std::size_t row;
    std::size_t col;
    oracle::C value;
  };
  for (const auto& term : poly.terms()) {
    std::vector<Entry> partial{{0, 0, term.coefficient}};
    for (std::size_t site : support) {
      int a = 0;
      int b = 0;
      for (const auto& f : term.factors) {
        if (f.site == site) {
          a = f.x_exp;
          b = f.p_exp;
        }
      }
      const oracle::Mat factor = oracle::xp_power(dim, a, b);
      std::vector<Entry> expanded;
      expanded.reserve(partial.size() * factor.rows);
      for (const Entry& e : partial) {
        for (std::size_t i = 0; i < factor.rows; ++i) {
          for (std::size_t j = 0; j < factor.cols; ++j) {
            const oracle::C v = factor(i, j);
            if (v == oracle::C{}) continue;
            expanded.push_back({e.row * factor.rows + i,
                                e.col * factor.cols + j, e.value * v});
          }
        }
      }
      partial = std::move(expanded);
    }
    for (const Entry& e : partial) out(e.row, e.col) += e.value;
  }
  return out;
}

// Largest |a - b| over entries whose row and column digits all stay at or
// below `level_cap` (the truncation-safe corner of the matrix).
inline double max_safe_diff(const oracle::Mat& a, const oracle::Mat& b,
                            const std::vector<std::size_t>& dims,
                            std::size_t level_cap) {
  const auto strides = oracle::strides_of(dims);
  auto safe = [&](std::size_t flat) {
    for (std::size_t s = 0; s < dims.size(); ++s) {
      if ((flat / strides[s]) % dims[s] > level_cap) return false;
    }
    return true;
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i) {
    if (!safe(i)) continue;
    for (std::size_t j = 0; j < a.cols; ++j) {
      if (!safe(j)) continue;
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    }
  }
  return worst;
}

// Eigen adapter for comparing library matrices against oracle ones.
inline oracle::Mat from_eigen(const Eigen::MatrixXcd& m) {
  oracle::Mat out(static_cast<std::size_t>(m.rows()),
                  static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
  return out;
}

}  // namespace testgen
