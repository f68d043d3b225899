#pragma once

// Star-genvalue problems H * W = E W = W * H.
//
// Left multiplication is a faithful representation of the star algebra, so
// a Wigner projector is W_E = P_E(Left(H)) 1, where P_E is the Lagrange
// interpolation polynomial that is 1 on the cluster E and 0 on every other
// eigenvalue cluster of Left(H). For a commuting family the per-operator
// projectors are multiplied and empty joint clusters are dropped.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "fermidq/algebra_operator.hpp"
#include "fermidq/tolerances.hpp"

namespace fermidq {

struct SpectralPair {
  /// One eigenvalue per element of the commuting family.
  std::vector<Complex> eigenvalues;
  /// Sum of the family eigenvalues (the energy when the family splits H).
  Complex total;
  Element projector;
  std::string label;
};

struct SpectralResolution {
  std::vector<SpectralPair> pairs;

  [[nodiscard]] std::size_t size() const noexcept { return pairs.size(); }
  [[nodiscard]] const SpectralPair& at(const std::string& label) const {
    for (const auto& p : pairs) {
      if (p.label == label) return p;
    }
    throw SolverError("no projector labelled '" + label + "'");
  }
};

namespace detail {

/// Eigenvalue clusters of a dense matrix, sorted by descending real part.
inline std::vector<Complex> eigenvalue_clusters(const Eigen::MatrixXcd& m, double rel_tol) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
  if (solver.info() != Eigen::Success) throw SolverError("eigenvalue iteration did not converge");
  const Eigen::VectorXcd ev = solver.eigenvalues();
  double radius = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) radius = std::max(radius, std::abs(ev(i)));
  const double tol = rel_tol * std::max(1.0, radius);

  // single-linkage clustering
  const auto n = static_cast<std::size_t>(ev.size());
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(ev(static_cast<Eigen::Index>(i)) - ev(static_cast<Eigen::Index>(j))) <= tol) {
        parent[find(i)] = find(j);
      }
    }
  }
  std::vector<Complex> sum(n, 0.0);
  std::vector<int> count(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    sum[find(i)] += ev(static_cast<Eigen::Index>(i));
    ++count[find(i)];
  }
  std::vector<Complex> centers;
  for (std::size_t i = 0; i < n; ++i) {
    if (count[i] > 0) centers.push_back(sum[i] / static_cast<double>(count[i]));
  }
  std::sort(centers.begin(), centers.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
  });
  return centers;
}

/// '+', '-' or '0' per cluster when unambiguous, otherwise e0, e1, ...
inline std::vector<std::string> cluster_labels(const std::vector<Complex>& centers, double tol) {
  std::vector<std::string> labels;
  for (const auto& c : centers) labels.emplace_back(1, c.real() > tol ? '+' : (c.real() < -tol ? '-' : '0'));
  std::vector<std::string> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = "e" + std::to_string(i);
  }
  return labels;
}

}  // namespace detail

/// W <- 3 W*W - 2 W*W*W
inline Element polish_idempotent(const Element& w, const StarProduct& p) {
  const Element w2 = star(w, w, p);
  return w2 * 3.0 - star(w2, w, p) * 2.0;
}

inline SpectralResolution star_genvalue_solve(std::span<const Element> hs, const StarProduct& p,
                                              const Tolerances& tol = {}) {
  if (hs.empty()) throw SolverError("empty commuting family");
  const Algebra& algebra = p.algebra();
  for (const auto& h : hs) {
    if (!same_algebra(h.algebra(), algebra)) throw AlgebraError("family element on another algebra");
  }
  for (std::size_t a = 0; a < hs.size(); ++a) {
    for (std::size_t b = a + 1; b < hs.size(); ++b) {
      const double scale = std::max({1.0, max_abs(hs[a]) * max_abs(hs[b])});
      if (max_abs(star_bracket(hs[a], hs[b], p, BracketMode::Comm)) > tol.commutator * scale) {
        throw SolverError("family elements do not star-commute");
      }
    }
  }

  std::vector<Eigen::MatrixXcd> ops;
  std::vector<std::vector<Complex>> clusters;
  std::vector<std::vector<std::string>> labels;
  for (const auto& h : hs) {
    ops.push_back(mult_operator(h, p).matrix);
    clusters.push_back(detail::eigenvalue_clusters(ops.back(), tol.cluster));
    double radius = 0.0;
    for (const auto& c : clusters.back()) radius = std::max(radius, std::abs(c));
    labels.push_back(detail::cluster_labels(clusters.back(), tol.cluster * std::max(1.0, radius)));
  }

  const Eigen::VectorXcd unit = coeff_vector(one(algebra));
  SpectralResolution out;
  std::vector<std::size_t> pick(hs.size(), 0);
  while (true) {
    Eigen::VectorXcd w = unit;
    for (std::size_t k = 0; k < hs.size(); ++k) {
      const Complex lambda = clusters[k][pick[k]];
      for (std::size_t o = 0; o < clusters[k].size(); ++o) {
        if (o == pick[k]) continue;
        const Complex mu = clusters[k][o];
        w = (ops[k] * w - mu * w) / (lambda - mu);
      }
    }
    if (w.cwiseAbs().maxCoeff() > std::sqrt(tol.idempotency)) {
      SpectralPair pair;
      pair.total = 0.0;
      for (std::size_t k = 0; k < hs.size(); ++k) {
        pair.eigenvalues.push_back(clusters[k][pick[k]]);
        pair.total += clusters[k][pick[k]];
        pair.label += labels[k][pick[k]];
      }
      pair.projector = polish_idempotent(from_coeff_vector(algebra, w), p);
      const double defect = distance(star(pair.projector, pair.projector, p), pair.projector);
      if (defect > tol.idempotency * std::max(1.0, max_abs(pair.projector))) {
        throw SolverError("projector '" + pair.label + "' not idempotent (defect " + std::to_string(defect) + ")");
      }
      out.pairs.push_back(std::move(pair));
    }
    // odometer over cluster choices
    std::size_t k = 0;
    while (k < hs.size() && ++pick[k] == clusters[k].size()) pick[k++] = 0;
    if (k == hs.size()) break;
  }

  Element sum(algebra);
  for (const auto& pr : out.pairs) sum += pr.projector;
  if (distance(sum, one(algebra)) > tol.idempotency) throw SolverError("projectors are not complete");
  return out;
}

inline SpectralResolution star_genvalue_solve(std::initializer_list<Element> hs, const StarProduct& p,
                                              const Tolerances& tol = {}) {
  std::vector<Element> v(hs);
  return star_genvalue_solve(std::span<const Element>(v), p, tol);
}

struct Decomposition {
  SpectralResolution resolution;
  /// max coefficient of H - sum_E E W_E
  double residual = 0.0;
};

inline Decomposition spectral_decompose(const Element& h, const StarProduct& p, const Tolerances& tol = {}) {
  if (h.parity() == ParityClass::Odd || h.parity() == ParityClass::Mixed) {
    throw DomainError("spectral decomposition needs an even element");
  }
  Decomposition d{star_genvalue_solve({h}, p, tol), 0.0};
  Element rebuilt(h.algebra());
  for (const auto& pr : d.resolution.pairs) rebuilt += pr.projector * pr.total;
  d.residual = distance(rebuilt, h);
  return d;
}

/// Residuals max|Exp(-iHt/scale) - sum_E W_E e^{-iEt/scale}| at each time.
inline std::vector<double> fourier_dirichlet(const Element& h, double scale, std::span<const double> times,
                                             const StarProduct& p, const Tolerances& tol = {}) {
  const Decomposition d = spectral_decompose(h, p, tol);
  std::vector<double> residuals;
  for (double t : times) {
    Element expansion(h.algebra());
    for (const auto& pr : d.resolution.pairs) {
      expansion += pr.projector * std::exp(Complex(0.0, -t / scale) * pr.total);
    }
    residuals.push_back(distance(star_exponential(h, t, scale, p), expansion));
  }
  return residuals;
}

}  // namespace fermidq
