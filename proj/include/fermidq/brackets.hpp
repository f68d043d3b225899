#pragma once

// Graded Poisson brackets {F, G} = - T_ij (F <-d_i)(->d_j G) on an odd phase
// space, second-class constraint handling and Dirac brackets.

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fermidq/star.hpp"
#include "fermidq/tolerances.hpp"

namespace fermidq {

class BracketTensor {
 public:
  BracketTensor(Algebra algebra, Eigen::MatrixXcd matrix) : algebra_(std::move(algebra)), matrix_(std::move(matrix)) {
    const auto n = static_cast<Eigen::Index>(algebra_->size());
    if (matrix_.rows() != n || matrix_.cols() != n) throw AlgebraError("bracket tensor has wrong shape");
    if ((matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, matrix_.cwiseAbs().maxCoeff())) {
      throw AlgebraError("bracket tensor must be symmetric");
    }
  }

  [[nodiscard]] const Algebra& algebra() const noexcept { return algebra_; }
  [[nodiscard]] const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }

 private:
  Algebra algebra_;
  Eigen::MatrixXcd matrix_;
};

/// Phase space th1..thn, pi1..pin.
inline Algebra phase_space(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("th" + std::to_string(i));
  for (int i = 1; i <= n; ++i) names.push_back("pi" + std::to_string(i));
  return make_algebra(std::move(names));
}

/// [[0, I], [I, 0]] in (theta, pi) blocks.
inline BracketTensor canonical_tensor(const Algebra& space) {
  const int n2 = space->size();
  if (n2 % 2) throw AlgebraError("phase space must have an even number of generators");
  const int n = n2 / 2;
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n2, n2);
  for (int a = 0; a < n; ++a) t(a, n + a) = t(n + a, a) = 1.0;
  return BracketTensor(space, t);
}

/// Canonical tensor plus i*C couplings between (th1,th2) and (th3,th4).
inline BracketTensor nac_tensor(const Algebra& space, double big_c) {
  if (space->size() != 8) throw AlgebraError("NAC tensor needs the 8-generator phase space");
  Eigen::MatrixXcd t = canonical_tensor(space).matrix();
  const Complex ic(0.0, big_c);
  t(0, 1) = t(1, 0) = ic;
  t(2, 3) = t(3, 2) = ic;
  return BracketTensor(space, t);
}

inline Element poisson_bracket(const Element& f, const Element& g, const BracketTensor& t) {
  f.check_same(g);
  if (!same_algebra(f.algebra(), t.algebra())) throw AlgebraError("bracket tensor on another algebra");
  const int n = t.algebra()->size();
  Element out(f.algebra());
  std::vector<Element> right;
  std::vector<Element> left;
  for (int i = 0; i < n; ++i) {
    right.push_back(derivative(f, i, Side::Right));
    left.push_back(derivative(g, i, Side::Left));
  }
  for (int i = 0; i < n; ++i) {
    if (right[static_cast<std::size_t>(i)].is_zero()) continue;
    for (int j = 0; j < n; ++j) {
      const Complex tij = t.matrix()(i, j);
      if (tij == 0.0 || left[static_cast<std::size_t>(j)].is_zero()) continue;
      out -= multiply(right[static_cast<std::size_t>(i)], left[static_cast<std::size_t>(j)]) * tij;
    }
  }
  return out;
}

struct ConstraintSet {
  std::vector<Element> constraints;
  std::vector<std::string> labels;

  ConstraintSet() = default;
  ConstraintSet(std::vector<Element> chis, std::vector<std::string> names)
      : constraints(std::move(chis)), labels(std::move(names)) {
    if (labels.empty()) {
      for (std::size_t a = 0; a < constraints.size(); ++a) labels.push_back("chi" + std::to_string(a + 1));
    }
    if (labels.size() != constraints.size()) throw ConstraintError("one label per constraint");
    for (const auto& chi : constraints) {
      if (chi.is_zero() || chi.parity() != ParityClass::Odd) throw ConstraintError("constraints must be odd");
    }
  }

  [[nodiscard]] std::size_t size() const noexcept { return constraints.size(); }
};

/// chi_a = pi_a + (i/2) th_a on the 2n phase space.
inline ConstraintSet free_fermion_constraints(const Algebra& space) {
  const int n = space->size() / 2;
  std::vector<Element> chis;
  for (int a = 0; a < n; ++a) {
    chis.push_back(generator(space, n + a) + generator(space, a) * Complex(0.0, 0.5));
  }
  return ConstraintSet(std::move(chis), {});
}

using ElementMatrix = std::vector<std::vector<Element>>;

enum class ConstraintClass { SecondClass, FirstClassPresent };

inline const char* to_string(ConstraintClass c) {
  return c == ConstraintClass::SecondClass ? "SecondClass" : "FirstClassPresent";
}

namespace detail {

inline Eigen::MatrixXcd body_matrix(const ElementMatrix& m) {
  const auto l = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXcd b(l, l);
  for (Eigen::Index a = 0; a < l; ++a) {
    for (Eigen::Index c = 0; c < l; ++c) b(a, c) = body(m[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)]);
  }
  return b;
}

inline ElementMatrix element_matmul(const ElementMatrix& x, const ElementMatrix& y, const Algebra& algebra) {
  const std::size_t l = x.size();
  ElementMatrix out(l, std::vector<Element>(l, Element(algebra)));
  for (std::size_t a = 0; a < l; ++a) {
    for (std::size_t b = 0; b < l; ++b) {
      for (std::size_t k = 0; k < l; ++k) out[a][b] += multiply(x[a][k], y[k][b]);
    }
  }
  return out;
}

inline bool body_invertible(const Eigen::MatrixXcd& b, double rank_tol) {
  if (b.size() == 0) return false;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(b);
  lu.setThreshold(rank_tol);
  return lu.rank() == b.rows();
}

}  // namespace detail

/// C_ab = {chi_a, chi_b} together with its inverse. The inverse inverts the
/// scalar body and sums the Neumann series in the nilpotent soul, which
/// terminates in a finite algebra.
class ConstraintMatrix {
 public:
  ConstraintMatrix(const ConstraintSet& s, const BracketTensor& t, const Tolerances& tol = {}) {
    if (s.size() == 0) throw ConstraintError("empty constraint set");
    const Algebra& algebra = t.algebra();
    const std::size_t l = s.size();
    c_.assign(l, std::vector<Element>(l, Element(algebra)));
    for (std::size_t a = 0; a < l; ++a) {
      for (std::size_t b = 0; b < l; ++b) c_[a][b] = poisson_bracket(s.constraints[a], s.constraints[b], t);
    }
    const Eigen::MatrixXcd b = detail::body_matrix(c_);
    second_class_ = detail::body_invertible(b, tol.rank);
    if (!second_class_) return;

    const Eigen::MatrixXcd binv = b.inverse();
    ElementMatrix binv_el(l, std::vector<Element>(l, Element(algebra)));
    ElementMatrix minus_binv_soul(l, std::vector<Element>(l, Element(algebra)));
    for (std::size_t a = 0; a < l; ++a) {
      for (std::size_t c = 0; c < l; ++c) {
        binv_el[a][c] = scalar(algebra, binv(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)));
      }
    }
    ElementMatrix soul = c_;
    for (std::size_t a = 0; a < l; ++a) {
      for (std::size_t c = 0; c < l; ++c) soul[a][c] -= scalar(algebra, body(c_[a][c]));
    }
    minus_binv_soul = detail::element_matmul(binv_el, soul, algebra);
    for (auto& row : minus_binv_soul) {
      for (auto& e : row) e = -e;
    }
    // Cinv = sum_k (-B^-1 N)^k B^-1
    cinv_ = binv_el;
    ElementMatrix term = binv_el;
    for (int k = 1; k <= algebra->size() / 2 + 1; ++k) {
      term = detail::element_matmul(minus_binv_soul, term, algebra);
      bool all_zero = true;
      for (std::size_t a = 0; a < l; ++a) {
        for (std::size_t c = 0; c < l; ++c) {
          cinv_[a][c] += term[a][c];
          all_zero = all_zero && term[a][c].is_zero();
        }
      }
      if (all_zero) break;
    }
  }

  [[nodiscard]] bool second_class() const noexcept { return second_class_; }
  [[nodiscard]] const ElementMatrix& matrix() const noexcept { return c_; }
  [[nodiscard]] const ElementMatrix& inverse() const {
    if (!second_class_) throw ConstraintError("first-class or degenerate constraints");
    return cinv_;
  }
  [[nodiscard]] std::size_t size() const noexcept { return c_.size(); }

 private:
  ElementMatrix c_;
  ElementMatrix cinv_;
  bool second_class_ = false;
};

inline ConstraintMatrix constraint_matrix(const ConstraintSet& s, const BracketTensor& t, const Tolerances& tol = {}) {
  ConstraintMatrix m(s, t, tol);
  if (!m.second_class()) throw ConstraintError("first-class or degenerate constraints");
  return m;
}

inline ConstraintClass classify_constraints(const ConstraintSet& s, const BracketTensor& t, const Tolerances& tol = {}) {
  return ConstraintMatrix(s, t, tol).second_class() ? ConstraintClass::SecondClass : ConstraintClass::FirstClassPresent;
}

/// {F,G}_D = {F,G} - {F,chi_a} Cinv_ab {chi_b,G}
class DiracBracket {
 public:
  DiracBracket(ConstraintSet s, BracketTensor t, const Tolerances& tol = {})
      : set_(std::move(s)), tensor_(std::move(t)), cm_(set_, tensor_, tol) {
    if (!cm_.second_class()) throw ConstraintError("Dirac bracket needs second-class constraints");
  }

  [[nodiscard]] Element operator()(const Element& f, const Element& g) const {
    Element out = poisson_bracket(f, g, tensor_);
    const auto& cinv = cm_.inverse();
    std::vector<Element> f_chi;
    std::vector<Element> chi_g;
    for (const auto& chi : set_.constraints) {
      f_chi.push_back(poisson_bracket(f, chi, tensor_));
      chi_g.push_back(poisson_bracket(chi, g, tensor_));
    }
    for (std::size_t a = 0; a < set_.size(); ++a) {
      if (f_chi[a].is_zero()) continue;
      for (std::size_t b = 0; b < set_.size(); ++b) {
        if (chi_g[b].is_zero() || cinv[a][b].is_zero()) continue;
        out -= multiply(multiply(f_chi[a], cinv[a][b]), chi_g[b]);
      }
    }
    return out;
  }

  [[nodiscard]] const ConstraintSet& constraints() const noexcept { return set_; }
  [[nodiscard]] const BracketTensor& tensor() const noexcept { return tensor_; }
  [[nodiscard]] const ConstraintMatrix& constraint_matrix() const noexcept { return cm_; }

 private:
  ConstraintSet set_;
  BracketTensor tensor_;
  ConstraintMatrix cm_;
};

inline Element dirac_bracket(const Element& f, const Element& g, const ConstraintSet& s, const BracketTensor& t) {
  return DiracBracket(s, t)(f, g);
}

/// Solves each linear constraint for one eliminated generator and returns the
/// substitution images over the surviving generators, suitable for
/// `substitute`. Constraint a must be linear with a nonzero coefficient on
/// eliminated[a] and no other eliminated generator.
inline std::vector<Element> strong_substitution(const ConstraintSet& s, std::span<const int> eliminated,
                                                const Algebra& reduced) {
  if (eliminated.size() != s.size()) throw ConstraintError("one eliminated generator per constraint");
  const Algebra& space = s.constraints.front().algebra();
  Mask elim_mask = 0;
  for (int e : eliminated) elim_mask |= monomial::bit(e);
  const Mask keep = space->full_mask() & ~elim_mask;
  if (reduced->size() != monomial::grade(keep)) throw ConstraintError("reduced algebra size mismatch");

  std::vector<Element> images(static_cast<std::size_t>(space->size()), Element(reduced));
  int next = 0;
  for (int i : monomial::indices(keep)) images[static_cast<std::size_t>(i)] = generator(reduced, next++);
  for (std::size_t a = 0; a < s.size(); ++a) {
    const Element& chi = s.constraints[a];
    const int e = eliminated[a];
    Complex lead = 0.0;
    Element rest(reduced);
    for (const auto& [m, c] : chi.terms()) {
      if (monomial::grade(m) != 1) throw ConstraintError("strong imposition needs linear constraints");
      const int g = std::countr_zero(m);
      if (g == e) {
        lead = c;
      } else if (monomial::contains(elim_mask, g)) {
        throw ConstraintError("constraint couples two eliminated generators");
      } else {
        rest += images[static_cast<std::size_t>(g)] * c;
      }
    }
    if (lead == 0.0) throw ConstraintError("constraint does not contain its eliminated generator");
    images[static_cast<std::size_t>(e)] = rest * (-1.0 / lead);
  }
  return images;
}

/// D_ij = {th_i, th_j}_D over the surviving generators, rescaled so that the
/// diagonal equals hbar. The Dirac matrix must have a uniform nonzero diagonal
/// and become real after rescaling.
inline SymmetricForm quantization_form(const DiracBracket& db, std::span<const int> surviving, const Algebra& reduced,
                                       double hbar, Eigen::MatrixXcd* dirac_matrix = nullptr) {
  const auto n = static_cast<Eigen::Index>(surviving.size());
  if (reduced->size() != static_cast<int>(n)) throw ConstraintError("reduced algebra size mismatch");
  const Algebra& space = db.tensor().algebra();
  Eigen::MatrixXcd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Element br = db(generator(space, surviving[static_cast<std::size_t>(i)]),
                            generator(space, surviving[static_cast<std::size_t>(j)]));
      if (!is_scalar(br)) throw ConstraintError("Dirac bracket of coordinates is not a constant");
      d(i, j) = body(br);
    }
  }
  if (dirac_matrix) *dirac_matrix = d;
  const Complex d0 = d(0, 0);
  const double scale = d.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(d(i, i)) <= 1e-12 * std::max(1.0, scale)) throw ConstraintError("zero diagonal in Dirac matrix");
    if (std::abs(d(i, i) - d0) > 1e-10 * scale) throw ConstraintError("Dirac matrix diagonal is not uniform");
  }
  const Eigen::MatrixXcd a = d * (hbar / d0);
  if (a.imag().cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, hbar)) {
    throw ConstraintError("rescaled Dirac matrix is not real");
  }
  return SymmetricForm(reduced, a.real());
}

/// dF/dt = {F, H} for whichever bracket is supplied.
template <class Bracket>
Element classical_time_derivative(const Element& f, const Element& h, Bracket&& bracket) {
  return std::forward<Bracket>(bracket)(f, h);
}

}  // namespace fermidq
