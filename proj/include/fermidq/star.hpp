#pragma once

// Fermionic Moyal products F * G = F exp( 1/2 <-d_i A_ij ->d_j ) G for a
// constant real symmetric form A. Because every derivative is nilpotent the
// exponential is a finite sum of at most n pair contractions, so the
// product is exact.

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fermidq/grassmann.hpp"

namespace fermidq {

class SymmetricForm {
 public:
  SymmetricForm(Algebra algebra, const Eigen::MatrixXd& matrix, double symmetry_tol = 1e-12)
      : algebra_(std::move(algebra)) {
    const auto n = static_cast<Eigen::Index>(algebra_->size());
    if (matrix.rows() != n || matrix.cols() != n) {
      throw AlgebraError("form must be " + std::to_string(n) + "x" + std::to_string(n));
    }
    const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
    if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > symmetry_tol * scale) {
      throw AlgebraError("form is not symmetric");
    }
    // Upper triangle is authoritative.
    matrix_ = matrix.triangularView<Eigen::Upper>();
    matrix_.triangularView<Eigen::StrictlyLower>() = matrix_.transpose().triangularView<Eigen::StrictlyLower>();
  }

  [[nodiscard]] const Algebra& algebra() const noexcept { return algebra_; }
  [[nodiscard]] const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  [[nodiscard]] double operator()(int i, int j) const { return matrix_(i, j); }
  [[nodiscard]] int size() const noexcept { return algebra_->size(); }

  /// Form on the sub-algebra spanned by the generators in `keep`.
  [[nodiscard]] SymmetricForm restricted(Mask keep, const Algebra& target) const {
    const auto idx = monomial::indices(keep);
    Eigen::MatrixXd sub(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = 0; b < idx.size(); ++b) {
        sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = matrix_(idx[a], idx[b]);
      }
    }
    return SymmetricForm(target, sub);
  }

  [[nodiscard]] SymmetricForm scaled(double s) const { return SymmetricForm(algebra_, matrix_ * s); }

 private:
  Algebra algebra_;
  Eigen::MatrixXd matrix_;
};

/// hbar on the diagonal, c in the (1,2) slots and d in the (3,4) slots of a
/// four-generator algebra.
inline SymmetricForm nac_form(const Algebra& algebra, double hbar, double c, double d) {
  if (algebra->size() != 4) throw AlgebraError("NAC form needs exactly four generators");
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(4, 4) * hbar;
  a(0, 1) = a(1, 0) = c;
  a(2, 3) = a(3, 2) = d;
  return SymmetricForm(algebra, a);
}

class StarProduct {
 public:
  explicit StarProduct(SymmetricForm form) : form_(std::move(form)) {}

  [[nodiscard]] const SymmetricForm& form() const noexcept { return form_; }
  [[nodiscard]] const Algebra& algebra() const noexcept { return form_.algebra(); }
  /// The exponential series stops after this many contractions.
  [[nodiscard]] int max_order() const noexcept { return form_.size(); }

  /// theta_a * theta_b expanded in monomials.
  [[nodiscard]] std::vector<std::pair<Mask, double>> monomial_product(Mask a, Mask b) const {
    std::map<Mask, double> acc;
    std::map<std::pair<Mask, Mask>, double> level{{{a, b}, 1.0}};
    for (int k = 0; !level.empty(); ++k) {
      std::map<std::pair<Mask, Mask>, double> next;
      for (const auto& [key, w] : level) {
        const auto [fa, gb] = key;
        if (const int s = monomial::merge_sign(fa, gb)) acc[fa | gb] += w * s;
        for (int i : monomial::indices(fa)) {
          // theta_i moved to the right end of the left factor
          const double si = (monomial::following(fa, i) & 1) ? -1.0 : 1.0;
          for (int j : monomial::indices(gb)) {
            const double aij = form_(i, j);
            if (aij == 0.0) continue;
            const double sj = (monomial::preceding(gb, j) & 1) ? -1.0 : 1.0;
            next[{fa & ~monomial::bit(i), gb & ~monomial::bit(j)}] += w * 0.5 * aij * si * sj / (k + 1);
          }
        }
      }
      level = std::move(next);
    }
    std::vector<std::pair<Mask, double>> out;
    for (const auto& [m, c] : acc) {
      if (c != 0.0) out.emplace_back(m, c);
    }
    return out;
  }

 private:
  SymmetricForm form_;
};

inline StarProduct build_star_product(const SymmetricForm& form) { return StarProduct(form); }

inline Element star(const Element& f, const Element& g, const StarProduct& p) {
  f.check_same(g);
  if (!same_algebra(f.algebra(), p.algebra())) throw AlgebraError("star product defined on another algebra");
  Element out(f.algebra());
  for (const auto& [a, ca] : f.terms()) {
    for (const auto& [b, cb] : g.terms()) {
      for (const auto& [m, w] : p.monomial_product(a, b)) out.add_term(m, ca * cb * w);
    }
  }
  return out;
}

enum class BracketMode { Anti, Comm };

/// F*G + G*F (Anti) or F*G - G*F (Comm).
inline Element star_bracket(const Element& f, const Element& g, const StarProduct& p,
                            BracketMode mode = BracketMode::Anti) {
  return mode == BracketMode::Anti ? star(f, g, p) + star(g, f, p) : star(f, g, p) - star(g, f, p);
}

inline Element star_power(const Element& f, unsigned k, const StarProduct& p) {
  Element out = one(f.algebra());
  for (unsigned i = 0; i < k; ++i) out = star(out, f, p);
  return out;
}

}  // namespace fermidq
