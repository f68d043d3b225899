#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "fermidq/star.hpp"

namespace fermidq {

/// Coefficient vector of F indexed by monomial bitmask.
inline Eigen::VectorXcd coeff_vector(const Element& f) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(f.algebra()->dimension()));
  for (const auto& [m, c] : f.terms()) v(static_cast<Eigen::Index>(m)) = c;
  return v;
}

inline Element from_coeff_vector(const Algebra& algebra, const Eigen::VectorXcd& v) {
  if (static_cast<std::size_t>(v.size()) != algebra->dimension()) throw AlgebraError("coefficient vector size mismatch");
  Element out(algebra);
  for (Eigen::Index m = 0; m < v.size(); ++m) out.add_term(static_cast<Mask>(m), v(m));
  return out;
}

/// Dense matrix of G -> F*G (Left) or G -> G*F (Right) on the 2^n coefficients.
struct AlgebraOperator {
  Eigen::MatrixXcd matrix;
  Side side = Side::Left;
  Element source;

  [[nodiscard]] Element apply(const Element& g) const {
    return from_coeff_vector(source.algebra(), matrix * coeff_vector(g));
  }
};

inline AlgebraOperator mult_operator(const Element& f, const StarProduct& p, Side side = Side::Left) {
  const auto dim = static_cast<Eigen::Index>(f.algebra()->dimension());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const Element basis = Element::monomial(f.algebra(), static_cast<Mask>(col), 1.0);
    const Element img = side == Side::Left ? star(f, basis, p) : star(basis, f, p);
    for (const auto& [k, c] : img.terms()) m(static_cast<Eigen::Index>(k), col) = c;
  }
  return {std::move(m), side, f};
}

/// Exp(-i H t / scale) = exp(-i t/scale Left(H)) applied to 1.
inline Element star_exponential(const Element& h, double t, double scale, const StarProduct& p) {
  if (scale == 0.0) throw DomainError("star exponential needs a nonzero scale");
  if (t == 0.0) return one(h.algebra());
  const Eigen::MatrixXcd gen = mult_operator(h, p).matrix * Complex(0.0, -t / scale);
  const Eigen::MatrixXcd u = gen.exp();
  return from_coeff_vector(h.algebra(), u.col(0));
}

/// Truncated power series sum_k (-it/scale)^k H^{*k} / k!; cross-check only.
inline Element star_exponential_series(const Element& h, double t, double scale, const StarProduct& p, int terms) {
  Element out = one(h.algebra());
  Element power = one(h.algebra());
  Complex factor = 1.0;
  for (int k = 1; k < terms; ++k) {
    power = star(power, h, p);
    factor *= Complex(0.0, -t / scale) / static_cast<double>(k);
    out += power * factor;
  }
  return out;
}

}  // namespace fermidq
