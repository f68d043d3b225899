#pragma once

// Seeded random elements for property checks.

#include <random>

#include "fermidq/grassmann.hpp"

namespace fermidq {

/// Sum of up to `terms` random monomials of grade <= max_grade with
/// coefficients uniform in the unit square. parity < 0 allows both parities.
inline Element random_element(const Algebra& algebra, std::mt19937_64& rng, int terms = 6, int max_grade = 4,
                              int parity = -1) {
  std::uniform_int_distribution<Mask> pick(0, algebra->full_mask());
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  Element out(algebra);
  int placed = 0;
  for (int guard = 0; placed < terms && guard < 1000 * terms; ++guard) {
    const Mask m = pick(rng);
    if (monomial::grade(m) > max_grade) continue;
    if (parity >= 0 && monomial::parity(m) != parity) continue;
    out.add_term(m, Complex(coeff(rng), coeff(rng)));
    ++placed;
  }
  return out;
}

/// Dense random element: every monomial gets a coefficient.
inline Element random_dense_element(const Algebra& algebra, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  Element out(algebra);
  for (Mask m = 0; m <= algebra->full_mask(); ++m) out.add_term(m, Complex(coeff(rng), coeff(rng)));
  return out;
}

}  // namespace fermidq
