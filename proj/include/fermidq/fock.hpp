#pragma once

// Operator-side cross-checks: holomorphic variables eta = (th_a + i th_b)/sqrt(2 hbar),
// Weyl (antisymmetrised) quantisation onto Jordan-Wigner creation and
// annihilation matrices, the literal fermionic Wigner-kernel integral, and a
// Clifford matrix representation of a star product with its inverse symbol map.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "fermidq/star.hpp"

namespace fermidq {

template <>
struct CoefficientTraits<Eigen::MatrixXcd> {
  static double magnitude(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
};

/// Grassmann element with operator-valued coefficients; Grassmann factors
/// sit to the left of the operator.
using SuperElement = BasicElement<Eigen::MatrixXcd>;

struct HolomorphicPairing {
  std::vector<std::pair<int, int>> pairs;

  [[nodiscard]] int modes() const noexcept { return static_cast<int>(pairs.size()); }

  void validate(const Algebra& algebra) const {
    Mask used = 0;
    for (auto [a, b] : pairs) {
      if (a < 0 || b < 0 || a >= algebra->size() || b >= algebra->size() || a == b) {
        throw AlgebraError("invalid holomorphic pair");
      }
      const Mask m = monomial::bit(a) | monomial::bit(b);
      if (used & m) throw AlgebraError("holomorphic pairs must be disjoint");
      used |= m;
    }
  }
};

/// eta1, etabar1, eta2, etabar2, ...; generator 2k is eta_k, 2k+1 is eta_k^*.
inline Algebra holomorphic_algebra(int modes) {
  std::vector<std::string> names;
  for (int k = 1; k <= modes; ++k) {
    names.push_back("eta" + std::to_string(k));
    names.push_back("etabar" + std::to_string(k));
  }
  return make_algebra(std::move(names));
}

inline Element holomorphic_transform(const Element& f, const HolomorphicPairing& pairing, double hbar,
                                     const Algebra& target) {
  pairing.validate(f.algebra());
  if (target->size() != 2 * pairing.modes()) throw AlgebraError("holomorphic algebra size mismatch");
  const Algebra& source = f.algebra();
  Mask paired = 0;
  std::vector<Element> images(static_cast<std::size_t>(source->size()), Element(target));
  const double s = std::sqrt(hbar / 2.0);
  for (int k = 0; k < pairing.modes(); ++k) {
    const auto [a, b] = pairing.pairs[static_cast<std::size_t>(k)];
    paired |= monomial::bit(a) | monomial::bit(b);
    const Element eta = generator(target, 2 * k);
    const Element etabar = generator(target, 2 * k + 1);
    images[static_cast<std::size_t>(a)] = (eta + etabar) * s;
    images[static_cast<std::size_t>(b)] = (eta - etabar) * Complex(0.0, -s);
  }
  for (const auto& [m, c] : f.terms()) {
    if (m & ~paired) throw AlgebraError("element depends on an unpaired generator");
  }
  return substitute(f, target, images);
}

inline Element holomorphic_transform(const Element& f, const HolomorphicPairing& pairing, double hbar) {
  return holomorphic_transform(f, pairing, hbar, holomorphic_algebra(pairing.modes()));
}

/// Inverse map back onto `source`, using eta = (th_a + i th_b)/sqrt(2 hbar).
inline Element inverse_holomorphic_transform(const Element& g, const HolomorphicPairing& pairing, double hbar,
                                             const Algebra& source) {
  pairing.validate(source);
  std::vector<Element> images;
  const double s = 1.0 / std::sqrt(2.0 * hbar);
  for (auto [a, b] : pairing.pairs) {
    const Element ta = generator(source, a);
    const Element tb = generator(source, b);
    images.push_back((ta + tb * Complex(0.0, 1.0)) * s);
    images.push_back((ta - tb * Complex(0.0, 1.0)) * s);
  }
  return substitute(g, source, images);
}

// ---------------------------------------------------------------------------
// Fock space
// ---------------------------------------------------------------------------

namespace fock {

inline Eigen::MatrixXcd identity(int modes) {
  const auto d = Eigen::Index{1} << modes;
  return Eigen::MatrixXcd::Identity(d, d);
}

/// Single-mode a = |0><1| in the basis (|0>, |1>).
inline Eigen::MatrixXcd lowering() {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 1) = 1.0;
  return a;
}

inline Eigen::MatrixXcd z_string() {
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return z;
}

/// Z x ... x Z x (single) x I x ... x I with `single` on `mode`.
inline Eigen::MatrixXcd embed(const Eigen::MatrixXcd& single, int mode, int modes) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int k = 0; k < modes; ++k) {
    const Eigen::MatrixXcd f = k < mode ? z_string() : (k == mode ? single : Eigen::MatrixXcd::Identity(2, 2));
    out = Eigen::kroneckerProduct(out, f).eval();
  }
  return out;
}

inline Eigen::MatrixXcd annihilator(int mode, int modes) { return embed(lowering(), mode, modes); }
inline Eigen::MatrixXcd creator(int mode, int modes) { return annihilator(mode, modes).adjoint(); }

/// (-1)^N
inline Eigen::MatrixXcd parity_operator(int modes) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int k = 0; k < modes; ++k) out = Eigen::kroneckerProduct(out, z_string()).eval();
  return out;
}

/// (1/r!) sum_sigma sgn(sigma) M_sigma(1) ... M_sigma(r), via the first-factor expansion.
inline Eigen::MatrixXcd antisymmetrized(const std::vector<Eigen::MatrixXcd>& factors, Eigen::Index dim) {
  const std::size_t r = factors.size();
  std::unordered_map<Mask, Eigen::MatrixXcd> memo;
  std::function<Eigen::MatrixXcd(Mask)> rec = [&](Mask set) -> Eigen::MatrixXcd {
    if (set == 0) return Eigen::MatrixXcd::Identity(dim, dim);
    if (auto it = memo.find(set); it != memo.end()) return it->second;
    const auto idx = monomial::indices(set);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const double sign = (k & 1U) ? -1.0 : 1.0;
      acc += sign * factors[static_cast<std::size_t>(idx[k])] * rec(set & ~monomial::bit(idx[k]));
    }
    acc /= static_cast<double>(idx.size());
    memo.emplace(set, acc);
    return acc;
  };
  return rec(static_cast<Mask>((Mask{1} << r) - 1));
}

}  // namespace fock

/// Weyl map: each monomial in (eta_k, eta_k^*) goes to the antisymmetrised
/// product of the matching a_k, a_k^dagger.
inline Eigen::MatrixXcd weyl_quantize(const Element& f) {
  const int gens = f.algebra()->size();
  if (gens % 2) throw AlgebraError("holomorphic algebra needs (eta, etabar) pairs");
  const int modes = gens / 2;
  const Eigen::Index dim = Eigen::Index{1} << modes;
  std::vector<Eigen::MatrixXcd> ops;
  for (int g = 0; g < gens; ++g) ops.push_back(g % 2 == 0 ? fock::annihilator(g / 2, modes) : fock::creator(g / 2, modes));
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [m, c] : f.terms()) {
    std::vector<Eigen::MatrixXcd> factors;
    for (int g : monomial::indices(m)) factors.push_back(ops[static_cast<std::size_t>(g)]);
    out += c * fock::antisymmetrized(factors, dim);
  }
  return out;
}

/// Graded product: moving an odd operator right past theta_n costs (-1)^|n|.
inline SuperElement super_multiply(const SuperElement& x, const SuperElement& y, const Eigen::MatrixXcd& parity) {
  x.check_same(y);
  SuperElement out(x.algebra());
  for (const auto& [a, ma] : x.terms()) {
    const Eigen::MatrixXcd pmp = parity * ma * parity;
    const Eigen::MatrixXcd even = (ma + pmp) / 2.0;
    const Eigen::MatrixXcd odd = (ma - pmp) / 2.0;
    for (const auto& [b, mb] : y.terms()) {
      const int s = monomial::merge_sign(a, b);
      if (s == 0) continue;
      const Eigen::MatrixXcd moved = monomial::parity(b) ? Eigen::MatrixXcd(even - odd) : ma;
      out.add_term(a | b, (moved * mb) * static_cast<double>(s));
    }
  }
  return out;
}

/// Kernel 1/2 - (a^dagger - eta^*)(a - eta) for mode k of `modes`, with
/// odd operators anticommuting with Grassmann generators.
inline SuperElement wigner_kernel(int mode, int modes, const Algebra& algebra) {
  const Eigen::MatrixXcd a = fock::annihilator(mode, modes);
  const Eigen::MatrixXcd ad = fock::creator(mode, modes);
  const Eigen::MatrixXcd id = fock::identity(modes);
  const Mask eta = monomial::bit(2 * mode);
  const Mask etabar = monomial::bit(2 * mode + 1);
  SuperElement k(algebra);
  k.add_term(0, 0.5 * id - ad * a);
  k.add_term(eta, -ad);          // + a^dagger eta = - eta a^dagger
  k.add_term(etabar, a);         // + eta^* a
  k.add_term(eta | etabar, id);  // - eta^* eta = + eta eta^*
  return k;
}

/// Literal H = int deta^* deta h(eta^*, eta) Delta(eta^*, eta), one
/// integration pair per mode, unit Berezin normalisation.
inline Eigen::MatrixXcd wigner_operator_map(const Element& f) {
  const Algebra& algebra = f.algebra();
  const int gens = algebra->size();
  if (gens % 2) throw AlgebraError("holomorphic algebra needs (eta, etabar) pairs");
  const int modes = gens / 2;
  const Eigen::MatrixXcd id = fock::identity(modes);
  const Eigen::MatrixXcd parity = fock::parity_operator(modes);

  SuperElement kernel = SuperElement::monomial(algebra, 0, id);
  for (int k = 0; k < modes; ++k) kernel = super_multiply(kernel, wigner_kernel(k, modes, algebra), parity);
  SuperElement lifted(algebra);
  for (const auto& [m, c] : f.terms()) lifted.add_term(m, c * id);
  const SuperElement integrand = super_multiply(lifted, kernel, parity);

  std::vector<int> order;
  for (int k = 0; k < modes; ++k) {
    order.push_back(2 * k + 1);
    order.push_back(2 * k);
  }
  const SuperElement integrated = berezin_integral(integrand, order, 1.0);
  const auto body_term = integrated.coefficient(0);
  return body_term ? *body_term : Eigen::MatrixXcd(Eigen::MatrixXcd::Zero(id.rows(), id.cols()));
}

// ---------------------------------------------------------------------------
// Clifford representation of a star product
// ---------------------------------------------------------------------------

/// Theta_i = sum_k S_ik gamma_k / sqrt(2) with A = S S^T, so that
/// Theta_i Theta_j + Theta_j Theta_i = A_ij. The quantisation of a monomial is
/// the antisymmetrised product of its Theta factors.
class CliffordRep {
 public:
  explicit CliffordRep(SymmetricForm form) : form_(std::move(form)) {
    const int n = form_.size();
    const int modes = (n + 1) / 2;
    dim_ = Eigen::Index{1} << modes;
    Eigen::LLT<Eigen::MatrixXd> llt(form_.matrix());
    if (llt.info() != Eigen::Success) throw DomainError("Clifford representation needs a positive-definite form");
    const Eigen::MatrixXd s = llt.matrixL();

    Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(2, 2);
    x(0, 1) = x(1, 0) = 1.0;
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(2, 2);
    y(0, 1) = Complex(0.0, -1.0);
    y(1, 0) = Complex(0.0, 1.0);
    std::vector<Eigen::MatrixXcd> gamma;
    for (int k = 0; k < modes; ++k) {
      gamma.push_back(fock::embed(x, k, modes));
      gamma.push_back(fock::embed(y, k, modes));
    }
    for (int i = 0; i < n; ++i) {
      Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(dim_, dim_);
      for (int k = 0; k <= i; ++k) t += gamma[static_cast<std::size_t>(k)] * (s(i, k) / std::sqrt(2.0));
      theta_.push_back(std::move(t));
    }

    const auto count = static_cast<Eigen::Index>(form_.algebra()->dimension());
    Eigen::MatrixXcd stacked(dim_ * dim_, count);
    for (Eigen::Index m = 0; m < count; ++m) {
      std::vector<Eigen::MatrixXcd> factors;
      for (int i : monomial::indices(static_cast<Mask>(m))) factors.push_back(theta_[static_cast<std::size_t>(i)]);
      basis_.push_back(fock::antisymmetrized(factors, dim_));
      stacked.col(m) = basis_.back().reshaped();
    }
    solver_ = Eigen::ColPivHouseholderQR<Eigen::MatrixXcd>(stacked);
  }

  [[nodiscard]] const SymmetricForm& form() const noexcept { return form_; }
  [[nodiscard]] Eigen::Index dimension() const noexcept { return dim_; }
  [[nodiscard]] const std::vector<Eigen::MatrixXcd>& thetas() const noexcept { return theta_; }

  [[nodiscard]] Eigen::MatrixXcd quantize(const Element& f) const {
    if (!same_algebra(f.algebra(), form_.algebra())) throw AlgebraError("element on another algebra");
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (const auto& [m, c] : f.terms()) out += c * basis_[m];
    return out;
  }

  /// Inverse of `quantize`: coefficients of M in the antisymmetrised basis.
  [[nodiscard]] Element symbol_of_matrix(const Eigen::MatrixXcd& m) const {
    if (m.rows() != dim_ || m.cols() != dim_) throw AlgebraError("matrix has the wrong dimension");
    const Eigen::VectorXcd flat = m.reshaped();
    const Eigen::VectorXcd coeffs = solver_.solve(flat);
    Element out(form_.algebra());
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) out.add_term(static_cast<Mask>(k), coeffs(k));
    return out;
  }

 private:
  SymmetricForm form_;
  Eigen::Index dim_ = 1;
  std::vector<Eigen::MatrixXcd> theta_;
  std::vector<Eigen::MatrixXcd> basis_;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> solver_;
};

inline CliffordRep clifford_representation(const SymmetricForm& form) { return CliffordRep(form); }

/// Sorted real parts of the eigenvalues of a matrix that is expected to be
/// diagonalisable with a real spectrum.
inline std::vector<double> real_spectrum(const Eigen::MatrixXcd& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) out.push_back(solver.eigenvalues()(i).real());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace fermidq
