#pragma once

// Finite Grassmann algebra over n <= 16 generators.
//
// A monomial is a bitmask over generator indices; the canonical order of its
// factors is ascending index, and every sign below is the parity of the
// permutation that brings a product of factors back to that order.

#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fermidq/error.hpp"

namespace fermidq {

using Complex = std::complex<double>;
using Mask = std::uint32_t;

inline constexpr int kMaxGenerators = 16;
inline constexpr double kPruneTolerance = 1e-14;

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

class GeneratorSet {
 public:
  explicit GeneratorSet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty() || names_.size() > static_cast<std::size_t>(kMaxGenerators)) {
      throw AlgebraError("generator count must be in [1, 16], got " + std::to_string(names_.size()));
    }
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i].empty()) throw AlgebraError("empty generator label");
      if (!index_.emplace(names_[i], static_cast<int>(i)).second) {
        throw AlgebraError("duplicate generator label '" + names_[i] + "'");
      }
    }
  }

  [[nodiscard]] int size() const noexcept { return static_cast<int>(names_.size()); }
  [[nodiscard]] std::size_t dimension() const noexcept { return std::size_t{1} << names_.size(); }
  [[nodiscard]] Mask full_mask() const noexcept { return static_cast<Mask>(dimension() - 1); }
  [[nodiscard]] const std::string& name(int i) const { return names_.at(static_cast<std::size_t>(i)); }
  [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }

  [[nodiscard]] std::optional<int> index_of(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  [[nodiscard]] int require(std::string_view label) const {
    if (auto i = index_of(label)) return *i;
    throw AlgebraError("unknown generator '" + std::string(label) + "'");
  }

  friend bool operator==(const GeneratorSet& a, const GeneratorSet& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
};

using Algebra = std::shared_ptr<const GeneratorSet>;

inline Algebra make_algebra(std::vector<std::string> names) {
  return std::make_shared<const GeneratorSet>(std::move(names));
}

/// prefix1 .. prefixN
inline Algebra numbered_algebra(const std::string& prefix, int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back(prefix + std::to_string(i));
  return make_algebra(std::move(names));
}

inline bool same_algebra(const Algebra& a, const Algebra& b) {
  return a == b || (a && b && *a == *b);
}

// ---------------------------------------------------------------------------
// Monomials
// ---------------------------------------------------------------------------

namespace monomial {

inline int grade(Mask m) noexcept { return std::popcount(m); }
inline int parity(Mask m) noexcept { return std::popcount(m) & 1; }
inline Mask bit(int i) noexcept { return Mask{1} << i; }
inline bool contains(Mask m, int i) noexcept { return (m >> i) & 1U; }

inline std::vector<int> indices(Mask m) {
  std::vector<int> out;
  for (int i = 0; m; ++i, m >>= 1) {
    if (m & 1U) out.push_back(i);
  }
  return out;
}

inline Mask from_indices(std::span<const int> idx) {
  Mask m = 0;
  for (int i : idx) m |= bit(i);
  return m;
}

/// Sign of theta_a * theta_b relative to theta_(a|b); 0 when they overlap.
inline int merge_sign(Mask a, Mask b) noexcept {
  if (a & b) return 0;
  int swaps = 0;
  for (Mask rest = b; rest; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    swaps += std::popcount(a >> (j + 1));
  }
  return (swaps & 1) ? -1 : 1;
}

/// Sign of an arbitrary product of generators relative to ascending order;
/// 0 when an index repeats.
inline int sequence_sign(std::span<const int> seq) noexcept {
  int inversions = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    for (std::size_t j = i + 1; j < seq.size(); ++j) {
      if (seq[i] == seq[j]) return 0;
      if (seq[i] > seq[j]) ++inversions;
    }
  }
  return (inversions & 1) ? -1 : 1;
}

/// Number of factors of m that precede generator i.
inline int preceding(Mask m, int i) noexcept { return std::popcount(m & (bit(i) - 1)); }
inline int following(Mask m, int i) noexcept { return std::popcount(m >> (i + 1)); }

}  // namespace monomial

// ---------------------------------------------------------------------------
// Elements
// ---------------------------------------------------------------------------

/// Magnitude used for pruning; specialised for every coefficient ring.
template <class Coeff>
struct CoefficientTraits;

template <>
struct CoefficientTraits<Complex> {
  static double magnitude(const Complex& z) { return std::abs(z); }
};

enum class ParityClass { Even, Odd, Mixed };

inline const char* to_string(ParityClass p) {
  switch (p) {
    case ParityClass::Even: return "Even";
    case ParityClass::Odd: return "Odd";
    case ParityClass::Mixed: return "Mixed";
  }
  return "?";
}

/// Sparse element sum_m coeff_m * theta_m. Grassmann factors are written to
/// the left of the coefficient; for commuting coefficients this is immaterial.
template <class Coeff>
class BasicElement {
 public:
  using Terms = std::map<Mask, Coeff>;

  BasicElement() = default;
  explicit BasicElement(Algebra algebra, double prune = kPruneTolerance)
      : algebra_(std::move(algebra)), prune_(prune) {
    if (!algebra_) throw AlgebraError("element without algebra");
  }

  static BasicElement monomial(Algebra algebra, Mask m, Coeff c) {
    BasicElement e(std::move(algebra));
    e.add_term(m, std::move(c));
    return e;
  }

  [[nodiscard]] const Algebra& algebra() const noexcept { return algebra_; }
  [[nodiscard]] const Terms& terms() const noexcept { return terms_; }
  [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
  [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
  [[nodiscard]] double prune_tolerance() const noexcept { return prune_; }

  [[nodiscard]] std::optional<Coeff> coefficient(Mask m) const {
    auto it = terms_.find(m);
    if (it == terms_.end()) return std::nullopt;
    return it->second;
  }

  /// Accumulates c into the m-slot, dropping it if it falls under the prune tolerance.
  void add_term(Mask m, const Coeff& c) {
    if (m & ~algebra_->full_mask()) throw AlgebraError("monomial outside algebra");
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      if (CoefficientTraits<Coeff>::magnitude(c) >= prune_) terms_.emplace(m, c);
      return;
    }
    it->second = it->second + c;
    if (CoefficientTraits<Coeff>::magnitude(it->second) < prune_) terms_.erase(it);
  }

  [[nodiscard]] ParityClass parity() const noexcept {
    bool even = false;
    bool odd = false;
    for (const auto& [m, c] : terms_) {
      (monomial::parity(m) ? odd : even) = true;
    }
    if (odd && even) return ParityClass::Mixed;
    return odd ? ParityClass::Odd : ParityClass::Even;
  }

  /// Terms whose grade has the requested parity (0 even, 1 odd).
  [[nodiscard]] BasicElement parity_part(int p) const {
    BasicElement out(algebra_, prune_);
    for (const auto& [m, c] : terms_) {
      if (monomial::parity(m) == p) out.terms_.emplace(m, c);
    }
    return out;
  }

  [[nodiscard]] BasicElement grade_part(int g) const {
    BasicElement out(algebra_, prune_);
    for (const auto& [m, c] : terms_) {
      if (monomial::grade(m) == g) out.terms_.emplace(m, c);
    }
    return out;
  }

  BasicElement& operator+=(const BasicElement& other) {
    check_same(other);
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
  }

  BasicElement& operator-=(const BasicElement& other) {
    check_same(other);
    for (const auto& [m, c] : other.terms_) add_term(m, -c);
    return *this;
  }

  template <class Scalar>
  BasicElement scaled(const Scalar& s) const {
    BasicElement out(algebra_, prune_);
    for (const auto& [m, c] : terms_) out.add_term(m, c * s);
    return out;
  }

  friend BasicElement operator+(BasicElement a, const BasicElement& b) { return a += b; }
  friend BasicElement operator-(BasicElement a, const BasicElement& b) { return a -= b; }
  friend BasicElement operator-(const BasicElement& a) { return a.scaled(-1.0); }

  void check_same(const BasicElement& other) const {
    if (!same_algebra(algebra_, other.algebra_)) throw AlgebraError("algebra mismatch");
  }

 private:
  Algebra algebra_;
  Terms terms_;
  double prune_ = kPruneTolerance;
};

using Element = BasicElement<Complex>;

inline Element operator*(const Element& f, Complex s) { return f.scaled(s); }
inline Element operator*(Complex s, const Element& f) { return f.scaled(s); }
inline Element operator/(const Element& f, Complex s) { return f.scaled(1.0 / s); }

inline Element scalar(Algebra algebra, Complex value) { return Element::monomial(std::move(algebra), 0, value); }
inline Element one(Algebra algebra) { return scalar(std::move(algebra), 1.0); }
inline Element generator(Algebra algebra, int i) {
  if (i < 0 || i >= algebra->size()) throw AlgebraError("generator index out of range");
  return Element::monomial(std::move(algebra), monomial::bit(i), 1.0);
}
inline Element generator(Algebra algebra, std::string_view label) {
  const int i = algebra->require(label);
  return generator(std::move(algebra), i);
}

/// Builds sum_k coeff_k * (product of labels_k in the written order).
inline Element make_element(const Algebra& algebra,
                            std::span<const std::pair<std::vector<std::string>, Complex>> terms) {
  Element out(algebra);
  for (const auto& [labels, coeff] : terms) {
    std::vector<int> seq;
    seq.reserve(labels.size());
    for (const auto& l : labels) seq.push_back(algebra->require(l));
    const int sign = monomial::sequence_sign(seq);
    if (sign == 0) continue;
    out.add_term(monomial::from_indices(seq), coeff * static_cast<double>(sign));
  }
  return out;
}

inline Element make_element(const Algebra& algebra,
                            std::initializer_list<std::pair<std::vector<std::string>, Complex>> terms) {
  std::vector<std::pair<std::vector<std::string>, Complex>> v(terms);
  return make_element(algebra, std::span<const std::pair<std::vector<std::string>, Complex>>(v));
}

/// Scalar (grade-0) coefficient.
inline Complex body(const Element& f) { return f.coefficient(0).value_or(Complex{}); }

inline bool is_scalar(const Element& f) {
  return f.is_zero() || (f.size() == 1 && f.terms().begin()->first == 0);
}

/// Largest coefficient magnitude.
inline double max_abs(const Element& f) {
  double m = 0.0;
  for (const auto& [k, c] : f.terms()) m = std::max(m, std::abs(c));
  return m;
}

inline double distance(const Element& a, const Element& b) { return max_abs(a - b); }

// ---------------------------------------------------------------------------
// Products and derivatives
// ---------------------------------------------------------------------------

/// Pointwise (undeformed) Grassmann product.
inline Element multiply(const Element& f, const Element& g) {
  f.check_same(g);
  Element out(f.algebra());
  for (const auto& [a, ca] : f.terms()) {
    for (const auto& [b, cb] : g.terms()) {
      const int s = monomial::merge_sign(a, b);
      if (s != 0) out.add_term(a | b, ca * cb * static_cast<double>(s));
    }
  }
  return out;
}

inline Element operator*(const Element& f, const Element& g) { return multiply(f, g); }

inline ParityClass parity(const Element& f) { return f.parity(); }

enum class Side { Left, Right };

/// Left derivative removes theta_i with sign (-1)^(factors before it).
/// Right derivative follows F d<- = (-1)^eps(F) d-> F on each parity
/// component, so theta_i d<-_i = -1.
template <class Coeff>
BasicElement<Coeff> derivative(const BasicElement<Coeff>& f, int i, Side side = Side::Left) {
  if (i < 0 || i >= f.algebra()->size()) throw AlgebraError("derivative index out of range");
  BasicElement<Coeff> out(f.algebra(), f.prune_tolerance());
  for (const auto& [m, c] : f.terms()) {
    if (!monomial::contains(m, i)) continue;
    int sign = (monomial::preceding(m, i) & 1) ? -1 : 1;
    if (side == Side::Right && monomial::parity(m)) sign = -sign;
    out.add_term(m & ~monomial::bit(i), c * static_cast<double>(sign));
  }
  return out;
}

/// Applies integral d theta_{order[0]} ... d theta_{order[k-1]} to F, the
/// rightmost differential acting first, with int d theta_i theta_j = hbar delta_ij.
template <class Coeff>
BasicElement<Coeff> berezin_integral(const BasicElement<Coeff>& f, std::span<const int> order, double hbar = 1.0) {
  Mask seen = 0;
  for (int i : order) {
    if (i < 0 || i >= f.algebra()->size()) throw AlgebraError("integration index out of range");
    if (seen & monomial::bit(i)) throw AlgebraError("duplicate differential in Berezin integral");
    seen |= monomial::bit(i);
  }
  BasicElement<Coeff> out = f;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    out = derivative(out, *it, Side::Left).scaled(hbar);
  }
  return out;
}

enum class HodgeSign { Standard, Flipped };

/// Hodge dual inside `subset`: each monomial is factored as
/// (kept part)(subset part) and the subset part theta_S is sent to
/// sign(S, S^c) theta_{S^c}, the complement taken inside `subset`.
/// Flipped negates the whole map; it exists only as a negative control.
inline Element hodge_dual(const Element& f, Mask subset, HodgeSign convention = HodgeSign::Standard) {
  if (subset & ~f.algebra()->full_mask()) throw AlgebraError("Hodge subset outside algebra");
  const double flip = convention == HodgeSign::Flipped ? -1.0 : 1.0;
  Element out(f.algebra());
  for (const auto& [m, c] : f.terms()) {
    const Mask kept = m & ~subset;
    const Mask part = m & subset;
    const Mask comp = subset & ~part;
    const int split = monomial::merge_sign(kept, part);  // theta_m = split * theta_kept theta_part
    const int dual = monomial::merge_sign(part, comp);   // ordering (S, S^c)
    const int join = monomial::merge_sign(kept, comp);
    out.add_term(kept | comp, c * static_cast<double>(split * dual * join) * flip);
  }
  return out;
}

inline Element hodge_dual(const Element& f, HodgeSign convention = HodgeSign::Standard) {
  return hodge_dual(f, f.algebra()->full_mask(), convention);
}

/// Replaces every generator i by the element images[i] of `target`, keeping
/// the written factor order of each monomial. Images are expected to be odd.
inline Element substitute(const Element& f, const Algebra& target, std::span<const Element> images) {
  if (static_cast<int>(images.size()) != f.algebra()->size()) {
    throw AlgebraError("substitution needs one image per generator");
  }
  Element out(target);
  for (const auto& [m, c] : f.terms()) {
    Element term = scalar(target, c);
    for (int i : monomial::indices(m)) term = multiply(term, images[static_cast<std::size_t>(i)]);
    out += term;
  }
  return out;
}

/// Re-expresses an element whose support lies in `keep` over the algebra
/// made of just those generators (indices compressed in ascending order).
inline Element compress(const Element& f, Mask keep, const Algebra& target) {
  std::vector<int> map(static_cast<std::size_t>(f.algebra()->size()), -1);
  int next = 0;
  for (int i : monomial::indices(keep)) map[static_cast<std::size_t>(i)] = next++;
  if (next != target->size()) throw AlgebraError("target algebra does not match kept generators");
  Element out(target);
  for (const auto& [m, c] : f.terms()) {
    if (m & ~keep) throw AlgebraError("element has support outside the kept generators");
    Mask r = 0;
    for (int i : monomial::indices(m)) r |= monomial::bit(map[static_cast<std::size_t>(i)]);
    out.add_term(r, c);
  }
  return out;
}

inline Algebra sub_algebra(const Algebra& algebra, Mask keep) {
  std::vector<std::string> names;
  for (int i : monomial::indices(keep)) names.push_back(algebra->name(i));
  return make_algebra(std::move(names));
}

inline std::string format_complex(Complex z, int precision = 12) {
  std::ostringstream os;
  os.precision(precision);
  if (z.imag() == 0.0) {
    os << z.real();
  } else if (z.real() == 0.0) {
    os << z.imag() << "i";
  } else {
    os << "(" << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i)";
  }
  return os.str();
}

inline std::string to_string(const Element& f, int precision = 12) {
  if (f.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : f.terms()) {
    if (!out.empty()) out += " + ";
    out += format_complex(c, precision);
    for (int i : monomial::indices(m)) out += "*" + f.algebra()->name(i);
  }
  return out;
}

}  // namespace fermidq
