#pragma once

// Traces, partial traces and entropies of Wigner functions.

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "fermidq/spectral.hpp"

namespace fermidq {

/// Tr F = (2^{m/2} / hbar^m) int dth_m ... dth_1 (*F) over all m generators.
inline Complex trace(const Element& f, double hbar, HodgeSign convention = HodgeSign::Standard) {
  const int m = f.algebra()->size();
  if (m % 2) throw DomainError("trace needs an even number of generators");
  std::vector<int> order;
  for (int i = m - 1; i >= 0; --i) order.push_back(i);
  const Element integrated = berezin_integral(hodge_dual(f, convention), order, hbar);
  return body(integrated) * (std::pow(2.0, m / 2) / std::pow(hbar, m));
}

struct Bipartition {
  Mask keep = 0;
  Mask traced = 0;

  Bipartition(const Algebra& algebra, Mask keep_mask) : keep(keep_mask), traced(algebra->full_mask() & ~keep_mask) {
    if (keep_mask & ~algebra->full_mask()) throw AlgebraError("bipartition outside algebra");
    if (monomial::grade(keep) % 2 || monomial::grade(traced) % 2) {
      throw DomainError("both halves of a bipartition need an even number of generators");
    }
  }

  static Bipartition keeping(const Algebra& algebra, std::initializer_list<std::string_view> labels) {
    Mask m = 0;
    for (auto l : labels) m |= monomial::bit(algebra->require(l));
    return Bipartition(algebra, m);
  }
};

/// Tr_traced F = (2^{k/2} / hbar^k) int (traced differentials, descending) (*_traced F),
/// re-expressed over the kept generators.
inline Element partial_trace(const Element& f, const Bipartition& b, double hbar,
                             HodgeSign convention = HodgeSign::Standard) {
  const int k = monomial::grade(b.traced);
  if (k % 2) throw DomainError("partial trace needs an even number of traced generators");
  auto order = monomial::indices(b.traced);
  std::reverse(order.begin(), order.end());
  Element reduced = berezin_integral(hodge_dual(f, b.traced, convention), order, hbar);
  reduced = reduced * Complex(std::pow(2.0, k / 2) / std::pow(hbar, k));
  return compress(reduced, b.keep, sub_algebra(f.algebra(), b.keep));
}

enum class EntropyMethod { Spectral, ClosedForm };

struct EntropyReport {
  std::vector<double> eigenvalues;
  double s_abs = 0.0;
  std::optional<double> s_renyi;
  EntropyMethod method = EntropyMethod::Spectral;
};

/// Eigenvalues of a state, each repeated by the Fock rank of its projector
/// (the projector's trace on the state's algebra).
inline std::vector<double> state_spectrum(const Element& w, const StarProduct& p, double hbar,
                                          const Tolerances& tol = {}) {
  if (w.parity() != ParityClass::Even) throw DomainError("state must be even");
  const SpectralResolution res = star_genvalue_solve({w}, p, tol);
  std::vector<double> out;
  for (const auto& pr : res.pairs) {
    const Complex rank = trace(pr.projector, hbar);
    const double r = std::round(rank.real());
    if (std::abs(rank - Complex(r)) > 1e-8 || r < 1.0) {
      throw SolverError("projector trace " + format_complex(rank) + " is not a positive integer rank");
    }
    if (std::abs(pr.total.imag()) > 1e-9 * std::max(1.0, std::abs(pr.total))) {
      throw SolverError("state has a non-real eigenvalue");
    }
    for (int i = 0; i < static_cast<int>(r); ++i) out.push_back(pr.total.real());
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

/// -sum |p| ln |p| with 0 ln 0 = 0.
inline double entropy_abs(std::span<const double> eigenvalues) {
  double s = 0.0;
  for (double p : eigenvalues) {
    const double a = std::abs(p);
    if (a > 0.0) s -= a * std::log(a);
  }
  return s;
}

/// -sum p ln p; only defined for non-negative spectra.
inline double von_neumann_entropy(std::span<const double> eigenvalues) {
  for (double p : eigenvalues) {
    if (p < -1e-12) throw IndefiniteStateError("von Neumann entropy of a state with negative eigenvalues");
  }
  return entropy_abs(eigenvalues);
}

/// S_alpha = ln Tr(W^{*alpha}) / (1 - alpha). Integer orders use star powers
/// and the trace; other orders use the spectrum and need p_i >= 0.
inline double renyi_entropy(const Element& w, double alpha, const StarProduct& p, double hbar,
                            const Tolerances& tol = {}) {
  if (!(alpha > 0.0) || alpha == 1.0) throw DomainError("Renyi order must be positive and different from 1");
  const double rounded = std::round(alpha);
  if (alpha == rounded) {
    const Complex tr = trace(star_power(w, static_cast<unsigned>(rounded), p), hbar);
    if (std::abs(tr.imag()) > 1e-10 * std::max(1.0, std::abs(tr)) || tr.real() <= 0.0) {
      throw IndefiniteStateError("Tr(W^alpha) = " + format_complex(tr) + " has no real logarithm");
    }
    return std::log(tr.real()) / (1.0 - alpha);
  }
  double sum = 0.0;
  for (double pi : state_spectrum(w, p, hbar, tol)) {
    if (pi < -1e-12) throw IndefiniteStateError("non-integer Renyi order on a state with negative eigenvalues");
    sum += std::pow(std::max(pi, 0.0), alpha);
  }
  return std::log(sum) / (1.0 - alpha);
}

/// Entropy of the reduced state left after tracing out b.traced.
inline EntropyReport entanglement_report(const Element& w, const Bipartition& b, const StarProduct& p, double hbar,
                                         const Tolerances& tol = {}) {
  const Element reduced = partial_trace(w, b, hbar);
  const StarProduct kept(p.form().restricted(b.keep, reduced.algebra()));
  EntropyReport r;
  r.eigenvalues = state_spectrum(reduced, kept, hbar, tol);
  r.s_abs = entropy_abs(r.eigenvalues);
  return r;
}

inline double entanglement_entropy(const Element& w, const Bipartition& b, const StarProduct& p, double hbar,
                                   const Tolerances& tol = {}) {
  return entanglement_report(w, b, p, hbar, tol).s_abs;
}

// ---------------------------------------------------------------------------
// Closed forms for the two-oscillator system
// ---------------------------------------------------------------------------

enum class WignerLabel { PP, MM, PM, MP };

inline const char* to_string(WignerLabel w) {
  switch (w) {
    case WignerLabel::PP: return "pp";
    case WignerLabel::MM: return "mm";
    case WignerLabel::PM: return "pm";
    case WignerLabel::MP: return "mp";
  }
  return "?";
}

struct OscillatorScales {
  double h_plus;
  double h_minus;
};

inline void check_deformation_domain(double hbar, double c, double d) {
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  if (!(std::abs(c) < hbar) || !(std::abs(d) < hbar)) throw DomainError("need |c|, |d| < hbar");
}

/// h+- = sqrt((hbar +- c)(hbar +- d))
inline OscillatorScales oscillator_scales(double hbar, double c, double d) {
  check_deformation_domain(hbar, c, d);
  return {std::sqrt((hbar + c) * (hbar + d)), std::sqrt((hbar - c) * (hbar - d))};
}

/// Reduced-state eigenvalues {p1, p2}, p1 >= p2, of W_ij on either oscillator pair.
inline std::pair<double, double> closed_form_spectrum(WignerLabel which, double hbar, double c, double d) {
  const auto [hp, hm] = oscillator_scales(hbar, c, d);
  const bool same = which == WignerLabel::PP || which == WignerLabel::MM;
  const double x = hbar * (same ? hp + hm : hp - hm) / (4.0 * hp * hm);
  return {0.5 + std::abs(x), 0.5 - std::abs(x)};
}

inline double closed_form_ep(WignerLabel which, double hbar, double c, double d) {
  const auto [p1, p2] = closed_form_spectrum(which, hbar, c, d);
  const double ps[] = {p1, p2};
  return entropy_abs(ps);
}

namespace detail {
inline double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }
}  // namespace detail

/// c = d specialisation, written as in the published formulas.
inline double closed_form_ep_equal(WignerLabel which, double hbar, double c) {
  check_deformation_domain(hbar, c, c);
  const double den = 2.0 * (hbar * hbar - c * c);
  if (which == WignerLabel::PP || which == WignerLabel::MM) {
    return -detail::xlogx((2.0 * hbar * hbar - c * c) / den) - detail::xlogx(c * c / den);
  }
  const double a = (hbar * hbar + hbar * c - c * c) / den;
  const double b = (hbar * hbar - hbar * c - c * c) / den;
  return -std::abs(a) * std::log(std::abs(a)) - (b == 0.0 ? 0.0 : std::abs(b) * std::log(std::abs(b)));
}

/// c = -d specialisation.
inline double closed_form_ep_opposite(WignerLabel which, double hbar, double c) {
  check_deformation_domain(hbar, c, -c);
  if (which == WignerLabel::PM || which == WignerLabel::MP) return std::numbers::ln2;
  const double r = std::sqrt(hbar * hbar - c * c);
  return -detail::xlogx((hbar + r) / (2.0 * r)) - detail::xlogx((hbar - r) / (2.0 * r));
}

}  // namespace fermidq
