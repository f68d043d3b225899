#pragma once

// Numbered verification criteria for the two-oscillator system. Each check
// returns a pass flag plus one detail line per sub-check; nothing here
// throws on a failed identity.

#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fermidq/sampling.hpp"
#include "fermidq/scenario.hpp"

namespace fermidq {

enum class Grid { Coarse, Fine };

struct VerifyOptions {
  Grid grid = Grid::Coarse;
  /// Negative control: flips the Hodge sign used by traces.
  HodgeSign hodge = HodgeSign::Standard;
  Tolerances tol = Tolerances{};
  std::uint64_t seed = 20240607;
};

struct SubCheck {
  std::string name;
  bool pass = true;
  double value = 0.0;
  double tolerance = 0.0;
  std::string note;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<SubCheck> checks;
  double seconds = 0.0;
  std::string error;

  [[nodiscard]] bool pass() const {
    if (!error.empty()) return false;
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
};

namespace verify_detail {

inline std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

/// Sub-check "value <= tol".
inline SubCheck within(std::string name, double value, double tol) {
  return {std::move(name), value <= tol, value, tol, {}};
}

inline SubCheck flag(std::string name, bool ok, std::string note) {
  return {std::move(name), ok, 0.0, 0.0, std::move(note)};
}

/// Deformation grid inside (-0.9 hbar, 0.9 hbar)^2: 5x5 coarse, 9x9 fine.
inline std::vector<Parameters> deformation_grid(const VerifyOptions& o, double hbar = 1.0, double omega = 1.0) {
  const int n = o.grid == Grid::Coarse ? 5 : 9;
  std::vector<Parameters> out;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double c = -0.8 + 1.6 * a / (n - 1);
      const double d = -0.8 + 1.6 * b / (n - 1);
      out.push_back({hbar, omega, c * hbar, d * hbar});
    }
  }
  return out;
}

/// Expected oscillator energies in the order pp, pm, mp, mm.
inline std::array<double, 4> expected_energies(const Parameters& p) {
  const auto [hp, hm] = oscillator_scales(p.hbar, p.c, p.d);
  return {(hp + hm) * p.omega / 2, (hp - hm) * p.omega / 2, -(hp - hm) * p.omega / 2, -(hp + hm) * p.omega / 2};
}

/// W++ written out in closed form.
inline Element expected_wpp(const Algebra& a, const Parameters& p) {
  const auto [hp, hm] = oscillator_scales(p.hbar, p.c, p.d);
  const Complex s(0.0, -(hp + hm) / (4 * hp * hm));
  const Complex t(0.0, (hp - hm) / (4 * hp * hm));
  return make_element(a, {{{}, 0.25},
                          {{"th1", "th3"}, s},
                          {{"th2", "th4"}, s},
                          {{"th1", "th4"}, t},
                          {{"th2", "th3"}, t},
                          {{"th1", "th2", "th3", "th4"}, 1.0 / (hp * hm)}});
}

inline NacSolution solve(const Parameters& p, const VerifyOptions& o, bool fock = false) {
  return solve_nac(p, PipelineOptions{fock, o.tol});
}

inline int graded_sign(const Element& a, const Element& b) {
  const bool oa = a.parity() == ParityClass::Odd;
  const bool ob = b.parity() == ParityClass::Odd;
  return oa && ob ? -1 : 1;
}

inline int eps(const Element& a) { return a.parity() == ParityClass::Odd ? 1 : 0; }

/// Largest violation of graded antisymmetry, Leibniz and Jacobi on a triple
/// of homogeneous elements.
template <class Bracket>
std::array<double, 3> bracket_defects(const Element& f, const Element& g, const Element& h, const Bracket& br) {
  const double anti = distance(br(f, g), br(g, f) * (-static_cast<double>(graded_sign(f, g))));
  const Element leib = br(f, g) * h + (g * br(f, h)) * static_cast<double>(graded_sign(f, g));
  const double leibniz = distance(br(f, g * h), leib);
  const int ef = eps(f), eg = eps(g), eh = eps(h);
  const double s1 = (ef * (eg + eh)) % 2 ? -1.0 : 1.0;
  const double s2 = (eh * (ef + eg)) % 2 ? -1.0 : 1.0;
  const Element jac = br(br(f, g), h) + br(br(g, h), f) * s1 + br(br(h, f), g) * s2;
  return {anti, leibniz, max_abs(jac)};
}

}  // namespace verify_detail

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

/// 1. Star anticommutators {th_i, th_j}_* reproduce the form.
inline CriterionResult check_star_relations(const VerifyOptions& o) {
  using namespace verify_detail;
  CriterionResult r{1, "star relations {th_i,th_j}_* on 25+ (c,d) points", {}, 0.0, {}};
  double worst = 0.0;
  int dirac_points = 0;
  const Algebra a = nac_coordinates();
  for (const auto& p : deformation_grid(o)) {
    const NacForm nf = build_nac_form(p, a, o.tol);
    if (nf.dirac) ++dirac_points;
    const StarProduct sp(nf.form);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        double expected = 0.0;
        if (i == j) expected = p.hbar;
        if ((i == 0 && j == 1) || (i == 1 && j == 0)) expected = p.c;
        if ((i == 2 && j == 3) || (i == 3 && j == 2)) expected = p.d;
        const Element anti = star_bracket(generator(a, i), generator(a, j), sp, BracketMode::Anti);
        worst = std::max(worst, distance(anti, scalar(a, expected)));
      }
    }
  }
  r.checks.push_back(within("max |{th_i,th_j}_* - A_ij|", worst, 1e-12));
  r.checks.push_back(flag("Dirac-derived points", dirac_points > 0, std::to_string(dirac_points) + " grid points took the c = d route"));
  return r;
}

/// 2. H+- star squares and the mixed product.
inline CriterionResult check_hamiltonian_algebra(const VerifyOptions& o) {
  using namespace verify_detail;
  CriterionResult r{2, "H+- algebra", {}, 0.0, {}};
  double sq = 0.0, mixed = 0.0;
  const Algebra a = nac_coordinates();
  for (const auto& p : deformation_grid(o)) {
    const StarProduct sp(build_nac_form(p, a, o.tol).form);
    const auto [hp, hm] = oscillator_scales(p.hbar, p.c, p.d);
    const Element plus = oscillator_hamiltonian_part(a, p.omega, 1);
    const Element minus = oscillator_hamiltonian_part(a, p.omega, -1);
    sq = std::max(sq, distance(star(plus, plus, sp), scalar(a, hp * hp * p.omega * p.omega / 4)));
    sq = std::max(sq, distance(star(minus, minus, sp), scalar(a, hm * hm * p.omega * p.omega / 4)));
    mixed = std::max(mixed, distance(star(plus, minus, sp), plus * minus));
    mixed = std::max(mixed, distance(star(minus, plus, sp), plus * minus));
  }
  r.checks.push_back(within("H+-*H+- = h+-^2 w^2/4", sq, 1e-10));
  r.checks.push_back(within("H+*H- = H-*H+ = H+H-", mixed, 1e-10));
  return r;
}

/// 3. Four projectors with the expected energies; W++ coefficients.
inline CriterionResult check_spectrum(const VerifyOptions& o) {
  using namespace verify_detail;
  CriterionResult r{3, "spectrum of (H+, H-)", {}, 0.0, {}};
  double energy = 0.0, wpp = 0.0;
  bool four = true;
  const Algebra a = nac_coordinates();
  for (const auto& p : deformation_grid(o)) {
    const StarProduct sp(build_nac_form(p, a, o.tol).form);
    const SpectralResolution res = star_genvalue_solve(
        {oscillator_hamiltonian_part(a, p.omega, 1), oscillator_hamiltonian_part(a, p.omega, -1)}, sp, o.tol);
    if (res.size() != 4) {
      four = false;
      continue;
    }
    const auto e = expected_energies(p);
    for (std::size_t k = 0; k < 4; ++k) {
      energy = std::max(energy, std::abs(res.at(solver_label(kWignerLabels[k])).total - Complex(e[k])));
    }
    wpp = std::max(wpp, distance(res.at("++").projector, expected_wpp(a, p)));
  }
  r.checks.push_back(flag("exactly four projectors", four, four ? "4 on every point" : "wrong projector count"));
  r.checks.push_back(within("energies +-(h+ +- h-)w/2", energy, 1e-10));
  r.checks.push_back(within("W++ coefficients", wpp, 1e-10));
  return r;
}

/// 4. W_ij * W_kl = delta delta W_ij, completeness, unit trace.
inline CriterionResult check_projector_algebra(const VerifyOptions& o) {
  using namespace verify_detail;
  CriterionResult r{4, "projector algebra", {}, 0.0, {}};
  double prod = 0.0, complete = 0.0, tr = 0.0;
  for (const auto& p : deformation_grid(o)) {
    const NacSolution s = solve(p, o);
    Element sum(s.coords);
    for (const auto& x : s.states) {
      sum += x.wigner;
      tr = std::max(tr, std::abs(trace(x.wigner, p.hbar, o.hodge) - 1.0));
      for (const auto& y : s.states) {
        const Element expected = x.label == y.label ? x.wigner : Element(s.coords);
        prod = std::max(prod, distance(star(x.wigner, y.wigner, s.product), expected));
      }
    }
    complete = std::max(complete, distance(sum, one(s.coords)));
  }
  r.checks.push_back(within("16 products W_ij*W_kl", prod, 1e-10));
  r.checks.push_back(within("sum W_ij = 1", complete, 1e-10));
  r.checks.push_back(within("Tr W_ij = 1", tr, 1e-10));
  return r;
}

/// 5. Reduced states of W++ and their spectra.
inline CriterionResult check_reduced_states(const VerifyOptions& o) {
  using namespace verify_detail;
  CriterionResult r{5, "reduced states and spectra", {}, 0.0, {}};
  double red = 0.0, spec = 0.0, norm = 0.0;
  bool bounds = true;
  std::string bound_note = "p1 >= 1 and p2 <= 0 wherever c, d != 0";
  for (const auto& p : deformation_grid(o)) {
    const NacSolution s = solve(p, o);
    const auto [hp, hm] = oscillator_scales(p.hbar, p.c, p.d);
    const Complex k(0.0, -(hp + hm) / (2 * hp * hm));
    const Algebra a = s.coords;
    const Bipartition keep13 = Bipartition::keeping(a, {"th1", "th3"});
    const Bipartition keep24 = Bipartition::keeping(a, {"th2", "th4"});
    const Element& w = s.state(WignerLabel::PP).wigner;
    const Element r13 = partial_trace(w, keep13, p.hbar, o.hodge);
    const Element r24 = partial_trace(w, keep24, p.hbar, o.hodge);
    const Element e13 = make_element(r13.algebra(), {{{}, 0.5}, {{"th1", "th3"}, k}});
    const Element e24 = make_element(r24.algebra(), {{{}, 0.5}, {{"th2", "th4"}, k}});
    red = std::max({red, distance(r13, e13), distance(r24, e24)});
    for (WignerLabel wl : kWignerLabels) {
      const auto& st = s.state(wl);
      const auto [p1, p2] = closed_form_spectrum(wl, p.hbar, p.c, p.d);
      if (st.spectrum.size() != 2) {
        spec = std::numeric_limits<double>::infinity();
        continue;
      }
      spec = std::max({spec, std::abs(st.spectrum[0] - p1), std::abs(st.spectrum[1] - p2)});
      norm = std::max(norm, std::abs(st.spectrum[0] + st.spectrum[1] - 1.0));
    }
    if (p.c != 0.0 && p.d != 0.0) {
      const auto& sp = s.state(WignerLabel::PP).spectrum;
      if (!(sp.front() >= 1.0 - 1e-12 && sp.back() <= 1e-12)) {
        bounds = false;
        bound_note = "violated at c=" + std::to_string(p.c) + " d=" + std::to_string(p.d);
      }
    }
  }
  r.checks.push_back(within("partial traces of W++", red, 1e-10));
  r.checks.push_back(within("reduced spectra vs closed form", spec, 1e-10));
  r.checks.push_back(within("|p1 + p2 - 1|", norm, 1e-10));
  r.checks.push_back(flag("p1 >= 1, p2 <= 0 on (++)", bounds, bound_note));
  return r;
}

/// 6. Entanglement entropies, closed forms and the c = d sweep.
inline CriterionResult check_entropies(const VerifyOptions& o) {
  using namespace verify_detail;
  CriterionResult r{6, "entanglement entropies", {}, 0.0, {}};
  constexpr double ln2 = std::numbers::ln2;

  double opposite = 0.0;
  for (int k = 0; k < 10; ++k) {
    const double c = -0.85 + 1.7 * k / 9.0;
    const NacSolution s = solve({1.0, 1.0, c, -c}, o);
    opposite = std::max(opposite, std::abs(s.state(WignerLabel::PM).entropy - ln2));
    opposite = std::max(opposite, std::abs(s.state(WignerLabel::MP).entropy - ln2));
  }
  r.checks.push_back(within("E_p(W+-) = ln 2 at c = -d (10 values)", opposite, 1e-9));

  const NacSolution zero = solve({1.0, 1.0, 0.0, 0.0}, o);
  r.checks.push_back(within("E_p(W++) = 0 at c = d = 0", std::abs(zero.state(WignerLabel::PP).entropy), 1e-9));
  r.checks.push_back(
      within("E_p(W+-) = ln 2 at c = d = 0", std::abs(zero.state(WignerLabel::PM).entropy - ln2), 1e-9));

  SweepSpec spec;
  spec.link = SweepLink::Equal;
  spec.quantities = {"ep_pp", "ep_pm"};
  const auto rows = run_sweep(spec, Parameters{}, o.tol);
  double closed = 0.0;
  for (const auto& row : rows) closed = std::max({closed, row.values[2], row.values[5]});
  r.checks.push_back(within("closed forms vs pipeline on 181 points", closed, 1e-9));

  // Monotonicity in |c| on each half of the symmetric sweep, walking out from c = 0.
  const std::size_t mid = rows.size() / 2;
  auto monotone = [&](std::size_t col, int direction, std::string& where) {
    for (int side : {1, -1}) {
      for (std::size_t k = 1; k <= mid; ++k) {
        const auto& inner = rows[static_cast<std::size_t>(static_cast<long>(mid) + side * static_cast<long>(k - 1))];
        const auto& outer = rows[static_cast<std::size_t>(static_cast<long>(mid) + side * static_cast<long>(k))];
        const double step = (outer.values[col] - inner.values[col]) * direction;
        if (step < -1e-12) {
          where = "first violation at c/hbar = " + format_g12(outer.c_over_hbar) + " (" +
                  format_g12(inner.values[col]) + " -> " + format_g12(outer.values[col]) + ")";
          return false;
        }
      }
    }
    return true;
  };
  std::string w_pp = "holds on all 181 points";
  std::string w_pm = "holds on all 181 points";
  const bool pp_ok = monotone(0, 1, w_pp);
  const bool pm_ok = monotone(3, -1, w_pm);
  r.checks.push_back(flag("E_p(W++) non-decreasing in |c|", pp_ok, w_pp));
  r.checks.push_back(flag("E_p(W+-) non-increasing in |c|", pm_ok, w_pm));
  return r;
}

/// 7. Clifford representation, Weyl quantisation and Fock energies.
inline CriterionResult check_fock_oracle(const VerifyOptions& o) {
  using namespace verify_detail;
  CriterionResult r{7, "Fock-space oracle", {}, 0.0, {}};
  std::mt19937_64 rng(o.seed);
  const auto grid = deformation_grid(o);
  const Algebra a = nac_coordinates();

  double symbol = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Parameters& p = grid[static_cast<std::size_t>(k) % grid.size()];
    const SymmetricForm form = build_nac_form(p, a, o.tol).form;
    const CliffordRep rep(form);
    const StarProduct sp(form);
    const Element f = random_dense_element(a, rng);
    const Element g = random_dense_element(a, rng);
    symbol = std::max(symbol, distance(rep.symbol_of_matrix(rep.quantize(f) * rep.quantize(g)), star(f, g, sp)));
  }
  r.checks.push_back(within("symbol(Theta(F) Theta(G)) = F*G, 200 pairs", symbol, 1e-9));

  double weyl = 0.0, kernel = 0.0, energies = 0.0;
  for (const auto& p : grid) {
    const NacSolution s = solve(p, o, true);
    weyl = std::max(weyl, s.fock->weyl_spectrum_residual);
    kernel = std::max(kernel, s.fock->wigner_map_residual);
    energies = std::max(energies, s.fock->energy_residual);
    // closed-form eigenvalues as well as the spectral-module ones
    const auto [p1, p2] = closed_form_spectrum(WignerLabel::PP, p.hbar, p.c, p.d);
    const HolomorphicPairing pairing{{{0, 1}}};
    const auto ev = real_spectrum(weyl_quantize(holomorphic_transform(s.state(WignerLabel::PP).reduced_13, pairing, p.hbar)));
    weyl = std::max({weyl, std::abs(ev[0] - p1), std::abs(ev[1] - p2)});
  }
  r.checks.push_back(within("Weyl-quantised reduced state eigenvalues = {p1, p2}", weyl, 1e-9));
  r.checks.push_back(within("Wigner-kernel map = Weyl map", kernel, 1e-9));
  r.checks.push_back(within("eig Theta(H) = energies", energies, 1e-9));
  return r;
}

/// 8. Bracket axioms, constraint matrices and the quantisation form.
inline CriterionResult check_brackets(const VerifyOptions& o) {
  using namespace verify_detail;
  CriterionResult r{8, "Poisson and Dirac brackets", {}, 0.0, {}};
  std::mt19937_64 rng(o.seed + 8);
  const Algebra space = phase_space(4);
  const double big_c = 4.0 * 0.3;
  const BracketTensor tensor = nac_tensor(space, big_c);
  const ConstraintSet chis = free_fermion_constraints(space);
  const DiracBracket dirac(chis, tensor, o.tol);
  auto poisson = [&](const Element& f, const Element& g) { return poisson_bracket(f, g, tensor); };

  std::array<double, 3> pb{0, 0, 0}, db{0, 0, 0};
  std::uniform_int_distribution<int> coin(0, 1);
  for (int k = 0; k < 50; ++k) {
    const Element f = random_element(space, rng, 4, 3, coin(rng));
    const Element g = random_element(space, rng, 4, 3, coin(rng));
    const Element h = random_element(space, rng, 4, 3, coin(rng));
    const auto dp = bracket_defects(f, g, h, poisson);
    const auto dd = bracket_defects(f, g, h, dirac);
    for (int i = 0; i < 3; ++i) {
      pb[i] = std::max(pb[i], dp[i]);
      db[i] = std::max(db[i], dd[i]);
    }
  }
  const char* names[] = {"graded antisymmetry", "Leibniz", "Jacobi"};
  for (int i = 0; i < 3; ++i) r.checks.push_back(within(std::string("Poisson ") + names[i], pb[i], 1e-10));
  for (int i = 0; i < 3; ++i) r.checks.push_back(within(std::string("Dirac ") + names[i], db[i], 1e-10));

  double chi_res = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Element f = random_element(space, rng, 5, 4);
    for (const auto& chi : chis.constraints) {
      chi_res = std::max({chi_res, max_abs(dirac(chi, f)), max_abs(dirac(f, chi))});
    }
  }
  r.checks.push_back(within("{chi_a, F}_D = 0, 50 random F", chi_res, 1e-10));

  double cm = 0.0, cinv = 0.0, diag = 0.0, ratio = 0.0, prop = 0.0;
  std::string normalization;
  for (double c : {-0.8, -0.4, 0.0, 0.3, 0.8}) {
    const Parameters p{1.0, 1.0, c, c};
    const NacForm nf = build_nac_form(p, nac_coordinates(), o.tol);
    const DiracRoute& route = *nf.dirac;
    cm = std::max(cm, max_entry_distance(detail::body_matrix(route.constraint_matrix), printed_constraint_matrix(route.big_c)));
    cinv = std::max(cinv, max_entry_distance(detail::body_matrix(route.constraint_inverse), printed_constraint_inverse(route.big_c)));
    const Eigen::MatrixXd& a = nf.form.matrix();
    for (int i = 0; i < 4; ++i) diag = std::max(diag, std::abs(a(i, i) - p.hbar));
    ratio = std::max({ratio, std::abs(a(0, 1) / p.hbar - route.big_c / 4), std::abs(a(2, 3) / p.hbar - route.big_c / 4)});
    prop = std::max(prop, max_entry_distance(route.dirac_matrix * (p.hbar / route.dirac_matrix(0, 0)), a.cast<Complex>()));
    if (c == 0.3) {
      const Eigen::MatrixXcd printed = printed_dirac_matrix(route.big_c);
      normalization = "computed diag " + format_complex(route.dirac_matrix(0, 0), 6) + ", printed diag " +
                      format_complex(printed(0, 0), 6) + ", same off/diag ratio";
    }
  }
  r.checks.push_back(within("constraint matrix entries", cm, 1e-12));
  r.checks.push_back(within("inverse constraint matrix entries", cinv, 1e-12));
  r.checks.push_back(within("form diagonal = hbar", diag, 1e-12));
  r.checks.push_back(within("off-diagonal ratio c/hbar = C/4", ratio, 1e-12));
  r.checks.push_back(within("form proportional to Dirac matrix", prop, 1e-12));
  r.checks.push_back(flag("Dirac normalisation (informational)", true, normalization));
  return r;
}

/// 9. Star exponentials against their Fourier-Dirichlet expansions.
inline CriterionResult check_time_evolution(const VerifyOptions& o) {
  using namespace verify_detail;
  CriterionResult r{9, "time evolution", {}, 0.0, {}};
  std::vector<double> times;
  for (int k = 0; k < 10; ++k) times.push_back(0.37 + 1.9 * k);
  double plus = 0.0, minus = 0.0, full = 0.0;
  bool exact_one = true;
  const Algebra a = nac_coordinates();
  for (const auto& p : deformation_grid(o)) {
    const StarProduct sp(build_nac_form(p, a, o.tol).form);
    const auto [hp, hm] = oscillator_scales(p.hbar, p.c, p.d);
    const Element hpl = oscillator_hamiltonian_part(a, p.omega, 1);
    const Element hmi = oscillator_hamiltonian_part(a, p.omega, -1);
    const Element h = oscillator_hamiltonian(a, p.omega);
    for (double x : fourier_dirichlet(hpl, hp, times, sp, o.tol)) plus = std::max(plus, x);
    for (double x : fourier_dirichlet(hmi, hm, times, sp, o.tol)) minus = std::max(minus, x);
    for (double x : fourier_dirichlet(h, p.hbar, times, sp, o.tol)) full = std::max(full, x);
    for (const Element* e : {&hpl, &hmi, &h}) {
      const Element at0 = star_exponential(*e, 0.0, p.hbar, sp);
      if (at0.terms().size() != 1 || at0.coefficient(0) != Complex(1.0, 0.0)) exact_one = false;
    }
  }
  r.checks.push_back(within("Fourier-Dirichlet residual, H+", plus, 1e-9));
  r.checks.push_back(within("Fourier-Dirichlet residual, H-", minus, 1e-9));
  r.checks.push_back(within("Fourier-Dirichlet residual, H", full, 1e-9));
  r.checks.push_back(flag("Exp at t = 0 is exactly 1", exact_one, exact_one ? "exact" : "not exactly 1"));
  return r;
}

using CriterionFn = std::function<CriterionResult(const VerifyOptions&)>;

inline std::vector<CriterionFn> all_criteria() {
  return {check_star_relations,  check_hamiltonian_algebra, check_spectrum,
          check_projector_algebra, check_reduced_states,    check_entropies,
          check_fock_oracle,     check_brackets,            check_time_evolution};
}

inline CriterionResult run_criterion(const CriterionFn& fn, int id, const VerifyOptions& o) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = fn(o);
  } catch (const std::exception& e) {
    r.id = id;
    r.title = "criterion " + std::to_string(id);
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::vector<CriterionResult> run_verify(const VerifyOptions& o = {}) {
  std::vector<CriterionResult> out;
  int id = 1;
  for (const auto& fn : all_criteria()) out.push_back(run_criterion(fn, id++, o));
  return out;
}

/// "[PASS] 3 spectrum of (H+, H-)" followed by indented sub-check lines.
inline std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.pass() ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.title << "  (" << std::fixed << std::setprecision(2)
     << r.seconds << " s)\n";
  if (!r.error.empty()) os << "       error: " << r.error << '\n';
  for (const auto& c : r.checks) {
    os << "       " << (c.pass ? "ok   " : "FAIL ") << c.name;
    if (c.tolerance > 0.0) os << ": " << verify_detail::sci(c.value) << " (tol " << verify_detail::sci(c.tolerance) << ")";
    if (!c.note.empty()) os << ": " << c.note;
    os << '\n';
  }
  return os.str();
}

inline nlohmann::json results_json(const std::vector<CriterionResult>& results) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
      checks.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"tolerance", c.tolerance}, {"note", c.note}});
    }
    out.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass()}, {"seconds", r.seconds}, {"error", r.error},
                   {"checks", checks}});
  }
  return out;
}

}  // namespace fermidq
