#pragma once

// End-to-end two-oscillator pipeline on the deformed fermionic phase space:
// constraints, Dirac bracket, star product, Wigner functions, reduced
// states, entropies and the Fock-space cross-check. Also JSON reports and
// CSV sweeps.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <future>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "fermidq/brackets.hpp"
#include "fermidq/expression.hpp"
#include "fermidq/fock.hpp"
#include "fermidq/states.hpp"

namespace fermidq {

struct ScenarioConfig {
  std::string preset = "nac";
  Parameters params;
  std::optional<double> renyi_alpha;
  std::string out;

  void validate() const {
    if (preset != "nac") throw DomainError("unknown scenario preset '" + preset + "'");
    if (!(params.omega > 0.0)) throw DomainError("omega must be positive");
    check_deformation_domain(params.hbar, params.c, params.d);
    if (renyi_alpha && (!(*renyi_alpha > 0.0) || *renyi_alpha == 1.0)) {
      throw DomainError("renyi_alpha must be positive and different from 1");
    }
  }
};

namespace detail {

inline double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError("config key '" + key + "' needs a number, got '" + text + "'");
  }
  if (used != text.size()) throw DomainError("config key '" + key + "' needs a number, got '" + text + "'");
  return v;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline void apply_config_key(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "preset") {
    cfg.preset = value;
  } else if (key == "hbar") {
    cfg.params.hbar = parse_number(key, value);
  } else if (key == "omega") {
    cfg.params.omega = parse_number(key, value);
  } else if (key == "c") {
    cfg.params.c = parse_number(key, value);
  } else if (key == "d") {
    cfg.params.d = parse_number(key, value);
  } else if (key == "renyi_alpha") {
    cfg.renyi_alpha = parse_number(key, value);
  } else if (key == "out") {
    cfg.out = value;
  } else {
    throw DomainError("unknown config key '" + key + "'");
  }
}

}  // namespace detail

/// Parses either a JSON object or key=value lines ('#' starts a comment).
inline ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  const std::string body = detail::trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw DomainError(std::string("config JSON: ") + e.what());
    }
    for (const auto& [key, value] : j.items()) {
      if (value.is_number()) {
        detail::apply_config_key(cfg, key, nlohmann::json(value).dump());
      } else if (value.is_string()) {
        detail::apply_config_key(cfg, key, value.get<std::string>());
      } else if (!value.is_null()) {
        throw DomainError("config key '" + key + "' has an unsupported type");
      }
    }
  } else {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw DomainError("config line " + std::to_string(lineno) + " is not key=value");
      detail::apply_config_key(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
  }
  cfg.validate();
  return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

/// Runs `fn`, re-throwing any library failure tagged with the stage name.
template <class Fn>
auto run_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

/// Pre-constraint data, present when the star form came from the Dirac bracket.
struct DiracRoute {
  double big_c = 0.0;
  ElementMatrix constraint_matrix;
  ElementMatrix constraint_inverse;
  Eigen::MatrixXcd dirac_matrix;
  std::shared_ptr<const DiracBracket> bracket;
};

struct NacForm {
  SymmetricForm form;
  std::optional<DiracRoute> dirac;
};

inline Algebra nac_coordinates() { return numbered_algebra("th", 4); }

/// Star form for the oscillator pair. For c = d it is derived from the Dirac
/// bracket of the constrained phase space with C = 4c/hbar; otherwise the
/// general two-parameter form is built directly.
inline NacForm build_nac_form(const Parameters& prm, const Algebra& coords, const Tolerances& tol = {}) {
  check_deformation_domain(prm.hbar, prm.c, prm.d);
  if (prm.c != prm.d) return {nac_form(coords, prm.hbar, prm.c, prm.d), std::nullopt};

  const Algebra space = run_stage("phase_space", [] { return phase_space(4); });
  DiracRoute route;
  route.big_c = prm.big_c();
  const BracketTensor tensor = nac_tensor(space, route.big_c);
  const ConstraintSet chis = free_fermion_constraints(space);
  run_stage("constraints", [&] {
    const ConstraintMatrix cm(chis, tensor, tol);
    if (!cm.second_class()) throw ConstraintError("constraints are not second class");
    route.constraint_matrix = cm.matrix();
    route.constraint_inverse = cm.inverse();
    return 0;
  });
  route.bracket = run_stage("dirac", [&] { return std::make_shared<const DiracBracket>(chis, tensor, tol); });
  const std::vector<int> surviving{0, 1, 2, 3};
  SymmetricForm form = run_stage("quantization", [&] {
    return quantization_form(*route.bracket, surviving, coords, prm.hbar, &route.dirac_matrix);
  });
  return {std::move(form), std::move(route)};
}

/// -i omega/2 (th1 th3 + th2 th4 +- (th1 th4 + th2 th3))
inline Element oscillator_hamiltonian_part(const Algebra& a, double omega, int sign) {
  const Complex k(0.0, -omega / 2.0);
  return make_element(a, {{{"th1", "th3"}, k}, {{"th2", "th4"}, k}, {{"th1", "th4"}, k * double(sign)},
                          {{"th2", "th3"}, k * double(sign)}});
}

/// -i omega th1 th3 - i omega th2 th4
inline Element oscillator_hamiltonian(const Algebra& a, double omega) {
  return oscillator_hamiltonian_part(a, omega, 1) + oscillator_hamiltonian_part(a, omega, -1);
}

/// Wigner label "pp", "pm", ... from the solver's joint cluster label "++", "+-", ...
inline std::string wigner_key(const std::string& solver_label) {
  std::string out;
  for (char ch : solver_label) out += ch == '+' ? 'p' : (ch == '-' ? 'm' : ch);
  return out;
}

inline std::string solver_label(WignerLabel w) {
  switch (w) {
    case WignerLabel::PP: return "++";
    case WignerLabel::MM: return "--";
    case WignerLabel::PM: return "+-";
    case WignerLabel::MP: return "-+";
  }
  return {};
}

inline constexpr WignerLabel kWignerLabels[] = {WignerLabel::PP, WignerLabel::PM, WignerLabel::MP, WignerLabel::MM};

struct StateData {
  WignerLabel label;
  double energy = 0.0;
  Element wigner;
  Element reduced_13;
  Element reduced_24;
  std::vector<double> spectrum;  // of reduced_13
  double entropy = 0.0;
  std::optional<double> renyi;
  std::string renyi_error;
};

struct FockCheck {
  double clifford_residual = 0.0;
  double energy_residual = 0.0;
  double weyl_spectrum_residual = 0.0;
  double wigner_map_residual = 0.0;

  [[nodiscard]] double max_residual() const {
    return std::max({clifford_residual, energy_residual, weyl_spectrum_residual, wigner_map_residual});
  }
};

struct PipelineOptions {
  bool fock = true;
  Tolerances tol = Tolerances{};
};

struct NacSolution {
  Parameters params;
  Algebra coords;
  NacForm form;
  StarProduct product;
  Element h;
  Element h_plus;
  Element h_minus;
  std::vector<StateData> states;  // ordered pp, pm, mp, mm
  std::optional<FockCheck> fock;

  [[nodiscard]] const StateData& state(WignerLabel w) const {
    for (const auto& s : states) {
      if (s.label == w) return s;
    }
    throw SolverError(std::string("missing state ") + to_string(w));
  }
};

inline FockCheck fock_cross_check(const NacSolution& s) {
  FockCheck fc;
  const CliffordRep rep(s.product.form());
  for (const auto& st : s.states) {
    const Eigen::MatrixXcd q = rep.quantize(st.wigner);
    fc.clifford_residual = std::max(fc.clifford_residual, distance(rep.symbol_of_matrix(q * q), st.wigner));
  }
  std::vector<double> energies;
  for (const auto& st : s.states) energies.push_back(st.energy);
  std::sort(energies.begin(), energies.end(), std::greater<>());
  const auto theta_h = real_spectrum(rep.quantize(s.h));
  for (std::size_t i = 0; i < energies.size(); ++i) {
    fc.energy_residual = std::max(fc.energy_residual, std::abs(theta_h[i] - energies[i]));
  }
  // reduced states on (th1, th3) carry the form hbar*I
  const HolomorphicPairing pairing{{{0, 1}}};
  for (const auto& st : s.states) {
    const Element eta = holomorphic_transform(st.reduced_13, pairing, s.params.hbar);
    const Eigen::MatrixXcd weyl = weyl_quantize(eta);
    const auto ev = real_spectrum(weyl);
    for (std::size_t i = 0; i < ev.size() && i < st.spectrum.size(); ++i) {
      fc.weyl_spectrum_residual = std::max(fc.weyl_spectrum_residual, std::abs(ev[i] - st.spectrum[i]));
    }
    fc.wigner_map_residual =
        std::max(fc.wigner_map_residual, (wigner_operator_map(eta) - weyl).cwiseAbs().maxCoeff());
  }
  return fc;
}

inline NacSolution solve_nac(const Parameters& prm, const PipelineOptions& opt = {},
                             std::optional<double> renyi_alpha = std::nullopt) {
  run_stage("config", [&] {
    check_deformation_domain(prm.hbar, prm.c, prm.d);
    if (!(prm.omega > 0.0)) throw DomainError("omega must be positive");
    return 0;
  });
  const Algebra coords = nac_coordinates();
  NacForm nf = build_nac_form(prm, coords, opt.tol);
  const StarProduct product = run_stage("star_product", [&] { return build_star_product(nf.form); });
  NacSolution s{prm, coords, std::move(nf), product, Element(coords), Element(coords), Element(coords), {}, {}};
  s.h_plus = oscillator_hamiltonian_part(coords, prm.omega, 1);
  s.h_minus = oscillator_hamiltonian_part(coords, prm.omega, -1);
  s.h = oscillator_hamiltonian(coords, prm.omega);

  const SpectralResolution res =
      run_stage("spectral", [&] { return star_genvalue_solve({s.h_plus, s.h_minus}, product, opt.tol); });
  if (res.size() != 4) throw StageError("spectral", "expected four Wigner functions, got " + std::to_string(res.size()));

  const Bipartition keep13 = Bipartition::keeping(coords, {"th1", "th3"});
  const Bipartition keep24 = Bipartition::keeping(coords, {"th2", "th4"});
  for (WignerLabel w : kWignerLabels) {
    StateData st{w, 0.0, Element(coords), Element(coords), Element(coords), {}, 0.0, std::nullopt, {}};
    const SpectralPair& pair = run_stage("spectral", [&]() -> const SpectralPair& { return res.at(solver_label(w)); });
    st.energy = pair.total.real();
    st.wigner = pair.projector;
    run_stage("reduced", [&] {
      st.reduced_13 = partial_trace(st.wigner, keep13, prm.hbar);
      st.reduced_24 = partial_trace(st.wigner, keep24, prm.hbar);
      return 0;
    });
    run_stage("entropy", [&] {
      const StarProduct kept(product.form().restricted(keep13.keep, st.reduced_13.algebra()));
      st.spectrum = state_spectrum(st.reduced_13, kept, prm.hbar, opt.tol);
      st.entropy = entropy_abs(st.spectrum);
      if (renyi_alpha) {
        try {
          st.renyi = renyi_entropy(st.reduced_13, *renyi_alpha, kept, prm.hbar, opt.tol);
        } catch (const IndefiniteStateError& e) {
          st.renyi_error = e.what();
        }
      }
      return 0;
    });
    s.states.push_back(std::move(st));
  }
  if (opt.fock) s.fock = run_stage("fock", [&] { return fock_cross_check(s); });
  return s;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// [[1-based generator indices], re, im] per term.
inline nlohmann::json terms_json(const Element& f) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [m, c] : f.terms()) {
    nlohmann::json idx = nlohmann::json::array();
    for (int i : monomial::indices(m)) idx.push_back(i + 1);
    out.push_back({idx, c.real(), c.imag()});
  }
  return out;
}

inline nlohmann::json matrix_json(const Eigen::MatrixXcd& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    out.push_back(row);
  }
  return out;
}

/// Printed constraint matrix i[[1, -C/4], [-C/4, 1]] (two blocks).
inline Eigen::MatrixXcd printed_constraint_matrix(double big_c) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  const Complex i(0.0, 1.0);
  for (int b = 0; b < 4; b += 2) {
    m(b, b) = m(b + 1, b + 1) = i;
    m(b, b + 1) = m(b + 1, b) = -i * big_c / 4.0;
  }
  return m;
}

/// Printed inverse -i/(1 - C^2/16) [[1, C/4], [C/4, 1]] (two blocks).
inline Eigen::MatrixXcd printed_constraint_inverse(double big_c) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  const Complex k = Complex(0.0, -1.0) / (1.0 - big_c * big_c / 16.0);
  for (int b = 0; b < 4; b += 2) {
    m(b, b) = m(b + 1, b + 1) = k;
    m(b, b + 1) = m(b + 1, b) = k * big_c / 4.0;
  }
  return m;
}

/// Printed Dirac-bracket coefficients: 4i/(1 - C^2/16) on the diagonal and
/// iC/(1 - C^2/16) off it. The mechanical evaluation differs by an overall
/// factor, so only the ratio C/4 is asserted anywhere.
inline Eigen::MatrixXcd printed_dirac_matrix(double big_c) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  const double den = 1.0 - big_c * big_c / 16.0;
  for (int b = 0; b < 4; b += 2) {
    m(b, b) = m(b + 1, b + 1) = Complex(0.0, 4.0 / den);
    m(b, b + 1) = m(b + 1, b) = Complex(0.0, big_c / den);
  }
  return m;
}

inline double max_entry_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline nlohmann::json bracket_check_json(const NacSolution& s) {
  nlohmann::json j;
  const auto& a = s.product.form().matrix();
  j["form"] = nlohmann::json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(a(r, c));
    j["form"].push_back(row);
  }
  if (!s.form.dirac) {
    j["route"] = "direct";
    return j;
  }
  const DiracRoute& d = *s.form.dirac;
  j["route"] = "dirac";
  j["C"] = d.big_c;
  j["constraint_matrix_residual"] = max_entry_distance(detail::body_matrix(d.constraint_matrix), printed_constraint_matrix(d.big_c));
  j["constraint_inverse_residual"] =
      max_entry_distance(detail::body_matrix(d.constraint_inverse), printed_constraint_inverse(d.big_c));
  j["dirac_matrix"] = matrix_json(d.dirac_matrix);
  j["dirac_matrix_printed"] = matrix_json(printed_dirac_matrix(d.big_c));
  j["off_diagonal_ratio"] = (d.dirac_matrix(0, 1) / d.dirac_matrix(0, 0)).real();
  j["expected_ratio"] = d.big_c / 4.0;
  double chi_residual = 0.0;
  for (const auto& chi : d.bracket->constraints().constraints) {
    for (int g = 0; g < d.bracket->tensor().algebra()->size(); ++g) {
      chi_residual = std::max(chi_residual, max_abs((*d.bracket)(chi, generator(chi.algebra(), g))));
    }
  }
  j["constraint_dirac_residual"] = chi_residual;
  return j;
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline nlohmann::json report_json(const ScenarioConfig& cfg, const NacSolution& s) {
  nlohmann::json j;
  j["config"] = {{"preset", cfg.preset}, {"hbar", cfg.params.hbar}, {"omega", cfg.params.omega},
                 {"c", cfg.params.c},      {"d", cfg.params.d},         {"C", cfg.params.big_c()}};
  if (cfg.renyi_alpha) j["config"]["renyi_alpha"] = *cfg.renyi_alpha;

  nlohmann::json warnings = nlohmann::json::array();
  const double rel = std::max(std::abs(cfg.params.c), std::abs(cfg.params.d)) / cfg.params.hbar;
  if (rel > 0.9) warnings.push_back("deformation |c|, |d| = " + std::to_string(rel) + " hbar is far from the small-deformation regime");
  j["warnings"] = warnings;

  j["energies"] = nlohmann::json::array();
  for (const auto& st : s.states) j["energies"].push_back({{"label", to_string(st.label)}, {"value", st.energy}});
  for (const auto& st : s.states) {
    const std::string key = to_string(st.label);
    j["wigner"][key] = terms_json(st.wigner);
    j["reduced"][key] = {{"th1_th3", terms_json(st.reduced_13)}, {"th2_th4", terms_json(st.reduced_24)}};
    j["spectra"][key] = st.spectrum;
    j["entropies"]["ep_" + key] = st.entropy;
    if (cfg.renyi_alpha) {
      j["renyi"][key] = st.renyi ? nlohmann::json(*st.renyi) : nlohmann::json(nullptr);
      if (!st.renyi_error.empty()) j["renyi_errors"][key] = st.renyi_error;
    }
  }
  if (s.fock) {
    j["fock_check"] = {{"max_residual", s.fock->max_residual()},
                       {"clifford_residual", s.fock->clifford_residual},
                       {"energy_residual", s.fock->energy_residual},
                       {"weyl_spectrum_residual", s.fock->weyl_spectrum_residual},
                       {"wigner_map_residual", s.fock->wigner_map_residual}};
  }
  j["bracket_check"] = bracket_check_json(s);
  j["timestamp"] = utc_timestamp();
  return j;
}

/// Runs the full pipeline; failures come back as {"error": {stage, message}}.
inline nlohmann::json run_scenario(const ScenarioConfig& cfg, const PipelineOptions& opt = {}) {
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    return {{"error", {{"stage", "config"}, {"message", e.what()}}}, {"timestamp", utc_timestamp()}};
  }
  try {
    return report_json(cfg, solve_nac(cfg.params, opt, cfg.renyi_alpha));
  } catch (const StageError& e) {
    return {{"error", {{"stage", e.stage()}, {"message", e.what()}}}, {"timestamp", utc_timestamp()}};
  }
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

enum class SweepLink { None, Equal, Opposite };

struct SweepSpec {
  std::string parameter = "c";
  SweepLink link = SweepLink::Equal;
  double from = -0.9;
  double to = 0.9;
  int steps = 181;
  std::vector<std::string> quantities{"ep_pp", "ep_pm"};

  void validate(double hbar) const {
    if (parameter != "c" && parameter != "d") throw DomainError("sweep parameter must be c or d");
    if (!(from < to)) throw DomainError("sweep needs from < to");
    if (steps < 2) throw DomainError("sweep needs at least 2 steps");
    if (!(std::abs(from) < 1.0) || !(std::abs(to) < 1.0)) {
      throw DomainError("sweep range must lie inside (-hbar, hbar)");
    }
    (void)hbar;
    for (const auto& q : quantities) {
      if (q != "ep_pp" && q != "ep_pm" && q != "energies" && q != "p1" && q != "p2") {
        throw DomainError("unknown sweep quantity '" + q + "'");
      }
    }
  }

  [[nodiscard]] double point(int k) const { return from + (to - from) * k / (steps - 1); }
};

inline SweepLink parse_link(const std::string& text) {
  if (text.empty() || text == "none") return SweepLink::None;
  if (text == "c=d") return SweepLink::Equal;
  if (text == "c=-d") return SweepLink::Opposite;
  throw DomainError("link must be c=d, c=-d or none");
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = detail::trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct SweepRow {
  double c_over_hbar = 0.0;
  double d_over_hbar = 0.0;
  std::vector<double> values;
};

inline Parameters sweep_parameters(const SweepSpec& spec, const Parameters& base, double x) {
  Parameters p = base;
  const double v = x * base.hbar;
  if (spec.link == SweepLink::Equal) {
    p.c = p.d = v;
  } else if (spec.link == SweepLink::Opposite) {
    p.c = spec.parameter == "c" ? v : -v;
    p.d = -p.c;
  } else if (spec.parameter == "c") {
    p.c = v;
  } else {
    p.d = v;
  }
  return p;
}

/// Column names after c_over_hbar, d_over_hbar.
inline std::vector<std::string> sweep_columns(const SweepSpec& spec) {
  std::vector<std::string> cols;
  for (const auto& q : spec.quantities) {
    if (q == "energies") {
      for (const char* l : {"pp", "pm", "mp", "mm"}) cols.push_back(std::string("E_") + l);
      cols.push_back("energies_residual");
    } else {
      cols.push_back(q);
      cols.push_back(q + "_closed");
      cols.push_back(q + "_residual");
    }
  }
  return cols;
}

inline double closed_form_entropy(const SweepSpec& spec, WignerLabel w, const Parameters& p) {
  if (spec.link == SweepLink::Equal) return closed_form_ep_equal(w, p.hbar, p.c);
  if (spec.link == SweepLink::Opposite) return closed_form_ep_opposite(w, p.hbar, p.c);
  return closed_form_ep(w, p.hbar, p.c, p.d);
}

inline SweepRow sweep_point(const SweepSpec& spec, const Parameters& base, double x, const Tolerances& tol) {
  const Parameters p = sweep_parameters(spec, base, x);
  const NacSolution s = solve_nac(p, PipelineOptions{false, tol});
  SweepRow row{p.c / p.hbar, p.d / p.hbar, {}};
  auto triple = [&](double pipeline, double closed) {
    row.values.push_back(pipeline);
    row.values.push_back(closed);
    row.values.push_back(std::abs(pipeline - closed));
  };
  for (const auto& q : spec.quantities) {
    if (q == "ep_pp") {
      triple(s.state(WignerLabel::PP).entropy, closed_form_entropy(spec, WignerLabel::PP, p));
    } else if (q == "ep_pm") {
      triple(s.state(WignerLabel::PM).entropy, closed_form_entropy(spec, WignerLabel::PM, p));
    } else if (q == "p1" || q == "p2") {
      const auto [p1, p2] = closed_form_spectrum(WignerLabel::PP, p.hbar, p.c, p.d);
      const auto& sp = s.state(WignerLabel::PP).spectrum;
      triple(q == "p1" ? sp.front() : sp.back(), q == "p1" ? p1 : p2);
    } else {
      const auto [hp, hm] = oscillator_scales(p.hbar, p.c, p.d);
      const double expected[] = {(hp + hm) * p.omega / 2, (hp - hm) * p.omega / 2, -(hp - hm) * p.omega / 2,
                                 -(hp + hm) * p.omega / 2};
      double worst = 0.0;
      for (std::size_t k = 0; k < 4; ++k) {
        const double e = s.state(kWignerLabels[k]).energy;
        row.values.push_back(e);
        worst = std::max(worst, std::abs(e - expected[k]));
      }
      row.values.push_back(worst);
    }
  }
  return row;
}

/// Evaluates every grid point concurrently; rows come back in grid order.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, const Parameters& base, const Tolerances& tol = {}) {
  spec.validate(base.hbar);
  const unsigned workers = std::max(1U, std::thread::hardware_concurrency());
  std::vector<SweepRow> rows(static_cast<std::size_t>(spec.steps));
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (int k = static_cast<int>(w); k < spec.steps; k += static_cast<int>(workers)) {
        rows[static_cast<std::size_t>(k)] = sweep_point(spec, base, spec.point(k), tol);
      }
    }));
  }
  for (auto& j : jobs) j.get();
  return rows;
}

inline std::string format_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

inline void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  out << "c_over_hbar,d_over_hbar";
  for (const auto& c : sweep_columns(spec)) out << ',' << c;
  out << '\n';
  for (const auto& r : rows) {
    out << format_g12(r.c_over_hbar) << ',' << format_g12(r.d_over_hbar);
    for (double v : r.values) out << ',' << format_g12(v);
    out << '\n';
  }
}

}  // namespace fermidq
