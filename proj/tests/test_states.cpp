#include <catch_amalgamated.hpp>

#include <numbers>

#include "fermidq/states.hpp"

using namespace fermidq;
using Catch::Matchers::WithinAbs;

namespace {

bool same(const Element& a, const Element& b, double tol = 1e-12) { return distance(a, b) <= tol; }

const Complex I(0.0, 1.0);

Element h_part(const Algebra& a, int sign) {
  const Complex k(0.0, -0.5);
  return make_element(a, {{{"th1", "th3"}, k}, {{"th2", "th4"}, k}, {{"th1", "th4"}, k * double(sign)},
                          {{"th2", "th3"}, k * double(sign)}});
}

Element wpp(const Algebra& a, double hbar, double c, double d) {
  const StarProduct p(nac_form(a, hbar, c, d));
  return star_genvalue_solve({h_part(a, 1), h_part(a, -1)}, p).at("++").projector;
}

}  // namespace

TEST_CASE("trace normalisation", "[states]") {
  const Algebra a = numbered_algebra("th", 4);
  CHECK_THAT(trace(one(a), 1.0).real(), WithinAbs(4.0, 1e-14));
  CHECK_THAT(trace(one(a), 0.5).real(), WithinAbs(4.0, 1e-14));
  CHECK_THAT(trace(wpp(a, 1.0, 0.3, 0.1), 1.0).real(), WithinAbs(1.0, 1e-14));
  CHECK_THAT(trace(wpp(a, 1.0, 0.3, 0.1), 1.0, HodgeSign::Flipped).real(), WithinAbs(-1.0, 1e-14));
  CHECK_THROWS_AS(trace(one(numbered_algebra("th", 3)), 1.0), DomainError);
}

TEST_CASE("bipartitions need even halves", "[states]") {
  const Algebra a = numbered_algebra("th", 4);
  CHECK_THROWS_AS(Bipartition::keeping(a, {"th1"}), DomainError);
  CHECK_NOTHROW(Bipartition::keeping(a, {"th1", "th3"}));
}

TEST_CASE("reduced states of W++ at c = d = hbar/2", "[states]") {
  // h+ = 3/2, h- = 1/2: W(1) = 1/2 - (4/3) i th1 th3, spectrum {7/6, -1/6}.
  const Algebra a = numbered_algebra("th", 4);
  const StarProduct p(nac_form(a, 1.0, 0.5, 0.5));
  const Bipartition b = Bipartition::keeping(a, {"th1", "th3"});
  const Element r = partial_trace(wpp(a, 1.0, 0.5, 0.5), b, 1.0);
  CHECK(r.algebra()->names() == std::vector<std::string>{"th1", "th3"});
  CHECK(same(r, make_element(r.algebra(), {{{}, 0.5}, {{"th1", "th3"}, -I * 4.0 / 3.0}})));

  const StarProduct kept(p.form().restricted(b.keep, r.algebra()));
  const auto spec = state_spectrum(r, kept, 1.0);
  REQUIRE(spec.size() == 2);
  CHECK_THAT(spec[0], WithinAbs(7.0 / 6.0, 1e-12));
  CHECK_THAT(spec[1], WithinAbs(-1.0 / 6.0, 1e-12));
  CHECK_THAT(entropy_abs(spec), WithinAbs(0.1187847, 1e-6));
  CHECK_THROWS_AS(von_neumann_entropy(spec), IndefiniteStateError);

  // S_2 = -ln(p1^2 + p2^2) = -ln(25/18), negative
  CHECK_THAT(renyi_entropy(r, 2.0, kept, 1.0), WithinAbs(-std::log(25.0 / 18.0), 1e-12));
  CHECK_THROWS_AS(renyi_entropy(r, 0.5, kept, 1.0), IndefiniteStateError);
  CHECK_THROWS_AS(renyi_entropy(r, 1.0, kept, 1.0), DomainError);
  CHECK_THAT(entanglement_entropy(wpp(a, 1.0, 0.5, 0.5), b, p, 1.0), WithinAbs(0.1187847, 1e-6));
}

TEST_CASE("undeformed reduced-state projectors", "[states]") {
  // c = d = 0: the eigenfunction of 1/2 - i th1 th3 is f = 1/2 - (i/hbar) th1 th3.
  const double hbar = 0.5;
  const Algebra a = numbered_algebra("th", 2);
  const StarProduct p(SymmetricForm(a, Eigen::MatrixXd::Identity(2, 2) * hbar));
  const Element f1 = make_element(a, {{{}, 0.5}, {{"th1", "th2"}, -I / hbar}});
  CHECK(same(star(f1, f1, p), f1));
  const SpectralResolution res = star_genvalue_solve({f1}, p);
  CHECK(res.size() == 2);
  CHECK(same(res.at("+").projector, f1));
  CHECK_THAT(trace(f1, hbar).real(), WithinAbs(1.0, 1e-14));
}

TEST_CASE("closed-form entropies", "[states]") {
  constexpr double ln2 = std::numbers::ln2;
  CHECK_THAT(closed_form_ep(WignerLabel::PP, 1.0, 0.0, 0.0), WithinAbs(0.0, 1e-15));
  CHECK_THAT(closed_form_ep(WignerLabel::PM, 1.0, 0.0, 0.0), WithinAbs(ln2, 1e-15));
  CHECK_THAT(closed_form_ep(WignerLabel::PP, 1.0, 0.5, 0.5), WithinAbs(0.1187847, 1e-6));
  for (double c : {-0.8, -0.3, 0.1, 0.55, 0.85}) {
    for (WignerLabel w : {WignerLabel::PP, WignerLabel::PM, WignerLabel::MP, WignerLabel::MM}) {
      CHECK_THAT(closed_form_ep_equal(w, 1.3, 1.3 * c), WithinAbs(closed_form_ep(w, 1.3, 1.3 * c, 1.3 * c), 1e-12));
      CHECK_THAT(closed_form_ep_opposite(w, 1.3, 1.3 * c), WithinAbs(closed_form_ep(w, 1.3, 1.3 * c, -1.3 * c), 1e-12));
    }
    CHECK_THAT(closed_form_ep(WignerLabel::PM, 1.0, c, -c), WithinAbs(ln2, 1e-12));
  }
  const auto [p1, p2] = closed_form_spectrum(WignerLabel::PP, 1.0, 0.5, 0.5);
  CHECK_THAT(p1, WithinAbs(7.0 / 6.0, 1e-15));
  CHECK_THAT(p2, WithinAbs(-1.0 / 6.0, 1e-15));
  CHECK_THROWS_AS(oscillator_scales(1.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(oscillator_scales(0.0, 0.0, 0.0), DomainError);
}
