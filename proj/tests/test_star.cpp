#include <catch_amalgamated.hpp>

#include <random>

#include "fermidq/algebra_operator.hpp"
#include "fermidq/sampling.hpp"
#include "fermidq/star.hpp"

using namespace fermidq;
using Catch::Matchers::WithinAbs;

namespace {

bool same(const Element& a, const Element& b, double tol = 1e-12) { return distance(a, b) <= tol; }

SymmetricForm random_form(const Algebra& a, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = a->size();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) m(i, j) = m(j, i) = u(rng);
  }
  return SymmetricForm(a, m);
}

}  // namespace

TEST_CASE("symmetric forms reject bad input", "[star]") {
  const Algebra a = numbered_algebra("th", 2);
  Eigen::MatrixXd m(2, 2);
  m << 1, 0.5, 0.2, 1;
  CHECK_THROWS_AS(SymmetricForm(a, m), AlgebraError);
  CHECK_THROWS_AS(SymmetricForm(a, Eigen::MatrixXd::Identity(3, 3)), AlgebraError);
  CHECK_THROWS_AS(nac_form(a, 1.0, 0.1, 0.1), AlgebraError);
}

TEST_CASE("generator anticommutators reproduce the form", "[star][property]") {
  std::mt19937_64 rng(2);
  for (int n : {2, 3, 5}) {
    const Algebra a = numbered_algebra("x", n);
    const SymmetricForm form = random_form(a, rng);
    const StarProduct p(form);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Element anti = star_bracket(generator(a, i), generator(a, j), p, BracketMode::Anti);
        CHECK(same(anti, scalar(a, form(i, j)), 1e-14));
      }
    }
  }
}

TEST_CASE("star product is associative", "[star][property]") {
  std::mt19937_64 rng(3);
  const Algebra a = numbered_algebra("x", 5);
  const StarProduct p(random_form(a, rng));
  for (int k = 0; k < 40; ++k) {
    const Element f = random_element(a, rng, 6, 5);
    const Element g = random_element(a, rng, 6, 5);
    const Element h = random_element(a, rng, 6, 5);
    CHECK(same(star(star(f, g, p), h, p), star(f, star(g, h, p), p), 1e-11));
  }
}

TEST_CASE("zero form gives the pointwise product", "[star]") {
  std::mt19937_64 rng(4);
  const Algebra a = numbered_algebra("x", 4);
  const StarProduct p(SymmetricForm(a, Eigen::MatrixXd::Zero(4, 4)));
  for (int k = 0; k < 20; ++k) {
    const Element f = random_element(a, rng);
    const Element g = random_element(a, rng);
    CHECK(same(star(f, g, p), f * g));
  }
}

TEST_CASE("unit is neutral and star powers", "[star]") {
  const Algebra a = numbered_algebra("th", 4);
  const StarProduct p(nac_form(a, 1.0, 0.3, -0.2));
  const Element t1 = generator(a, 0);
  CHECK(same(star(one(a), t1, p), t1));
  CHECK(same(star(t1, one(a), p), t1));
  CHECK(same(star_power(t1, 0, p), one(a)));
  // th1 * th1 = hbar / 2
  CHECK(same(star_power(t1, 2, p), scalar(a, 0.5)));
}

TEST_CASE("oscillator Hamiltonian parts square to scalars", "[star]") {
  // c = d = hbar/2: h+ = 3/2, h- = 1/2, so H+*H+ = 9/16 and H-*H- = 1/16.
  const Algebra a = numbered_algebra("th", 4);
  const StarProduct p(nac_form(a, 1.0, 0.5, 0.5));
  const Complex k(0.0, -0.5);
  const Element hp = make_element(a, {{{"th1", "th3"}, k}, {{"th2", "th4"}, k}, {{"th1", "th4"}, k}, {{"th2", "th3"}, k}});
  const Element hm = make_element(a, {{{"th1", "th3"}, k}, {{"th2", "th4"}, k}, {{"th1", "th4"}, -k}, {{"th2", "th3"}, -k}});
  CHECK(same(star(hp, hp, p), scalar(a, 9.0 / 16.0)));
  CHECK(same(star(hm, hm, p), scalar(a, 1.0 / 16.0)));
  CHECK(same(star(hp, hm, p), hp * hm));
}

TEST_CASE("left and right multiplication operators", "[star]") {
  std::mt19937_64 rng(8);
  const Algebra a = numbered_algebra("th", 4);
  const StarProduct p(nac_form(a, 1.0, 0.4, 0.1));
  const Element f = random_element(a, rng);
  const Element g = random_element(a, rng);
  CHECK(same(mult_operator(f, p, Side::Left).apply(g), star(f, g, p)));
  CHECK(same(mult_operator(f, p, Side::Right).apply(g), star(g, f, p)));
  CHECK(same(from_coeff_vector(a, coeff_vector(f)), f));
}

TEST_CASE("star exponential", "[star]") {
  const Algebra a = numbered_algebra("th", 4);
  const StarProduct p(nac_form(a, 1.0, 0.2, 0.6));
  const Complex k(0.0, -1.0);
  const Element h = make_element(a, {{{"th1", "th3"}, k}, {{"th2", "th4"}, k}});
  const Element at0 = star_exponential(h, 0.0, 1.0, p);
  CHECK(at0.size() == 1);
  CHECK(at0.coefficient(0).value_or(0.0) == Complex(1.0, 0.0));
  for (double t : {0.3, 1.7, 4.0}) {
    CHECK(same(star_exponential(h, t, 1.0, p), star_exponential_series(h, t, 1.0, p, 60), 1e-11));
  }
  CHECK_THROWS_AS(star_exponential(h, 1.0, 0.0, p), DomainError);
}
