#include <catch_amalgamated.hpp>

#include <random>

#include "fermidq/brackets.hpp"
#include "fermidq/sampling.hpp"

using namespace fermidq;

namespace {

bool same(const Element& a, const Element& b, double tol = 1e-12) { return distance(a, b) <= tol; }

const Complex I(0.0, 1.0);

}  // namespace

TEST_CASE("canonical Poisson bracket", "[brackets]") {
  const Algebra s = phase_space(2);
  const BracketTensor t = canonical_tensor(s);
  const Element th1 = generator(s, "th1");
  const Element pi1 = generator(s, "pi1");
  const Element pi2 = generator(s, "pi2");
  CHECK(same(poisson_bracket(th1, pi1, t), one(s)));
  CHECK(same(poisson_bracket(pi1, th1, t), one(s)));
  CHECK(poisson_bracket(th1, pi2, t).is_zero());
  CHECK(poisson_bracket(th1, th1, t).is_zero());
  CHECK_THROWS_AS(BracketTensor(s, Eigen::MatrixXcd::Identity(3, 3)), AlgebraError);
}

TEST_CASE("NAC constraint brackets", "[brackets]") {
  const double big_c = 1.2;
  const Algebra s = phase_space(4);
  const BracketTensor t = nac_tensor(s, big_c);
  const ConstraintSet chis = free_fermion_constraints(s);
  const auto& chi = chis.constraints;
  CHECK(same(poisson_bracket(chi[0], chi[0], t), scalar(s, I)));
  CHECK(same(poisson_bracket(chi[0], chi[1], t), scalar(s, -I * big_c / 4.0)));
  CHECK(same(poisson_bracket(chi[2], chi[3], t), scalar(s, -I * big_c / 4.0)));
  CHECK(poisson_bracket(chi[0], chi[2], t).is_zero());
  CHECK(same(poisson_bracket(generator(s, "th1"), chi[0], t), one(s)));
  CHECK(classify_constraints(chis, t) == ConstraintClass::SecondClass);
}

TEST_CASE("single free fermion has C = [i]", "[brackets]") {
  const Algebra s = phase_space(1);
  const ConstraintSet chis = free_fermion_constraints(s);
  const ConstraintMatrix cm(chis, canonical_tensor(s));
  REQUIRE(cm.second_class());
  CHECK(same(cm.matrix()[0][0], scalar(s, I)));
  CHECK(same(cm.inverse()[0][0], scalar(s, -I)));
}

TEST_CASE("first-class constraints are detected", "[brackets]") {
  const Algebra s = phase_space(1);
  const ConstraintSet pis({generator(s, "pi1")}, {"pi"});
  CHECK(classify_constraints(pis, canonical_tensor(s)) == ConstraintClass::FirstClassPresent);
  CHECK_THROWS_AS(constraint_matrix(pis, canonical_tensor(s)), ConstraintError);
  CHECK_THROWS_AS(DiracBracket(pis, canonical_tensor(s)), ConstraintError);
  CHECK_THROWS_AS(ConstraintSet({one(s)}, {}), ConstraintError);
}

TEST_CASE("Dirac matrix of the deformed oscillators", "[brackets]") {
  // Mechanical value: {th_a, th_b}_D = i/(1 - a^2) [[1, a], [a, 1]] per block, a = C/4.
  const double big_c = 2.0;
  const double a = big_c / 4.0;
  const Algebra s = phase_space(4);
  const DiracBracket db(free_fermion_constraints(s), nac_tensor(s, big_c));
  const Complex diag = I / (1.0 - a * a);
  CHECK(same(db(generator(s, 0), generator(s, 0)), scalar(s, diag)));
  CHECK(same(db(generator(s, 0), generator(s, 1)), scalar(s, diag * a)));
  CHECK(same(db(generator(s, 2), generator(s, 3)), scalar(s, diag * a)));
  CHECK(db(generator(s, 0), generator(s, 2)).is_zero());

  const Algebra coords = numbered_algebra("th", 4);
  const std::vector<int> surviving{0, 1, 2, 3};
  Eigen::MatrixXcd d;
  const SymmetricForm form = quantization_form(db, surviving, coords, 0.8, &d);
  CHECK(std::abs(d(0, 0) - diag) < 1e-12);
  CHECK(std::abs(form(0, 0) - 0.8) < 1e-12);
  CHECK(std::abs(form(0, 1) - 0.8 * a) < 1e-12);
  CHECK(std::abs(form(2, 3) - 0.8 * a) < 1e-12);
  CHECK(std::abs(form(0, 2)) < 1e-12);
}

TEST_CASE("Dirac bracket annihilates constraints", "[brackets][property]") {
  std::mt19937_64 rng(17);
  const Algebra s = phase_space(4);
  const ConstraintSet chis = free_fermion_constraints(s);
  const DiracBracket db(chis, nac_tensor(s, -0.7));
  for (int k = 0; k < 25; ++k) {
    const Element f = random_element(s, rng, 5, 4);
    for (const auto& chi : chis.constraints) {
      CHECK(max_abs(db(chi, f)) < 1e-12);
      CHECK(max_abs(db(f, chi)) < 1e-12);
    }
  }
}

TEST_CASE("Poisson bracket axioms on random homogeneous triples", "[brackets][property]") {
  std::mt19937_64 rng(23);
  const Algebra s = phase_space(3);
  Eigen::MatrixXcd m = canonical_tensor(s).matrix();
  m(0, 1) = m(1, 0) = Complex(0.0, 0.4);
  m(1, 2) = m(2, 1) = 0.3;
  const BracketTensor t(s, m);
  auto sgn = [](bool odd) { return odd ? -1.0 : 1.0; };
  for (int k = 0; k < 30; ++k) {
    const int ef = k % 2, eg = (k / 2) % 2, eh = (k / 4) % 2;
    const Element f = random_element(s, rng, 4, 3, ef);
    const Element g = random_element(s, rng, 4, 3, eg);
    const Element h = random_element(s, rng, 4, 3, eh);
    // (i)
    CHECK(same(poisson_bracket(f, g, t), poisson_bracket(g, f, t) * (-sgn(ef && eg))));
    // (ii)
    const Element leib = poisson_bracket(f, g, t) * h + (g * poisson_bracket(f, h, t)) * sgn(ef && eg);
    CHECK(same(poisson_bracket(f, g * h, t), leib));
    // (iii)
    const Element jac = poisson_bracket(poisson_bracket(f, g, t), h, t) +
                        poisson_bracket(poisson_bracket(g, h, t), f, t) * sgn((ef * (eg + eh)) % 2) +
                        poisson_bracket(poisson_bracket(h, f, t), g, t) * sgn((eh * (ef + eg)) % 2);
    CHECK(max_abs(jac) < 1e-12);
  }
}

TEST_CASE("strong substitution eliminates momenta", "[brackets]") {
  const Algebra s = phase_space(2);
  const Algebra coords = numbered_algebra("th", 2);
  const ConstraintSet chis = free_fermion_constraints(s);
  const std::vector<int> elim{2, 3};
  const auto images = strong_substitution(chis, elim, coords);
  // pi_a -> -(i/2) th_a
  CHECK(same(images[2], generator(coords, 0) * (-I / 2.0)));
  CHECK(same(images[3], generator(coords, 1) * (-I / 2.0)));
  const Element chi1 = substitute(chis.constraints[0], coords, images);
  CHECK(chi1.is_zero());
  const Element f = generator(s, "th1") * generator(s, "pi2");
  CHECK(same(substitute(f, coords, images), generator(coords, 0) * generator(coords, 1) * (-I / 2.0)));
}

TEST_CASE("time derivative uses the supplied bracket", "[brackets]") {
  const Algebra s = phase_space(1);
  const BracketTensor t = canonical_tensor(s);
  const Element h = generator(s, "th1") * generator(s, "pi1");
  auto pb = [&](const Element& f, const Element& g) { return poisson_bracket(f, g, t); };
  CHECK(same(classical_time_derivative(generator(s, "th1"), h, pb), poisson_bracket(generator(s, "th1"), h, t)));
}
