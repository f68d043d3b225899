#include <catch_amalgamated.hpp>

#include <random>

#include "fermidq/fock.hpp"
#include "fermidq/sampling.hpp"
#include "fermidq/scenario.hpp"

using namespace fermidq;

namespace {

bool same(const Element& a, const Element& b, double tol = 1e-12) { return distance(a, b) <= tol; }

double mdist(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

const Complex I(0.0, 1.0);

}  // namespace

TEST_CASE("holomorphic transform round trip", "[fock]") {
  std::mt19937_64 rng(31);
  const Algebra a = numbered_algebra("th", 4);
  const HolomorphicPairing pairing{{{0, 2}, {1, 3}}};
  for (double hbar : {1.0, 0.35}) {
    for (int k = 0; k < 20; ++k) {
      const Element f = random_element(a, rng);
      const Element g = holomorphic_transform(f, pairing, hbar);
      CHECK(g.algebra()->name(1) == "etabar1");
      CHECK(same(inverse_holomorphic_transform(g, pairing, hbar, a), f));
    }
  }
  CHECK_THROWS_AS(holomorphic_transform(one(a), HolomorphicPairing{{{0, 0}}}, 1.0), AlgebraError);
  CHECK_THROWS_AS(holomorphic_transform(one(a), HolomorphicPairing{{{0, 1}, {1, 2}}}, 1.0), AlgebraError);
  CHECK_THROWS_AS(holomorphic_transform(generator(a, 3), HolomorphicPairing{{{0, 1}}}, 1.0), AlgebraError);
}

TEST_CASE("th1 th3 maps to -i hbar eta* eta", "[fock]") {
  const double hbar = 0.6;
  const Algebra a = numbered_algebra("th", 4);
  const Element g = holomorphic_transform(make_element(a, {{{"th1", "th3"}, 1.0}}), HolomorphicPairing{{{0, 2}}}, hbar);
  CHECK(same(g, make_element(g.algebra(), {{{"etabar1", "eta1"}, -I * hbar}})));
}

TEST_CASE("Weyl map of the number symbol", "[fock]") {
  const Algebra h = holomorphic_algebra(1);
  const Element n = make_element(h, {{{"etabar1", "eta1"}, 1.0}});
  const Eigen::MatrixXcd a = fock::annihilator(0, 1);
  const Eigen::MatrixXcd expected = a.adjoint() * a - 0.5 * fock::identity(1);
  CHECK(mdist(weyl_quantize(n), expected) < 1e-15);
  CHECK(mdist(weyl_quantize(one(h)), fock::identity(1)) < 1e-15);
  CHECK(mdist(weyl_quantize(generator(h, 0)), a) < 1e-15);
  CHECK(mdist(weyl_quantize(generator(h, 1)), a.adjoint()) < 1e-15);
}

TEST_CASE("Fock operators obey the CAR", "[fock]") {
  const int modes = 3;
  for (int i = 0; i < modes; ++i) {
    for (int j = 0; j < modes; ++j) {
      const Eigen::MatrixXcd ai = fock::annihilator(i, modes);
      const Eigen::MatrixXcd aj = fock::annihilator(j, modes);
      const Eigen::MatrixXcd anti = ai * aj.adjoint() + aj.adjoint() * ai;
      const Eigen::MatrixXcd expected = i == j ? fock::identity(modes) : Eigen::MatrixXcd::Zero(8, 8);
      CHECK(mdist(anti, expected) < 1e-15);
      CHECK((ai * aj + aj * ai).cwiseAbs().maxCoeff() < 1e-15);
    }
  }
}

TEST_CASE("Wigner kernel map agrees with the Weyl map", "[fock][property]") {
  std::mt19937_64 rng(37);
  for (int modes : {1, 2}) {
    const Algebra h = holomorphic_algebra(modes);
    for (int k = 0; k < 20; ++k) {
      const Element f = random_element(h, rng, 5, 2 * modes);
      const Eigen::MatrixXcd w = wigner_operator_map(f);
      CHECK(w.cwiseAbs().maxCoeff() > 1e-3);
      CHECK(mdist(w, weyl_quantize(f)) < 1e-12);
    }
  }
}

TEST_CASE("Clifford representation of the NAC star product", "[fock]") {
  std::mt19937_64 rng(41);
  const Algebra a = numbered_algebra("th", 4);
  const SymmetricForm form = nac_form(a, 0.9, 0.3, -0.5);
  const CliffordRep rep(form);
  CHECK(rep.dimension() == 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const Eigen::MatrixXcd anti = rep.thetas()[i] * rep.thetas()[j] + rep.thetas()[j] * rep.thetas()[i];
      CHECK(mdist(anti, Eigen::MatrixXcd::Identity(4, 4) * form(i, j)) < 1e-14);
    }
  }
  const StarProduct p(form);
  for (int k = 0; k < 20; ++k) {
    const Element f = random_element(a, rng);
    const Element g = random_element(a, rng);
    CHECK(mdist(rep.quantize(star(f, g, p)), rep.quantize(f) * rep.quantize(g)) < 1e-12);
    CHECK(same(rep.symbol_of_matrix(rep.quantize(f)), f, 1e-11));
  }
}

TEST_CASE("Clifford spectrum of H matches the oscillator energies", "[fock]") {
  const Algebra a = numbered_algebra("th", 4);
  const CliffordRep rep(nac_form(a, 1.0, 0.5, 0.5));
  const auto spec = real_spectrum(rep.quantize(oscillator_hamiltonian(a, 1.0)));
  const double expected[] = {1.0, 0.5, -0.5, -1.0};
  REQUIRE(spec.size() == 4);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(spec[k] - expected[k]) < 1e-12);
}

TEST_CASE("Clifford representation needs a positive-definite form", "[fock]") {
  const Algebra a = numbered_algebra("th", 2);
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(CliffordRep(SymmetricForm(a, m)), DomainError);
}
