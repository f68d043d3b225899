#include <catch_amalgamated.hpp>

#include <random>

#include "fermidq/grassmann.hpp"
#include "fermidq/sampling.hpp"

using namespace fermidq;
using Catch::Matchers::WithinAbs;

namespace {

Algebra four() { return numbered_algebra("th", 4); }

bool same(const Element& a, const Element& b, double tol = 1e-12) { return distance(a, b) <= tol; }

}  // namespace

TEST_CASE("generator sets validate their labels", "[grassmann]") {
  CHECK_THROWS_AS(make_algebra({}), AlgebraError);
  CHECK_THROWS_AS(make_algebra({"a", "a"}), AlgebraError);
  CHECK_THROWS_AS(numbered_algebra("x", 17), AlgebraError);
  CHECK_NOTHROW(numbered_algebra("x", 16));
  const Algebra a = four();
  CHECK(a->dimension() == 16);
  CHECK(a->require("th3") == 2);
  CHECK_FALSE(a->index_of("pi1"));
  CHECK(same_algebra(a, four()));
  CHECK_FALSE(same_algebra(a, numbered_algebra("th", 3)));
}

TEST_CASE("monomial signs count inversions", "[grassmann]") {
  using namespace monomial;
  CHECK(merge_sign(bit(0), bit(1)) == 1);
  CHECK(merge_sign(bit(1), bit(0)) == -1);
  CHECK(merge_sign(bit(0), bit(0)) == 0);
  // th2 th3 * th1 = + th1 th2 th3 (two transpositions)
  CHECK(merge_sign(bit(1) | bit(2), bit(0)) == 1);
  const int seq[] = {2, 0, 1};
  CHECK(sequence_sign(seq) == 1);
  const int seq2[] = {1, 0};
  CHECK(sequence_sign(seq2) == -1);
  const int rep[] = {1, 1};
  CHECK(sequence_sign(rep) == 0);
}

TEST_CASE("construction sorts labels with the permutation sign", "[grassmann]") {
  const Algebra a = four();
  const Element x = make_element(a, {{{"th3", "th1"}, 2.0}});
  CHECK(x.coefficient(monomial::bit(0) | monomial::bit(2)).value_or(0.0) == Complex(-2.0));
  CHECK(make_element(a, {{{"th2", "th2"}, 1.0}}).is_zero());
  CHECK_THROWS_AS(make_element(a, {{{"pi1"}, 1.0}}), AlgebraError);
}

TEST_CASE("generators anticommute and square to zero", "[grassmann]") {
  const Algebra a = four();
  for (int i = 0; i < 4; ++i) {
    CHECK((generator(a, i) * generator(a, i)).is_zero());
    for (int j = 0; j < 4; ++j) {
      CHECK(same(generator(a, i) * generator(a, j), -(generator(a, j) * generator(a, i))));
    }
  }
}

TEST_CASE("pointwise product is associative and graded commutative", "[grassmann][property]") {
  std::mt19937_64 rng(11);
  const Algebra a = numbered_algebra("x", 6);
  for (int k = 0; k < 50; ++k) {
    const Element f = random_element(a, rng, 5, 6);
    const Element g = random_element(a, rng, 5, 6);
    const Element h = random_element(a, rng, 5, 6);
    CHECK(same((f * g) * h, f * (g * h)));
    const Element fo = random_element(a, rng, 4, 6, 1);
    const Element go = random_element(a, rng, 4, 6, 1);
    const Element fe = random_element(a, rng, 4, 6, 0);
    CHECK(same(fo * go, -(go * fo)));
    CHECK(same(fe * go, go * fe));
  }
}

TEST_CASE("parity classification", "[grassmann]") {
  const Algebra a = four();
  CHECK(parity(one(a)) == ParityClass::Even);
  CHECK(parity(generator(a, 0)) == ParityClass::Odd);
  CHECK(parity(one(a) + generator(a, 0)) == ParityClass::Mixed);
  CHECK(parity(Element(a)) == ParityClass::Even);
}

TEST_CASE("left and right derivatives", "[grassmann]") {
  const Algebra a = four();
  const Element t1 = generator(a, 0);
  const Element t2 = generator(a, 1);
  CHECK(same(derivative(t1, 0, Side::Left), one(a)));
  // th d<- th = -1
  CHECK(same(derivative(t1, 0, Side::Right), -one(a)));
  const Element t12 = t1 * t2;
  CHECK(same(derivative(t12, 1, Side::Left), -t1));
  CHECK(same(derivative(t12, 0, Side::Left), t2));
  // even element: right derivative equals the left one
  CHECK(same(derivative(t12, 0, Side::Right), t2));
  CHECK_THROWS_AS(derivative(t1, 7), AlgebraError);
}

TEST_CASE("left derivative obeys the graded Leibniz rule", "[grassmann][property]") {
  std::mt19937_64 rng(5);
  const Algebra a = numbered_algebra("x", 6);
  for (int k = 0; k < 40; ++k) {
    const int p = k % 2;
    const Element f = random_element(a, rng, 5, 5, p);
    const Element g = random_element(a, rng, 5, 5);
    const int i = k % 6;
    const Element lhs = derivative(f * g, i);
    const Element rhs = derivative(f, i) * g + (f * derivative(g, i)) * (p ? -1.0 : 1.0);
    CHECK(same(lhs, rhs));
  }
}

TEST_CASE("Berezin integration", "[grassmann]") {
  const Algebra a = four();
  const double hbar = 0.7;
  const int o1[] = {0};
  CHECK_THAT(body(berezin_integral(generator(a, 0), o1, hbar)).real(), WithinAbs(hbar, 1e-15));
  CHECK(berezin_integral(one(a), o1, hbar).is_zero());
  // rightmost differential acts first: int d1 d2 (th1 th2) = -hbar^2
  const int o12[] = {0, 1};
  const Element t12 = generator(a, 0) * generator(a, 1);
  CHECK_THAT(body(berezin_integral(t12, o12, hbar)).real(), WithinAbs(-hbar * hbar, 1e-15));
  const int o21[] = {1, 0};
  CHECK_THAT(body(berezin_integral(t12, o21, hbar)).real(), WithinAbs(hbar * hbar, 1e-15));
  const int dup[] = {1, 1};
  CHECK_THROWS_AS(berezin_integral(t12, dup, hbar), AlgebraError);
}

TEST_CASE("Hodge dual anchors", "[grassmann]") {
  const Algebra a = four();
  const Element top = make_element(a, {{{"th1", "th2", "th3", "th4"}, 1.0}});
  CHECK(same(hodge_dual(one(a)), top));
  CHECK(same(hodge_dual(top), one(a)));
  CHECK(same(hodge_dual(generator(a, 0)), make_element(a, {{{"th2", "th3", "th4"}, 1.0}})));
  CHECK(same(hodge_dual(generator(a, 1)), make_element(a, {{{"th1", "th3", "th4"}, -1.0}})));
  CHECK(same(hodge_dual(one(a), HodgeSign::Flipped), -top));

  // inside the subset {th2, th4}: th1 th2 -> th1 th4, 1 -> th2 th4
  const Mask sub = monomial::bit(1) | monomial::bit(3);
  CHECK(same(hodge_dual(make_element(a, {{{"th1", "th2"}, 1.0}}), sub), make_element(a, {{{"th1", "th4"}, 1.0}})));
  CHECK(same(hodge_dual(one(a), sub), make_element(a, {{{"th2", "th4"}, 1.0}})));
}

TEST_CASE("substitution and compression", "[grassmann]") {
  const Algebra a = four();
  const Algebra b = numbered_algebra("y", 2);
  std::vector<Element> images{generator(b, 1), generator(b, 0), Element(b), Element(b)};
  // th1 th2 -> y2 y1 = -y1 y2
  const Element r = substitute(generator(a, 0) * generator(a, 1), b, images);
  CHECK(same(r, -(generator(b, 0) * generator(b, 1))));

  const Mask keep = monomial::bit(0) | monomial::bit(2);
  const Algebra sub = sub_algebra(a, keep);
  CHECK(sub->name(1) == "th3");
  const Element c = compress(make_element(a, {{{"th1", "th3"}, 2.0}}), keep, sub);
  CHECK(same(c, generator(sub, 0) * generator(sub, 1) * 2.0));
  CHECK_THROWS_AS(compress(generator(a, 1), keep, sub), AlgebraError);
}

TEST_CASE("pruning drops negligible coefficients", "[grassmann]") {
  const Algebra a = four();
  Element x = generator(a, 0);
  x.add_term(monomial::bit(0), -1.0 + 1e-16);
  CHECK(x.is_zero());
  CHECK_THROWS_AS(x.add_term(Mask{1} << 5, 1.0), AlgebraError);
}
