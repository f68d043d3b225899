#include <catch_amalgamated.hpp>

#include <random>

#include "fermidq/expression.hpp"

using namespace fermidq;

namespace {

bool same(const Element& a, const Element& b, double tol = 1e-12) { return distance(a, b) <= tol; }

const Complex I(0.0, 1.0);

std::size_t error_column(const std::string& text) {
  try {
    parse_expression(text);
  } catch (const ParseError& e) {
    return e.column();
  }
  return 0;
}

Expr leaf(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_real_distribution<double> val(0.0, 10.0);
  std::uniform_int_distribution<int> gen(1, 4);
  switch (kind(rng)) {
    case 0: return Expr{Expr::Kind::Number, val(rng), {}, {}};
    case 1: return Expr{Expr::Kind::Imag, 0.0, {}, {}};
    case 2: return Expr{Expr::Kind::Param, 0.0, "hbar", {}};
    default: return Expr{Expr::Kind::Generator, 0.0, (gen(rng) % 2 ? "th" : "pi") + std::to_string(gen(rng)), {}};
  }
}

Expr random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, 4);
  const int k = depth == 0 ? 0 : pick(rng);
  if (k == 0) return leaf(rng);
  if (k == 1) return Expr{Expr::Kind::Neg, 0.0, {}, {random_expr(rng, depth - 1)}};
  const Expr::Kind bin[] = {Expr::Kind::Add, Expr::Kind::Sub, Expr::Kind::Mul};
  return Expr{bin[k - 2], 0.0, {}, {random_expr(rng, depth - 1), random_expr(rng, depth - 1)}};
}

}  // namespace

TEST_CASE("grammar examples parse", "[expression]") {
  for (const char* text : {"-i*omega/2", "th1*th2", "-(i*omega*0.5)*(th1*th3 + th2*th4)", "pi1 + (i*0.5)*th1",
                           "1.5e-3*C - hbar", "--th1", "th12"}) {
    const std::string s = text;
    if (s.find('/') != std::string::npos) {
      CHECK_THROWS_AS(parse_expression(s), ParseError);
    } else {
      CHECK_NOTHROW(parse_expression(s));
    }
  }
  const Expr e = parse_expression("th1 - th2 - th3");
  // left associative
  REQUIRE(e.kind == Expr::Kind::Sub);
  CHECK(e.args[0].kind == Expr::Kind::Sub);
  CHECK(e.args[1].name == "th3");
  const Expr m = parse_expression("th1 + th2*th3");
  CHECK(m.kind == Expr::Kind::Add);
  CHECK(m.args[1].kind == Expr::Kind::Mul);
}

TEST_CASE("parse errors carry a column", "[expression]") {
  CHECK(error_column("pi1 + (i/2)") == 9);
  CHECK(error_column("th1 *)") == 6);
  CHECK(error_column("foo") == 1);
  CHECK(error_column("th1 +") == 6);
  CHECK(error_column("(th1") == 5);
  CHECK(error_column("2x") == 2);
  CHECK(error_column("th0") == 1);
  CHECK(error_column("1e") == 3);
  CHECK(error_column("th1 th2") == 5);
}

TEST_CASE("printing round-trips the tree", "[expression][property]") {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 50; ++k) {
    const Expr e = random_expr(rng, 4);
    const std::string text = to_string(e);
    INFO(text);
    CHECK(parse_expression(text) == e);
  }
}

TEST_CASE("evaluation on the Grassmann algebra", "[expression]") {
  const Algebra a = numbered_algebra("th", 4);
  const Parameters prm{0.5, 2.0, 0.125, -0.25};
  CHECK(evaluate(parse_expression("th1*th1"), a, prm).is_zero());
  CHECK(same(evaluate(parse_expression("C"), a, prm), scalar(a, 1.0)));
  CHECK(same(evaluate(parse_expression("hbar*omega - d"), a, prm), scalar(a, 1.25)));
  const Element h = evaluate(parse_expression("-(i*omega*0.5)*(th1*th3 + th2*th4)"), a, prm);
  CHECK(same(h, make_element(a, {{{"th1", "th3"}, -I}, {{"th2", "th4"}, -I}})));
  CHECK_THROWS_AS(evaluate(parse_expression("pi1"), a, prm), AlgebraError);

  const StarProduct p(nac_form(a, prm.hbar, prm.c, prm.d));
  CHECK(same(evaluate(parse_expression("th1*th1"), a, prm, &p), scalar(a, prm.hbar / 2)));
  CHECK(same(evaluate(parse_expression("th1*th2 + th2*th1"), a, prm, &p), scalar(a, prm.c)));
}

TEST_CASE("generator extent per family", "[expression]") {
  const auto ext = generator_extent(parse_expression("th3*pi2 + th1"));
  CHECK(ext.at("th") == 3);
  CHECK(ext.at("pi") == 2);
  CHECK(generator_extent(parse_expression("hbar")).empty());
}
