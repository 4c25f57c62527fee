#include <catch2/catch_amalgamated.hpp>

#include "opcal/base.hpp"
#include "opcal/rational.hpp"

using namespace opcal;

TEST_CASE("tensor products are row-major with the last factor fastest") {
  BaseObject x(Base::FINSET, {"x0", "x1"});
  BaseObject y(Base::FINSET, {"y0", "y1", "y2"});
  BaseObject t = tensor(x, y);
  REQUIRE(t.size() == 6);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(t.label(i * 3 + j) == "(x" + std::to_string(i) + ",y" + std::to_string(j) + ")");
  CHECK(tensor_index({x, y}, {1, 2}) == 5);
  auto back = tensor_unindex({x, y}, 5);
  CHECK(back == std::vector<std::size_t>{1, 2});
}

TEST_CASE("product objects agree with explicit label enumeration") {
  BaseObject x(Base::FINSET, {"a", "b"});
  BaseObject y(Base::FINSET, {"c", "d"});
  BaseObject prod = tensor(x, y);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < prod.size(); ++i) labels.push_back(prod.label(i));
  BaseObject flat(Base::FINSET, labels);
  CHECK(prod == flat);
  CHECK(prod.index_of("(b,c)") == 2);
  CHECK(tensor_many({}, Base::FINSET) == BaseObject::unit(Base::FINSET));
}

TEST_CASE("coproduct tags labels and injections are jointly surjective") {
  BaseObject x(Base::FINSET, {"0", "1"});
  BaseObject y(Base::FINSET, {"p"});
  Coproduct cp = coproduct({{"left", x}, {"right", y}}, Base::FINSET);
  REQUIRE(cp.obj.size() == 3);
  CHECK(cp.obj.label(0) == "left::0");
  CHECK(cp.obj.label(2) == "right::p");
  CHECK(cp.injections.at("left").apply(1) == 1);
  CHECK(cp.injections.at("right").apply(0) == 2);
}

TEST_CASE("factor permutation sends slot i to slot sigma(i)") {
  BaseObject x(Base::FINSET, {"x0", "x1"});
  BaseObject y(Base::FINSET, {"y0", "y1", "y2"});
  Permutation swap({1, 0});
  BaseMorphism p = factor_permutation({x, y}, swap, Base::FINSET);
  // (x_i, y_j) goes to (y_j, x_i).
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(p.apply(i * 3 + j) == j * 2 + i);
  CHECK(p.is_invertible());
}

TEST_CASE("internal hom enumerates tables lexicographically") {
  BaseObject two(Base::FINSET, {"0", "1"});
  BaseObject hom = internal_hom(two, two);
  REQUIRE(hom.size() == 4);
  CHECK(hom.label(0) == "[0,0]");
  CHECK(hom.label(1) == "[0,1]");
  CHECK(hom.label(2) == "[1,0]");
  CHECK(hom.label(3) == "[1,1]");
  // Round trip between hom indices and tables.
  for (std::size_t h = 0; h < 4; ++h)
    CHECK(hom_index_from_table(two, two, hom_table_from_index(two, two, h)) == h);
}

TEST_CASE("evaluation and currying fit together") {
  BaseObject two(Base::FINSET, {"0", "1"});
  BaseObject three(Base::FINSET, {"a", "b", "c"});
  BaseMorphism ev = hom_evaluation(two, three);
  BaseObject hom = internal_hom(two, three);
  for (std::size_t h = 0; h < hom.size(); ++h) {
    auto table = hom_table_from_index(two, three, h);
    for (std::size_t i = 0; i < 2; ++i)
      CHECK(ev.apply(h * 2 + i) == table[i]);
  }
  // curry_last(uncurry_last(g)) = g for every g : front -> hom(last, tgt).
  for (const auto& g : all_functions(two, hom)) {
    BaseMorphism h = uncurry_last(g, {two}, three);
    BaseMorphism g2 = curry_last(h, {two}, two);
    CHECK(g == g2);
  }
}

TEST_CASE("all_functions has the right count and no duplicates") {
  BaseObject two(Base::FINSET, {"0", "1"});
  BaseObject three(Base::FINSET, {"a", "b", "c"});
  auto fns = all_functions(two, three);
  REQUIRE(fns.size() == 9);
  for (std::size_t i = 0; i < fns.size(); ++i)
    for (std::size_t j = i + 1; j < fns.size(); ++j)
      CHECK(!(fns[i] == fns[j]));
}

TEST_CASE("factoring through a surjection recovers the quotient map") {
  BaseObject four(Base::FINSET, {"a", "b", "c", "d"});
  BaseObject two(Base::FINSET, {"0", "1"});
  BaseMorphism s = BaseMorphism::finset(four, two, {0, 0, 1, 1});
  BaseMorphism t = BaseMorphism::finset(four, two, {1, 1, 0, 0});
  BaseMorphism u = factor_through_surjection(s, t);
  CHECK(u.after(s) == t);
}

TEST_CASE("rationals print and parse as p/q") {
  CHECK(rational_to_string(Rational(3, 4)) == "3/4");
  CHECK(rational_to_string(Rational(5)) == "5");
  CHECK(rational_from_string("3/4") == Rational(3, 4));
  CHECK(rational_from_string("-7/2") == Rational(-7, 2));
  CHECK(rational_from_string("5") == Rational(5));
}

TEST_CASE("vectq morphisms compose by matrix product") {
  BaseObject v(Base::VECTQ, {"e0", "e1"});
  Matrix a(2, 2);
  a(0, 1) = Rational(1);
  a(1, 0) = Rational(1, 2);
  BaseMorphism f = BaseMorphism::vectq(v, v, a);
  BaseMorphism g = f.after(f);
  CHECK(g.matrix()(0, 0) == Rational(1, 2));
  CHECK(g.matrix()(1, 1) == Rational(1, 2));
  CHECK(f.is_invertible());
  CHECK(f.inverse().after(f) == BaseMorphism::identity(v));
}

TEST_CASE("positional isomorphisms relate equal-size objects") {
  BaseObject a(Base::FINSET, {"x", "y"});
  BaseObject b(Base::FINSET, {"p", "q"});
  BaseMorphism iso = positional_iso(a, b);
  CHECK(iso.is_invertible());
  CHECK(iso.apply(0) == 0);
  CHECK(iso.apply(1) == 1);
}
