// Acceptance checks for the exact operad engine.  Each criterion prints one
// pass/fail line; the process exits nonzero if any criterion fails.
#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>

#include "opcal/algebra.hpp"
#include "opcal/coherence.hpp"
#include "opcal/compose.hpp"
#include "opcal/endomorphism.hpp"
#include "opcal/free_operad.hpp"
#include "opcal/operad.hpp"

#include "oracles.hpp"
#include "random_collections.hpp"

using namespace opcal;
using Clock = std::chrono::steady_clock;

namespace {

bool g_all_pass = true;

void report(int n, bool ok) {
  std::printf("criterion %d: %s\n", n, ok ? "pass" : "fail");
  std::fflush(stdout);
  g_all_pass = g_all_pass && ok;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Corolla one_color(std::size_t n, const std::string& c = "a") {
  return Corolla(std::vector<std::string>(n, c), c);
}

// The monoid ({0,1}, AND, unit 1) as an algebra over the order-word operad,
// and its commutative counterpart (the operation factor is a singleton).
AlgebraStructure and_monoid_algebra(const Operad& op, std::size_t bound) {
  AlgebraStructure a;
  a.op = op;
  a.bound = bound;
  a.carrier.base = Base::FINSET;
  a.carrier.colors = {"a"};
  a.carrier.values.emplace("a", BaseObject(Base::FINSET, {"0", "1"}));
  const BaseObject& m = a.carrier.at("a");
  for (std::size_t k = 0; k <= bound; ++k) {
    Corolla c = one_color(k);
    std::vector<BaseObject> fac = a.action_domain_factors(c);
    BaseObject dom = tensor_many(fac, Base::FINSET);
    if (dom.is_initial()) continue;
    std::vector<std::size_t> fn(dom.size());
    for (std::size_t i = 0; i < dom.size(); ++i) {
      auto idx = tensor_unindex(fac, i);
      std::size_t prod = 1;
      for (std::size_t j = 0; j < k; ++j) prod &= idx[j];
      fn[i] = m.index_of(prod ? "1" : "0");
    }
    a.set_action(c, BaseMorphism::finset(dom, m, std::move(fn)));
  }
  return a;
}

Collection random_single_color(std::mt19937& rng, Base base) {
  for (;;) {
    Collection c = opcal_test::random_reduced(rng, base);
    if (c.colors().size() == 1) return c;
  }
}

void criterion1() {
  auto t0 = Clock::now();
  bool ok = true;
  Operad com = commutative_operad({"a"}, Base::FINSET, 6);
  ComposedCollection cc(com.carrier, com.carrier, 6, false);
  for (std::size_t n = 0; n <= 6 && ok; ++n)
    for (std::size_t m = 0; m <= 6 && ok; ++m)
      ok = cc.piece(one_color(n), m).colim.obj.size() == oracle::com_compose_grade(n, m);
  ok = ok && seconds_since(t0) < 10.0;
  report(1, ok);
}

void criterion2() {
  bool ok = true;
  Operad comq = commutative_operad({"a"}, Base::VECTQ, 6);
  ComposedCollection cq(comq.carrier, comq.carrier, 6, false);
  for (std::size_t n = 0; n <= 6 && ok; ++n)
    for (std::size_t m = 0; m <= 6 && ok; ++m)
      ok = cq.piece(one_color(n), m).colim.obj.size() == oracle::com_compose_grade(n, m);
  Operad assocq = associative_operad(Base::VECTQ, 4);
  ComposedCollection aq(assocq.carrier, assocq.carrier, 4, false);
  for (std::size_t n = 0; n <= 4 && ok; ++n)
    for (std::size_t m = 0; m <= 4 && ok; ++m)
      ok = aq.piece(one_color(n), m).colim.obj.size() == oracle::assoc_compose_grade(n, m);
  Operad assocf = associative_operad(Base::FINSET, 4);
  ComposedCollection af(assocf.carrier, assocf.carrier, 4, false);
  for (std::size_t n = 0; n <= 4 && ok; ++n)
    for (std::size_t m = 0; m <= 4 && ok; ++m)
      ok = af.piece(one_color(n), m).colim.obj.size() == oracle::assoc_compose_grade(n, m);
  report(2, ok);
}

void criterion3() {
  auto t0 = Clock::now();
  bool ok = true;
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20 && ok; ++trial) {
    Base base = (trial % 2) ? Base::VECTQ : Base::FINSET;
    Collection phi = opcal_test::random_reduced(rng, base);
    CollectionMap lu = left_unit_iso(phi, 3);
    CollectionMap ru = right_unit_iso(phi, 3);
    CollectionMap ai = associativity_iso(phi, phi, phi, 3);
    for (const auto& c : lu.src.support_corollas()) ok = ok && lu.component(c).is_invertible();
    for (const auto& c : ru.src.support_corollas()) ok = ok && ru.component(c).is_invertible();
    for (const auto& c : ai.src.support_corollas()) ok = ok && ai.component(c).is_invertible();
  }
  ok = ok && seconds_since(t0) < 60.0;
  report(3, ok);
}

void criterion4() {
  bool ok = true;
  for (std::size_t s = 1; s <= 3 && ok; ++s) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < s; ++i) labels.push_back("g" + std::to_string(i));
    ColorFamily gens{Base::FINSET, {"a"}, {{"a", BaseObject(Base::FINSET, labels)}}};
    FreeAlgebra fa(associative_operad(Base::FINSET, 5), gens, 5);
    FreeAlgebra fc(commutative_operad({"a"}, Base::FINSET, 5), gens, 5);
    for (std::size_t n = 0; n <= 5 && ok; ++n)
      ok = fa.grade_size("a", n) == oracle::word_count(s, n) &&
           fc.grade_size("a", n) == oracle::multiset_count(s, n);
  }
  report(4, ok);
}

void criterion5() {
  bool ok = true;
  Operad assoc2 = associative_operad(Base::FINSET, 2);
  Operad com2 = commutative_operad({"a"}, Base::FINSET, 2);
  Operad triv2 = trivial_operad({"a"}, Base::FINSET, 2);
  ColorFamily onept{Base::FINSET, {"a"}, {{"a", BaseObject(Base::FINSET, {"m"})}}};
  ColorFamily none{Base::FINSET, {"a"}, {{"a", BaseObject::initial(Base::FINSET)}}};
  AlgebraStructure am = and_monoid_algebra(assoc2, 2);
  AlgebraStructure ca = and_monoid_algebra(com2, 2);
  AlgebraStructure ta = terminal_algebra(triv2, 2);
  AlgebraStructure tc = terminal_algebra(com2, 2);
  ok = ok && adjunction_bijection(assoc2, onept, am, 2).bijective;
  ok = ok && adjunction_bijection(assoc2, none, am, 2).bijective;
  ok = ok && adjunction_bijection(com2, onept, ca, 2).bijective;
  ok = ok && adjunction_bijection(com2, none, ca, 2).bijective;
  ok = ok && adjunction_bijection(triv2, onept, ta, 2).bijective;
  ok = ok && adjunction_bijection(com2, onept, tc, 2).bijective;
  report(5, ok);
}

void criterion6() {
  bool ok = true;
  ColorFamily two{Base::FINSET, {"a"}, {{"a", BaseObject(Base::FINSET, {"0", "1"})}}};
  ColorFamily onept{Base::FINSET, {"a"}, {{"a", BaseObject(Base::FINSET, {"m"})}}};
  Operad com3 = commutative_operad({"a"}, Base::FINSET, 3);
  CorrespondenceReport cr = algebra_map_correspondence(com3, two, 3);
  ok = ok && cr.operad_map_count == 4 && cr.algebra_structure_count == 4 && cr.bijective;
  ok = ok && algebra_map_correspondence(associative_operad(Base::FINSET, 2), two, 2).bijective;
  ok = ok && algebra_map_correspondence(trivial_operad({"a"}, Base::FINSET, 2), two, 2).bijective;
  ok = ok &&
       algebra_map_correspondence(commutative_operad({"a"}, Base::FINSET, 2), onept, 2).bijective;
  report(6, ok);
}

void criterion7() {
  bool ok = true;
  std::mt19937 rng(7);
  ColorMap i{{"a"}, {"a", "b"}, {{"a", "a"}}};
  for (int trial = 0; trial < 10 && ok; ++trial) {
    Collection phi = random_single_color(rng, Base::FINSET);
    Collection psi = random_single_color(rng, Base::FINSET);
    ok = ok && pushforward_monoidal_comparison(i, phi, psi, 3, 3).invertible;
  }
  // A non-injective color map mixes middle colors across preimages.
  Collection phi(Base::FINSET, {"u", "v"});
  phi.set_value(Corolla({"u"}, "u"), BaseObject(Base::FINSET, {"p", "q"}));
  phi.set_value(Corolla({"v"}, "v"), BaseObject(Base::FINSET, {"r", "s"}));
  Collection psi(Base::FINSET, {"u", "v"});
  psi.set_value(Corolla({"u"}, "u"), BaseObject(Base::FINSET, {"t"}));
  psi.set_value(Corolla({"v"}, "v"), BaseObject(Base::FINSET, {"w"}));
  ColorMap fold{{"u", "v"}, {"a"}, {{"u", "a"}, {"v", "a"}}};
  ComparisonReport rep = pushforward_monoidal_comparison(fold, phi, psi, 2, 2);
  Corolla ca({"a"}, "a");
  ok = ok && !rep.invertible && rep.map.src.value(ca).size() == 4 &&
       rep.map.dst.value(ca).size() == 8;
  // Injective pushforward is fully faithful: hom counts agree.
  std::array<Operad, 2> ops = {commutative_operad({"a"}, Base::FINSET, 2),
                               associative_operad(Base::FINSET, 2)};
  for (const Operad& o : ops)
    for (const Operad& p : ops)
      ok = ok && enumerate_operad_maps(o, p, 2).size() ==
                     enumerate_operad_maps(pushforward_operad(i, o), pushforward_operad(i, p), 2)
                         .size();
  report(7, ok);
}

void criterion8() {
  bool ok = true;
  std::mt19937 rng(8);
  for (int trial = 0; trial < 10 && ok; ++trial) {
    std::size_t sz = 1 + rng() % 3;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < sz; ++i) labels.push_back("m" + std::to_string(i));
    ColorFamily fam{Base::FINSET, {"a"}, {{"a", BaseObject(Base::FINSET, labels)}}};
    Collection m = embed_degree0(fam);
    Collection n = random_single_color(rng, Base::FINSET);
    Collection prod = compose_collections(m, n, 3, 3);
    for (const auto& c : prod.support_corollas()) ok = ok && c.arity() == 0;
  }
  report(8, ok);
}

void criterion9() {
  bool ok = true;
  const std::size_t cap = std::size_t{1} << 21;
  std::vector<std::vector<BaseObject>> small = {
      {BaseObject(Base::FINSET, {"0"})},
      {BaseObject(Base::FINSET, {"0", "1"})},
      {BaseObject(Base::FINSET, {"0"}), BaseObject(Base::FINSET, {"x", "y"})},
      {BaseObject(Base::FINSET, {"0", "1"}), BaseObject(Base::FINSET, {"x", "y"})},
  };
  std::vector<std::vector<BaseObject>> large = {
      {BaseObject::initial(Base::FINSET)},
      {BaseObject(Base::FINSET, {"0", "1", "2"})},
      {BaseObject(Base::FINSET, {"0", "1"}), BaseObject(Base::FINSET, {"x", "y", "z"})},
  };
  auto run = [&](const std::vector<BaseObject>& fam, std::size_t bound) {
    Operad cart = cartesian_operad(fam, bound, cap);
    Operad endf = endomorphism_operad(cartesian_family(fam), bound, cap);
    if (!operads_equal(cart, endf)) return false;
    // The nullary operations at each color are the elements of that set.
    ColorFamily cf = cartesian_family(fam);
    for (const auto& color : cf.colors)
      if (cart.carrier.value(Corolla({}, color)).size() != cf.at(color).size()) return false;
    return true;
  };
  for (const auto& fam : small) ok = ok && run(fam, 3);
  for (const auto& fam : large) ok = ok && run(fam, 2);
  report(9, ok);
}

void criterion10() {
  std::string wsfile = std::string(OPCAL_WORKSPACE_DIR) + "/basic.json";
  auto run_once = [&](int threads) -> std::string {
    std::string cmd = "OPCAL_THREADS=" + std::to_string(threads) + " " +
                      std::string(OPCAL_CLI_PATH) + " " + wsfile + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return "<popen failed>";
    std::string out;
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), got);
    int status = pclose(p);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return "<nonzero exit>";
    return out;
  };
  std::string base = run_once(1);
  bool ok = base.size() > 2 && base[0] != '<';
  for (int threads : {1, 4})
    for (int rep = 0; rep < 3 && ok; ++rep) ok = run_once(threads) == base;
  report(10, ok);
}

} // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  return g_all_pass ? 0 : 1;
}
