#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pcmk/io.hpp"

#include <filesystem>
#include <fstream>

using namespace pcmk;
namespace fs = std::filesystem;

namespace {

const fs::path fixtures = PCMK_FIXTURES_DIR;

Domain nat() {
  static Domain d = make_domain(free_monoid(1));
  return d;
}

json parse(const char* s) { return json::parse(s); }

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("pcmk_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("finite monoid files") {
  Monoid m = monoid_from_json(parse(R"({"kind":"finite","elements":["1","t","t^2","*"],"one":"1","zero":"*",
                                       "table":{"t,t":"t^2","t,t^2":"*","t^2,t^2":"*"}})"));
  REQUIRE(std::holds_alternative<FiniteMonoid>(m));
  CHECK(isomorphic(std::get<FiniteMonoid>(m), truncated_polynomial(3)));
  CHECK(equivalent(m, monoid_from_json(monoid_to_json(m))));

  // Symmetric entries may be given twice when they agree.
  CHECK_NOTHROW(monoid_from_json(parse(R"({"kind":"finite","elements":["1","g","*"],"one":"1","zero":"*",
                                           "table":{"g,g":"1","1,g":"g","g,1":"g"}})")));
  CHECK(equivalent(monoid_from_json(parse(R"({"kind":"finite","elements":["1","g","*"],"one":"1","zero":"*","table":{"g,g":"1"}})")),
                   finite_group_monoid({2})));
}

TEST_CASE("malformed and invalid monoid files") {
  CHECK_THROWS_AS(monoid_from_json(parse(R"({"kind":"finite","elements":["1","t","*"],"one":"1","zero":"*","table":{}})")),
                  parse_error);
  CHECK_THROWS_AS(monoid_from_json(parse(R"({"kind":"finite","elements":["1","*"],"one":"1","zero":"z","table":{}})")),
                  parse_error);
  CHECK_THROWS_AS(monoid_from_json(parse(R"({"kind":"ring"})")), parse_error);
  CHECK_THROWS_AS(monoid_from_json(parse(R"({"kind":"affine","dim":2,"generators":[[1,0],[1]]})")), parse_error);
  CHECK_THROWS_AS(monoid_from_json(parse(R"({"kind":"affine","dim":"two","generators":[]})")), parse_error);
  // Conflicting entries and a non-associative table.
  CHECK_THROWS_AS(monoid_from_json(parse(R"({"kind":"finite","elements":["1","a","b","*"],"one":"1","zero":"*",
                                             "table":{"a,b":"a","b,a":"b","a,a":"a","b,b":"b"}})")),
                  invalid_monoid_error);
  CHECK_THROWS_AS(monoid_from_json(parse(R"({"kind":"finite","elements":["1","a","b","*"],"one":"1","zero":"*",
                                             "table":{"a,a":"b","a,b":"a","b,b":"*"}})")),
                  invalid_monoid_error);
  CHECK_THROWS_AS(monoid_from_json(parse(R"({"kind":"finite","elements":["1","*"],"one":"1","zero":"*","table":{"1,*":"1"}})")),
                  invalid_monoid_error);

  fs::path dir = scratch("bad_json");
  std::ofstream(dir / "m.json") << "{\"kind\": \"finite\", ";
  CHECK_THROWS_AS(load_monoid(dir / "m.json"), parse_error);
  CHECK_THROWS_AS(load_monoid(dir / "missing.json"), parse_error);
}

TEST_CASE("affine monoid files") {
  Monoid m = monoid_from_json(parse(R"({"kind":"affine","dim":2,"generators":[[1,0],[1,1],[1,2]],
                                       "units":{"free_rank":0,"torsion":[]},"ideal":[]})"));
  const auto& a = std::get<AffineMonoid>(m);
  CHECK(a.dim == 2);
  CHECK(a.generator_count() == 3);
  CHECK(class_group(a) == AbelianGroup::cyclic(2));
  CHECK(equivalent(m, monoid_from_json(monoid_to_json(m))));

  Monoid u = monoid_from_json(parse(R"({"kind":"affine","dim":1,"generators":[[1]],"units":{"free_rank":1,"torsion":[2,3]}})"));
  CHECK(std::get<AffineMonoid>(u).units == UnitGroup::from_orders(1, {6}));

  Monoid q = monoid_from_json(parse(R"({"kind":"affine","dim":1,"generators":[[1]],"ideal":[[3]]})"));
  auto f = finite_form(q);
  REQUIRE(f.has_value());
  CHECK(isomorphic(*f, truncated_polynomial(3)));
}

TEST_CASE("built-in monoid ids") {
  CHECK(equivalent(*builtin_monoid("F1"), field_with_one()));
  CHECK(equivalent(*builtin_monoid("N"), free_monoid(1)));
  CHECK(equivalent(*builtin_monoid("N^3"), free_monoid(3)));
  CHECK(equivalent(*builtin_monoid("N/(t^4)"), truncated_polynomial(4)));
  CHECK(equivalent(*builtin_monoid("(Z/2xZ/3)+"), finite_group_monoid({2, 3})));
  CHECK(equivalent(*builtin_monoid("(Z/2)+^N"), free_monoid(1, UnitGroup::from_orders(0, {2}))));
  CHECK(equivalent(*builtin_monoid("(Z/2)+^N^2"), free_monoid(2, UnitGroup::from_orders(0, {2}))));
  CHECK_FALSE(builtin_monoid("Q").has_value());
  CHECK_FALSE(builtin_monoid("N^").has_value());
}

TEST_CASE("A-set files") {
  FiniteASet x = aset_from_json(parse(R"({"elements":["a","*","b"],"base":"*","action":{"t":{"a":"*","b":"a"}}})"), nat());
  CHECK(x.names[0] == "*");
  CHECK(isomorphic(x, make_aset(nat(), {"*", "x1", "x2"}, {{0, 0, 1}})));
  CHECK(isomorphic(x, aset_from_json(aset_to_json(x, "N"), nat())));
  CHECK(aset_to_json(x, "N")["monoid"] == "N");

  // Unlisted elements are fixed.
  FiniteASet fixed = aset_from_json(parse(R"({"elements":["*","p"],"action":{}})"), nat());
  CHECK(fixed.act(0, 1) == 1);

  CHECK_THROWS_AS(aset_from_json(parse(R"({"elements":["*","a"],"base":"z"})"), nat()), parse_error);
  CHECK_THROWS_AS(aset_from_json(parse(R"({"elements":["*","a","a"]})"), nat()), parse_error);
  CHECK_THROWS_AS(aset_from_json(parse(R"({"elements":["*","a"],"action":{"t":{"a":"q"}}})"), nat()), parse_error);
  CHECK_THROWS_AS(aset_from_json(parse(R"({"elements":["*","a"],"action":{"s":{"a":"*"}}})"), nat()), invalid_action_error);
  // The basepoint must be fixed.
  CHECK_THROWS_AS(aset_from_json(parse(R"({"elements":["*","a"],"action":{"t":{"*":"a"}}})"), nat()), invalid_action_error);
  // g^2 = 1 fails for a 3-cycle.
  Domain g2 = make_domain(finite_group_monoid({2}));
  CHECK_THROWS_AS(aset_from_json(parse(R"({"elements":["*","a","b","c"],"action":{"g1":{"a":"b","b":"c","c":"a"}}})"), g2),
                  invalid_action_error);
}

TEST_CASE("predicate files") {
  auto t = predicate_from_json(parse(R"({"kind":"torsion","mult_set":["t"]})"), nat());
  CHECK(t.kind == SerrePredicate::Kind::torsion);
  auto s = predicate_from_json(parse(R"j({"kind":"support_in","primes":["(t)"]})j"), nat());
  auto fl = predicate_from_json(parse(R"({"kind":"finite_length"})"), nat());
  auto e = predicate_from_json(parse(R"({"kind":"explicit","objects":[{"elements":["*"]}]})"), nat());
  for (const auto& x : enumerate_asets(nat(), 4)) {
    CHECK(contains(t, x) == contains(s, x));
    CHECK(contains(e, x) == (x.size() == 1));
    for (const auto& c : {t, s, fl, e}) CHECK(contains(c, x) == contains(predicate_from_json(predicate_to_json(c), nat()), x));
  }
  CHECK_THROWS_AS(predicate_from_json(parse(R"({"kind":"torsion"})"), nat()), parse_error);
  CHECK_THROWS_AS(predicate_from_json(parse(R"({"kind":"everything"})"), nat()), parse_error);
}

TEST_CASE("category specs and unit specs") {
  CatSpec s = catspec_from_json(parse(R"({"monoid":"N","max_size":3,"filter":"pc"})"));
  CHECK(s.objects.size() == 4);  // rooted trees with at most 3 nodes
  for (const auto& x : s.objects) CHECK(is_rooted_tree(x));
  CatSpec over = catspec_from_json(parse(R"({"monoid":"N","max_size":5})"), {}, 2);
  CHECK(over.max_size == 2);
  CHECK(over.objects.size() == 3);
  CHECK_THROWS_AS(catspec_from_json(parse(R"({"monoid":"N"})")), parse_error);
  CHECK_THROWS_AS(catspec_from_json(parse(R"({"monoid":"N","max_size":2,"filter":"odd"})")), parse_error);

  CHECK(units_from_json(parse(R"({"torsion":[2,2]})")) == UnitGroup::from_orders(0, {2, 2}));
  CHECK(units_from_json(parse(R"({"free_rank":0,"torsion":[]})")).trivial());
  CHECK_THROWS_AS(units_from_json(parse(R"({"torsion":[0]})")), parse_error);
  CHECK_THROWS_AS(units_from_json(parse(R"({"free_rank":-1})")), parse_error);
}

TEST_CASE("report JSON") {
  CHECK(group_to_json(AbelianGroup::integers(1)) == parse(R"({"free_rank":1})"));
  CHECK(group_to_json(AbelianGroup::cyclic(2)) == parse(R"({"torsion":[2]})"));
  CHECK(group_to_json(AbelianGroup::zero()) == parse(R"({"free_rank":0})"));
  CHECK(group_to_json(direct_sum(AbelianGroup::integers(2), AbelianGroup::cyclic(6))) == parse(R"({"free_rank":2,"torsion":[6]})"));

  LatticeMatrix g(2, 3);
  g << 1, 1, 1, 0, 1, 2;
  json r = to_json(coniveau_k0_report(affine_monoid(g)));
  CHECK(r["graded"] == parse(R"([{"free_rank":1},{"torsion":[2]},{"free_rank":0}])"));
  CHECK(r["conclusion"] == "Z+Z/2");

  json d = to_json(dvm_report(UnitGroup{}));
  CHECK(d["k1_prime"] == parse(R"({"torsion":[2]})"));
  CHECK(d["d1"] == parse("[[1, 0]]"));
}

TEST_CASE("bundled fixtures parse, validate and round-trip") {
  FixtureReport r = check_fixtures(fixtures);
  for (const auto& p : r.problems) MESSAGE(p);
  CHECK(r.ok());
  CHECK(r.files >= 25);

  Domain d = aset_domain(fixtures / "asets" / "rooted_tree.json");
  CHECK(is_pc_aset(load_aset(fixtures / "asets" / "rooted_tree.json", d)));
  CHECK_FALSE(is_pc_aset(load_aset(fixtures / "asets" / "loop.json", nat())));
  Domain g2 = aset_domain(fixtures / "asets" / "z2_cosets.json");
  CHECK(is_free_gamma_set(load_aset(fixtures / "asets" / "z2_cosets.json", g2)));
  CHECK(equivalent(load_monoid(fixtures / "monoids" / "n_mod_t3.json"), truncated_polynomial(3)));
}

TEST_CASE("an injected table typo is detected") {
  fs::path dir = scratch("typo");
  fs::create_directories(dir / "monoids");
  json m = read_json_file(fixtures / "monoids" / "n_mod_t3.json");
  m["table"]["t,t^2"] = "t";
  std::ofstream(dir / "monoids" / "n_mod_t3.json") << m.dump();
  FixtureReport r = check_fixtures(dir);
  CHECK(r.files == 1);
  CHECK_FALSE(r.ok());
}
