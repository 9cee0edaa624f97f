#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pcmk/serre.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

using namespace pcmk;

namespace {

std::size_t U(int i) { return static_cast<std::size_t>(i); }
bool has(Mask m, int i) { return ((m >> i) & 1U) != 0; }

Domain nat() {
  static Domain d = make_domain(free_monoid(1));
  return d;
}

Domain nat2() {
  static Domain d = make_domain(free_monoid(2));
  return d;
}

Domain idem() {
  static Domain d = make_domain(cyclic_with_tail(2, 1));
  return d;
}

FiniteASet nset(std::vector<int> succ) {
  std::vector<std::string> names{"*"};
  for (std::size_t i = 1; i < succ.size(); ++i) names.push_back("x" + std::to_string(i));
  return make_aset(nat(), names, {succ});
}

const std::vector<FiniteASet>& nat_corpus(int n) {
  static std::map<int, std::vector<FiniteASet>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, enumerate_asets(nat(), n)).first;
  return it->second;
}

// Torsion over N by iterating t at most |X| times.
bool brute_torsion(const FiniteASet& x) {
  for (int e = 1; e < x.size(); ++e) {
    int v = e;
    for (int k = 0; k < x.size() && v != 0; ++k) v = x.act(0, v);
    if (v != 0) return false;
  }
  return true;
}

// Naive colimit of Hom(X', Y/Y') over all admissible windows: classes of (window, hom)
// under the equivalence generated by one-step refinement.
struct NaiveColimit {
  std::size_t classes = 0;
  std::map<std::pair<std::size_t, std::vector<int>>, std::size_t> class_of;
};

NaiveColimit naive_colimit(const FiniteASet& x, const FiniteASet& y, const std::function<bool(const FiniteASet&)>& in_c) {
  std::vector<Mask> subs, kers;
  for (Mask m : subobjects(x)) {
    // X/X' as an A-set: X' collapsed to the basepoint.
    std::vector<int> idx(U(x.size()), 0);
    std::vector<std::string> names{"*"};
    for (int e = 0; e < x.size(); ++e)
      if (!has(m, e)) {
        idx[U(e)] = static_cast<int>(names.size());
        names.push_back(x.names[U(e)]);
      }
    std::vector<Transformation> act(x.action.size(), Transformation(names.size(), 0));
    for (std::size_t g = 0; g < x.action.size(); ++g)
      for (int e = 0; e < x.size(); ++e)
        if (!has(m, e)) act[g][U(idx[U(e)])] = idx[U(x.action[g][U(e)])];
    if (in_c(make_aset(x.domain, names, act))) subs.push_back(m);
  }
  for (Mask m : subobjects(y)) {
    std::vector<int> idx(U(y.size()), -1);
    std::vector<std::string> names;
    for (int e = 0; e < y.size(); ++e)
      if (has(m, e)) {
        idx[U(e)] = static_cast<int>(names.size());
        names.push_back(y.names[U(e)]);
      }
    std::vector<Transformation> act(y.action.size(), Transformation(names.size(), 0));
    for (std::size_t g = 0; g < y.action.size(); ++g)
      for (int e = 0; e < y.size(); ++e)
        if (has(m, e)) act[g][U(idx[U(e)])] = idx[U(y.action[g][U(e)])];
    if (in_c(make_aset(y.domain, names, act))) kers.push_back(m);
  }
  struct Node {
    Mask s, k;
    std::vector<int> f;  // over X, -1 outside s, Y values reduced by k
  };
  std::vector<Node> nodes;
  std::vector<std::pair<Mask, Mask>> windows;
  for (Mask s : subs)
    for (Mask k : kers) {
      windows.push_back({s, k});
      // All equivariant maps s -> Y/k, by brute force over Y values.
      std::vector<int> dom, cod{0};
      for (int e = 0; e < x.size(); ++e)
        if (has(s, e)) dom.push_back(e);
      for (int e = 1; e < y.size(); ++e)
        if (!has(k, e)) cod.push_back(e);
      std::vector<std::size_t> pick(dom.size(), 0);
      while (true) {
        std::vector<int> f(U(x.size()), -1);
        for (std::size_t i = 0; i < dom.size(); ++i) f[U(dom[i])] = cod[pick[i]];
        bool ok = f[0] == 0;
        for (std::size_t g = 0; g < x.action.size() && ok; ++g)
          for (int e : dom) {
            int w = y.action[g][U(f[U(e)])];
            if (has(k, w)) w = 0;
            if (f[U(x.action[g][U(e)])] != w) {
              ok = false;
              break;
            }
          }
        if (ok) nodes.push_back({s, k, f});
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == cod.size()) pick[i++] = 0;
        if (i == pick.size()) break;
      }
    }
  std::vector<std::size_t> parent(nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
  std::map<std::tuple<Mask, Mask, std::vector<int>>, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index[{nodes[i].s, nodes[i].k, nodes[i].f}] = i;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (auto [s2, k2] : windows) {
      if ((s2 & ~nodes[i].s) != 0 || (nodes[i].k & ~k2) != 0) continue;
      std::vector<int> f(U(x.size()), -1);
      for (int e = 0; e < x.size(); ++e)
        if (has(s2, e)) f[U(e)] = has(k2, nodes[i].f[U(e)]) ? 0 : nodes[i].f[U(e)];
      std::size_t j = index.at({s2, k2, f});
      parent[find(i)] = find(j);
    }
  NaiveColimit out;
  std::map<std::size_t, std::size_t> ids;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::size_t r = find(i);
    if (!ids.count(r)) ids[r] = ids.size();
    std::size_t w = static_cast<std::size_t>(std::find(windows.begin(), windows.end(), std::make_pair(nodes[i].s, nodes[i].k)) - windows.begin());
    out.class_of[{w, nodes[i].f}] = ids[r];
  }
  out.classes = ids.size();
  return out;
}

// A random representative of a random morphism: random admissible window, random hom there.
std::optional<QuotientHom> random_rep(const FiniteASet& x, const FiniteASet& y, const SerrePredicate& c, std::mt19937_64& rng) {
  IndexPoset ip = index_poset(x, y, c);
  const auto& w = ip.windows[rng() % ip.windows.size()];
  ASetMap s = sub_inclusion(x, w.sub);
  ASetMap q = rees_quotient(y, w.kernel);
  auto hs = homs(s.source, q.target);
  if (hs.empty()) return std::nullopt;
  const auto& h = hs[rng() % hs.size()];
  std::vector<int> lift(U(q.target.size()), 0);
  for (int e = 0; e < y.size(); ++e)
    if (q.map[U(e)] != 0) lift[U(q.map[U(e)])] = e;
  QuotientHom f{x, y, w, std::vector<int>(U(x.size()), -1)};
  for (std::size_t k = 0; k < h.size(); ++k) f.map[U(s.map[k])] = lift[U(h[k])];
  return f;
}

}  // namespace

TEST_CASE("membership of the standard predicates") {
  auto tors = SerrePredicate::torsion(nat(), {"t"});
  auto supp = SerrePredicate::support_in(nat(), {"(t)"});
  for (const auto& x : nat_corpus(5)) {
    CHECK(contains(tors, x) == brute_torsion(x));
    CHECK(contains(supp, x) == brute_torsion(x));
    CHECK(contains(SerrePredicate::finite_length(nat()), x) == has_finite_length(x));
    CHECK(contains(SerrePredicate::zero(nat()), x) == (x.size() == 1));
  }
  CHECK(kind_name(SerrePredicate::Kind::torsion) == "torsion");
}

TEST_CASE("validate_serre accepts Serre subcategories and rejects others") {
  const auto& u = nat_corpus(4);
  CHECK(validate_serre(SerrePredicate::torsion(nat(), {"t"}), u).ok());
  CHECK(validate_serre(SerrePredicate::support_in(nat(), {"(t)"}), u).ok());
  CHECK(validate_serre(SerrePredicate::zero(nat()), u).ok());
  CHECK(validate_serre(SerrePredicate::support_in(nat(), {"(0)", "(t)"}), u).ok());
  // {*, x -> *} misses {x2 -> x1 -> *}, an extension of two members.
  auto n1 = nset({0, 0});
  auto bad = validate_serre(SerrePredicate::explicit_list(nat(), {zero_aset(nat()), n1}), u);
  CHECK_FALSE(bad.ok());
  // Supports are closed under specialization, so this is the zero subcategory.
  auto generic = SerrePredicate::support_in(nat(), {"(0)"});
  CHECK(validate_serre(generic, u).ok());
  for (const auto& x : u) CHECK(contains(generic, x) == (x.size() == 1));

  auto ps = primes(idem()->table());
  REQUIRE(ps.size() == 2);
  std::vector<FiniteASet> ui = enumerate_asets(idem(), 4);
  for (const auto& p : ps) CHECK(validate_serre(SerrePredicate::support_in(idem(), {p.label}), ui).ok());
  CHECK(validate_serre(SerrePredicate::torsion(idem(), {"t"}), ui).ok());
}

TEST_CASE("hom_quotient agrees with the naive colimit over all windows") {
  auto tors = SerrePredicate::torsion(nat(), {"t"});
  const auto& corpus = nat_corpus(4);
  std::size_t pairs = 0;
  for (const auto& x : corpus)
    for (const auto& y : corpus) {
      auto naive = naive_colimit(x, y, brute_torsion);
      auto hq = hom_quotient(x, y, tors);
      REQUIRE(hq.size() == naive.classes);
      // Distinct canonical representatives land in distinct classes.
      IndexPoset ip = index_poset(x, y, tors);
      WindowPair cw = canonical_window(x, y, tors);
      std::set<std::size_t> seen;
      for (const auto& f : hq) {
        CHECK(f.window == cw);
        CHECK(is_representative(f));
        // Locate the canonical window in the oracle's window order.
        std::vector<std::pair<Mask, Mask>> ws;
        for (Mask s : subobjects(x))
          if (contains(tors, rees_quotient(x, s).target))
            for (Mask k : subobjects(y))
              if (contains(tors, sub_inclusion(y, k).source)) ws.emplace_back(s, k);
        std::size_t wi = static_cast<std::size_t>(std::find(ws.begin(), ws.end(), std::make_pair(cw.sub, cw.kernel)) - ws.begin());
        seen.insert(naive.class_of.at({wi, f.map}));
      }
      CHECK(seen.size() == hq.size());
      CHECK(check_filtered(ip.order).ok);
      ++pairs;
    }
  CHECK(pairs == corpus.size() * corpus.size());

  // Over N^2 with S generated by the first variable.
  auto tors1 = SerrePredicate::torsion(nat2(), {"x1"});
  auto c2 = enumerate_asets(nat2(), 3);
  auto in1 = [&](const FiniteASet& z) { return contains(tors1, z); };
  for (const auto& x : c2)
    for (const auto& y : c2) CHECK(hom_quotient(x, y, tors1).size() == naive_colimit(x, y, in1).classes);
}

TEST_CASE("zero subcategory gives the original homs") {
  auto z = SerrePredicate::zero(nat());
  for (const auto& x : nat_corpus(4))
    for (const auto& y : nat_corpus(4)) CHECK(hom_quotient(x, y, z).size() == count_homs(x, y));
}

TEST_CASE("index posets are filtered exactly for Serre predicates") {
  auto tors = SerrePredicate::torsion(nat(), {"t"});
  for (const auto& x : nat_corpus(4))
    for (const auto& y : nat_corpus(4)) CHECK(check_filtered(index_poset(x, y, tors).order).ok);

  auto n1 = nset({0, 0});
  auto c = SerrePredicate::explicit_list(nat(), {zero_aset(nat()), n1});
  auto y = wedge(n1, n1);
  auto fc = check_filtered(index_poset(zero_aset(nat()), y, c).order);
  CHECK_FALSE(fc.ok);
  CHECK(fc.witness.has_value());
  CHECK_THROWS_AS(canonical_window(zero_aset(nat()), y, c), not_serre_error);

  Poset chain{3, {{true, true, true}, {false, true, true}, {false, false, true}}};
  CHECK(check_filtered(chain).ok);
  Poset vee{3, {{true, true, false}, {false, true, false}, {false, false, true}}};
  CHECK_FALSE(check_filtered(vee).ok);
}

TEST_CASE("examples of quotient homs over N modulo torsion") {
  auto tors = SerrePredicate::torsion(nat(), {"t"});
  auto loop = nset({0, 1});
  auto n1 = nset({0, 0});
  auto tail = nset({0, 1, 1});  // x2 -> x1 -> x1
  CHECK(hom_quotient(n1, loop, tors).size() == 1);
  CHECK(hom_quotient(loop, n1, tors).size() == 1);
  CHECK(hom_quotient(loop, loop, tors).size() == 2);
  CHECK(count_homs(tail, loop) == 2);
  CHECK(hom_quotient(tail, loop, tors).size() == 2);
  // The inclusion of the loop into the tail is an isomorphism in M/C.
  ASetMap inc{loop, tail, {0, 1}};
  REQUIRE(is_equivariant(loop, tail, inc.map));
  CHECK(is_iso_quotient(from_map(inc), tors));
  CHECK_FALSE(isomorphic(loop, tail));
  CHECK(is_iso_quotient(from_map(ASetMap{n1, zero_aset(nat()), {0, 0}}), tors));
}

TEST_CASE("category laws on random representatives") {
  std::mt19937_64 rng(7);
  std::vector<std::pair<SerrePredicate, std::vector<FiniteASet>>> cases;
  cases.emplace_back(SerrePredicate::torsion(nat(), {"t"}), nat_corpus(4));
  cases.emplace_back(SerrePredicate::torsion(nat2(), {"x1"}), enumerate_asets(nat2(), 3));
  cases.emplace_back(SerrePredicate::torsion(idem(), {"t"}), enumerate_asets(idem(), 4));
  cases.emplace_back(SerrePredicate::zero(nat()), nat_corpus(3));
  std::size_t instances = 0;
  for (auto& [c, corpus] : cases) {
    auto pick = [&]() -> const FiniteASet& { return corpus[rng() % corpus.size()]; };
    for (int trial = 0; trial < 400; ++trial) {
      const auto& x = pick();
      const auto& y = pick();
      const auto& z = pick();
      const auto& w = pick();
      auto f = random_rep(x, y, c, rng);
      auto g = random_rep(y, z, c, rng);
      auto h = random_rep(z, w, c, rng);
      if (!f || !g || !h) continue;
      ++instances;
      REQUIRE(is_representative(*f));
      auto gf = compose_quotient(*g, *f, c);
      CHECK(is_representative(gf));
      CHECK(gf.window == canonical_window(x, z, c));
      // Associativity.
      CHECK(same_quotient_hom(compose_quotient(*h, gf, c), compose_quotient(compose_quotient(*h, *g, c), *f, c), c));
      // Identities.
      CHECK(same_quotient_hom(compose_quotient(identity_quotient(y), *f, c), *f, c));
      CHECK(same_quotient_hom(compose_quotient(*f, identity_quotient(x), c), *f, c));
      // Independence of the representative.
      auto cf = canonical(*f, c), cg = canonical(*g, c);
      CHECK(same_quotient_hom(compose_quotient(cg, cf, c), gf, c));
      // The canonical morphism is one of the enumerated ones.
      auto all = hom_quotient(x, y, c);
      CHECK(std::any_of(all.begin(), all.end(), [&](const QuotientHom& e) { return e.map == cf.map; }));
    }
  }
  CHECK(instances >= 1000);
}

TEST_CASE("composition of genuine maps is functorial") {
  auto tors = SerrePredicate::torsion(nat(), {"t"});
  const auto& corpus = nat_corpus(3);
  for (const auto& x : corpus)
    for (const auto& y : corpus)
      for (const auto& z : corpus)
        for (const auto& f : homs(x, y))
          for (const auto& g : homs(y, z)) {
            ASetMap fm{x, y, f}, gm{y, z, g};
            CHECK(same_quotient_hom(compose_quotient(from_map(gm), from_map(fm), tors), from_map(compose(gm, fm)), tors));
          }
}

TEST_CASE("inclusions with cokernel in C and projections with kernel in C are isomorphisms") {
  for (const auto& c : {SerrePredicate::torsion(nat(), {"t"}), SerrePredicate::torsion(idem(), {"t"})}) {
    auto corpus = enumerate_asets(c.domain, 4);
    for (const auto& x : corpus)
      for (Mask m : subobjects(x)) {
        ExactSeq s = exact_sequence(x, m);
        if (contains(c, s.p.target)) {
          auto inv = inverse_quotient(from_map(s.i), c);
          REQUIRE(inv.has_value());
          CHECK(same_quotient_hom(compose_quotient(from_map(s.i), *inv, c), identity_quotient(x), c));
        }
        if (contains(c, s.i.source)) CHECK(is_iso_quotient(from_map(s.p), c));
        if (!contains(c, s.p.target)) CHECK_FALSE(is_iso_quotient(from_map(s.i), c));
      }
  }
}

TEST_CASE("the quotient functor preserves pullbacks") {
  auto c = SerrePredicate::torsion(nat(), {"t"});
  const auto& corpus = nat_corpus(3);
  std::mt19937_64 rng(3);
  std::size_t checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto& a = corpus[rng() % corpus.size()];
    const auto& b = corpus[rng() % corpus.size()];
    const auto& z = corpus[rng() % corpus.size()];
    auto fs = homs(a, z), gs = homs(b, z);
    if (fs.empty() || gs.empty()) continue;
    ASetMap f{a, z, fs[rng() % fs.size()]}, g{b, z, gs[rng() % gs.size()]};
    Pullback p = pullback(f, g);
    QuotientHom pa = from_map(ASetMap{p.object, a, p.to_x}), pb = from_map(ASetMap{p.object, b, p.to_y});
    QuotientHom qf = from_map(f), qg = from_map(g);
    for (const auto& t : corpus) {
      for (const auto& u : hom_quotient(t, a, c))
        for (const auto& v : hom_quotient(t, b, c)) {
          if (!same_quotient_hom(compose_quotient(qf, u, c), compose_quotient(qg, v, c), c)) continue;
          int factor = 0;
          for (const auto& w : hom_quotient(t, p.object, c))
            if (same_quotient_hom(compose_quotient(pa, w, c), u, c) && same_quotient_hom(compose_quotient(pb, w, c), v, c)) ++factor;
          CHECK(factor == 1);
          ++checked;
        }
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("monic representatives of isomorphisms") {
  auto c = SerrePredicate::torsion(nat(), {"t"});
  const auto& corpus = nat_corpus(4);
  std::size_t found = 0;
  for (const auto& x : corpus)
    for (const auto& y : corpus)
      for (const auto& f : hom_quotient(x, y, c)) {
        if (!is_iso_quotient(f, c)) {
          CHECK_THROWS_AS(monic_representative(f, c), not_iso_error);
          continue;
        }
        MonicRepresentative r = monic_representative(f, c);
        CHECK(same_quotient_hom(r.h, f, c));
        CHECK(injective(r.as_map.map));
        CHECK(compose(r.retraction, r.as_map).map == identity_map(r.as_map.source).map);
        ++found;
      }
  CHECK(found > 10);
}

TEST_CASE("condition W for torsion over N") {
  auto c = SerrePredicate::torsion(nat(), {"t"});
  std::size_t coequalizers = 0;
  for (const auto& v : nat_corpus(3)) {
    ConditionWOptions o;
    o.pair_samples = 15;
    o.parallel_samples = 15;
    auto r = check_condition_w(v, c, o);
    CHECK(r.objects > 0);
    CHECK(r.upper_bound_checks == 15);
    for (const auto& f : r.failures) MESSAGE(f);
    CHECK(r.ok);
    coequalizers += r.coequalizer_checks;
  }
  CHECK(coequalizers > 0);
}

TEST_CASE("quotients by support agree with localization") {
  auto r = quotient_equivalence_report(nat(), {"(t)"}, 4);
  CHECK(r.localized_at == "(0)");
  CHECK(r.pairs == nat_corpus(4).size() * nat_corpus(4).size());
  CHECK(r.mismatches.empty());

  auto r0 = quotient_equivalence_report(nat(), {}, 3);
  CHECK(r0.localized_at == "(t)");
  CHECK(r0.mismatches.empty());

  auto ps = primes(idem()->table());
  for (const auto& p : ps)
    if (p.ideal.size() == 2) {
      auto ri = quotient_equivalence_report(idem(), {p.label}, 4);
      CHECK(ri.mismatches.empty());
    }
  CHECK_THROWS_AS(quotient_equivalence_report(nat(), {"(0)"}, 3), invalid_action_error);
}
