#include "pcmk/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <future>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace pcmk {

namespace {

std::size_t U(int i) { return static_cast<std::size_t>(i); }

struct Context {
  const SelftestOptions& opts;
  CriterionResult& r;

  int cap(int n) const { return opts.max_size > 0 ? std::min(n, opts.max_size) : n; }
  void check(bool ok, const std::string& what) {
    if (!ok && r.failures.size() < 20) r.failures.push_back(what);
    if (!ok) r.pass = false;
  }
};

AffineMonoid example_a() {
  LatticeMatrix g(2, 3);
  g << 1, 1, 1, 0, 1, 2;
  return affine_monoid(g);
}

Domain nat() { return make_domain(free_monoid(1)); }

bool key_ok(const KeyDiagramReport& k) {
  return k.rows_exact && k.top_left_pullback && k.top_left_pushout && k.bottom_right_pushout &&
         k.bottom_right_quotient_pullback;
}

std::optional<QuotientHom> random_rep(const FiniteASet& x, const FiniteASet& y, const SerrePredicate& c,
                                      std::mt19937_64& rng) {
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

// ---------------------------------------------------------------- criteria

void class_group_example(Context& c) {
  auto cl = class_group(example_a());
  c.r.expected = "Cl = Z/2";
  c.r.computed = "Cl = " + cl.str();
  c.check(cl == AbelianGroup::cyclic(2), "class group");
}

void coniveau_example(Context& c) {
  auto rep = coniveau_k0_report(example_a());
  c.r.expected = "W = (Z, Z/2, 0), K'0 = Z+Z/2";
  std::string graded;
  for (const auto& g : rep.graded) graded += (graded.empty() ? "" : ", ") + g.str();
  c.r.computed = "W = (" + graded + "), K'0 = " + rep.conclusion;
  c.check(rep.graded == std::vector<AbelianGroup>{AbelianGroup::integers(1), AbelianGroup::cyclic(2), AbelianGroup::zero()},
          "graded pieces");
  c.check(rep.determined && rep.conclusion == "Z+Z/2", "conclusion");
}

void factorial(Context& c) {
  c.r.expected = "Cl(N^n) = 0, n = 1..3";
  std::string got;
  for (int n = 1; n <= 3; ++n) {
    auto cl = class_group(free_monoid(n));
    got += (n > 1 ? ", " : "") + cl.str();
    c.check(cl.trivial(), "Cl(N^" + std::to_string(n) + ")");
  }
  c.r.computed = "Cl = " + got;
}

void pc_rooted_trees(Context& c) {
  // Rooted trees with n nodes.
  static const std::vector<long> trees{0, 1, 1, 2, 4, 9, 20, 48, 115};
  const int n = c.cap(7);
  auto all = enumerate_asets(nat(), n);
  std::map<int, long> pc_count;
  std::size_t mismatches = 0;
  for (const auto& x : all) {
    bool pc = is_pc_aset(x);
    bool ok = pc == !has_loop(x) && pc == is_rooted_tree(x);
    if (!ok) ++mismatches;
    c.check(ok, "mismatch on an N-set with " + std::to_string(x.size()) + " elements");
    if (pc) ++pc_count[x.size()];
  }
  for (int k = 1; k <= n; ++k) c.check(pc_count[k] == trees[U(k)], "pc count at size " + std::to_string(k));
  c.r.expected = "0 mismatches";
  c.r.computed = std::to_string(mismatches) + " mismatches over " + std::to_string(all.size()) + " N-sets";
}

void gamma_pc_free(Context& c) {
  std::size_t total = 0, mismatches = 0;
  for (const auto& orders : std::vector<std::vector<std::int64_t>>{{2}, {3}, {2, 2}}) {
    for (const auto& x : enumerate_asets(make_domain(finite_group_monoid(orders)), c.cap(8))) {
      ++total;
      bool ok = is_pc_aset(x) == is_free_gamma_set(x);
      if (!ok) ++mismatches;
      c.check(ok, "mismatch over " + UnitGroup::from_orders(0, orders).group().str());
    }
  }
  c.r.expected = "0 mismatches";
  c.r.computed = std::to_string(mismatches) + " mismatches over " + std::to_string(total) + " Gamma-sets";
}

void burnside(Context& c) {
  c.r.expected = "rank 2, 2, 5";
  std::string got;
  const std::vector<std::pair<std::vector<std::int64_t>, std::int64_t>> cases{{{2}, 2}, {{3}, 2}, {{2, 2}, 5}};
  for (const auto& [orders, paper] : cases) {
    UnitGroup g = UnitGroup::from_orders(0, orders);
    Domain d = make_domain(finite_group_monoid(orders));
    auto objs = enumerate_asets(d, c.cap(static_cast<int>(g.torsion_order()) + 1));
    auto k0 = k0_of_objects(objs).k0();
    got += (got.empty() ? "" : ", ") + std::to_string(k0.free_rank);
    c.check(k0 == AbelianGroup::integers(paper), "K0 of " + g.group().str() + "-sets");
    c.check(burnside_rank(g) == static_cast<std::size_t>(paper), "subgroup count of " + g.group().str());
  }
  c.r.computed = "rank " + got;
}

void devissage(Context& c) {
  c.r.expected = "K0 = Z, [X] = length(X) [Gamma_+]";
  std::string got;
  for (int n = 1; n <= 4; ++n) {
    auto rep = devissage_check_k0(truncated_polynomial(n), true, c.cap(5));
    got += (n > 1 ? ", " : "") + rep.k0.str();
    c.check(rep.k0 == AbelianGroup::integers(1), "K0 for N/(t^" + std::to_string(n) + ")");
    c.check(rep.classes_match_length, "classes by length for N/(t^" + std::to_string(n) + ")");
  }
  c.r.computed = "K0 = " + got;
}

void localization(Context& c) {
  auto corpus = enumerate_asets(nat(), c.cap(5));
  std::stable_sort(corpus.begin(), corpus.end(), [](const FiniteASet& a, const FiniteASet& b) { return a.size() < b.size(); });
  if (corpus.size() > 64) corpus.resize(64);
  auto rep = localization_exactness_k0(corpus, SerrePredicate::torsion(nat(), {"t"}));
  c.check(rep.composite_zero, "K0(C) -> K0(M) -> K0(M/C) is not a complex");
  c.check(rep.exact_middle, "not exact at K0(M)");
  c.check(rep.surjective, "K0(M) -> K0(M/C) not surjective");
  c.r.expected = "exact at K0(M), surjective";
  c.r.computed = "K0(C) = " + rep.k0_c.str() + ", K0(M) = " + rep.k0_m.str() + ", K0(M/C) = " + rep.k0_mc.str() + (rep.ok() ? ", exact" : ", not exact");
}

void category_laws(Context& c) {
  std::mt19937_64 rng(c.opts.seed);
  Domain idem = make_domain(cyclic_with_tail(2, 1));
  Domain nat2 = make_domain(free_monoid(2));
  std::vector<std::pair<SerrePredicate, std::vector<FiniteASet>>> cases;
  cases.emplace_back(SerrePredicate::torsion(nat(), {"t"}), enumerate_asets(nat(), c.cap(4)));
  cases.emplace_back(SerrePredicate::torsion(nat2, {"x1"}), enumerate_asets(nat2, c.cap(3)));
  cases.emplace_back(SerrePredicate::torsion(idem, {"t"}), enumerate_asets(idem, c.cap(4)));
  cases.emplace_back(SerrePredicate::zero(nat()), enumerate_asets(nat(), c.cap(3)));
  std::size_t instances = 0, failures = 0;
  for (auto& [pred, corpus] : cases) {
    auto pick = [&]() -> const FiniteASet& { return corpus[rng() % corpus.size()]; };
    for (int trial = 0; trial < 400; ++trial) {
      const auto& x = pick();
      const auto& y = pick();
      const auto& z = pick();
      const auto& w = pick();
      auto f = random_rep(x, y, pred, rng);
      auto g = random_rep(y, z, pred, rng);
      auto h = random_rep(z, w, pred, rng);
      if (!f || !g || !h) continue;
      ++instances;
      auto gf = compose_quotient(*g, *f, pred);
      bool ok = same_quotient_hom(compose_quotient(*h, gf, pred), compose_quotient(compose_quotient(*h, *g, pred), *f, pred), pred) &&
                same_quotient_hom(compose_quotient(identity_quotient(y), *f, pred), *f, pred) &&
                same_quotient_hom(compose_quotient(*f, identity_quotient(x), pred), *f, pred);
      if (!ok) ++failures;
      c.check(ok, "identity or associativity for " + kind_name(pred.kind));
    }
  }
  auto tors = SerrePredicate::torsion(nat(), {"t"});
  std::size_t isos = 0;
  const auto corpus = enumerate_asets(nat(), c.cap(4));
  for (const auto& x : corpus)
    for (const auto& y : corpus)
      for (const auto& f : hom_quotient(x, y, tors)) {
        if (!is_iso_quotient(f, tors)) continue;
        ++isos;
        bool ok = false;
        try {
          MonicRepresentative m = monic_representative(f, tors);
          ok = same_quotient_hom(m.h, f, tors) && injective(m.as_map.map) &&
               compose(m.retraction, m.as_map).map == identity_map(m.as_map.source).map;
        } catch (const not_iso_error&) {
        }
        if (!ok) ++failures;
        c.check(ok, "monic representative");
      }
  c.check(instances >= 1000, "fewer than 1000 instances");
  c.r.expected = ">= 1000 instances, 0 failures";
  c.r.computed = std::to_string(instances) + " instances, " + std::to_string(isos) + " isos, " + std::to_string(failures) + " failures";
}

void condition_w(Context& c) {
  Domain idem = make_domain(cyclic_with_tail(2, 1));
  Domain t3 = make_domain(truncated_polynomial(3));
  std::vector<std::pair<SerrePredicate, int>> cases{{SerrePredicate::torsion(nat(), {"t"}), c.cap(4)},
                                                    {SerrePredicate::support_in(nat(), {"(t)"}), c.cap(4)},
                                                    {SerrePredicate::zero(nat()), c.cap(4)},
                                                    {SerrePredicate::torsion(idem, {"t"}), c.cap(4)},
                                                    {SerrePredicate::finite_length(t3), c.cap(4)},
                                                    {SerrePredicate::zero(t3), c.cap(4)}};
  std::size_t posets = 0, instances = 0, failures = 0;
  for (const auto& [pred, n] : cases) {
    auto corpus = enumerate_asets(pred.domain, n);
    for (const auto& x : corpus)
      for (const auto& y : corpus) {
        ++posets;
        bool ok = check_filtered(index_poset(x, y, pred).order).ok;
        if (!ok) ++failures;
        c.check(ok, "index poset not filtered for " + kind_name(pred.kind));
      }
    ConditionWOptions o;
    o.pair_samples = 10;
    o.parallel_samples = 10;
    o.seed = c.opts.seed;
    for (const auto& v : corpus) {
      ++instances;
      auto w = check_condition_w(v, pred, o);
      if (!w.ok) ++failures;
      c.check(w.ok, "condition W for " + kind_name(pred.kind) + (w.failures.empty() ? "" : ": " + w.failures.front()));
    }
  }
  c.check(instances >= 100, "fewer than 100 condition W instances");
  c.r.expected = "all filtered, >= 100 W instances";
  c.r.computed = std::to_string(posets) + " posets, " + std::to_string(instances) + " W instances, " + std::to_string(failures) + " failures";
}

void key_diagrams(Context& c) {
  std::size_t diagrams = 0, failures = 0;
  for (const Domain& d : {make_domain(field_with_one()), make_domain(truncated_polynomial(3))})
    for (const auto& x : enumerate_asets(d, c.cap(6))) {
      auto subs = subobjects(x);
      std::vector<FiniteASet> probes;
      for (Mask m : subs) {
        probes.push_back(sub_inclusion(x, m).source);
        probes.push_back(rees_quotient(x, m).target);
      }
      probes = unique_up_to_iso(probes);
      for (Mask a : subs)
        for (Mask b : subs) {
          ++diagrams;
          bool ok = key_ok(check_key_diagram(key_diagram(x, exact_sequence(x, a), exact_sequence(x, b)), probes));
          if (!ok) ++failures;
          c.check(ok, "key diagram on " + element_list(x, a) + ", " + element_list(x, b));
        }
    }
  c.r.expected = "0 failures";
  c.r.computed = std::to_string(diagrams) + " diagrams, " + std::to_string(failures) + " failures";
}

void quotient_localization(Context& c) {
  auto rep = quotient_equivalence_report(nat(), {"(t)"}, c.cap(4));
  c.check(rep.pairs >= 20, "fewer than 20 pairs");
  c.check(rep.mismatches.empty(), "hom-count mismatches");
  c.r.expected = ">= 20 pairs, 0 mismatches";
  c.r.computed = std::to_string(rep.pairs) + " pairs at " + rep.localized_at + ", " + std::to_string(rep.mismatches.size()) + " mismatches";
}

void dvm(Context& c) {
  const auto& k = c.opts.constants;
  auto r1 = dvm_report(UnitGroup{}, k);
  auto r2 = dvm_report(UnitGroup::from_orders(0, {2}), k);
  auto expect1 = k.pi1s;
  auto expect2 = direct_sum(AbelianGroup::cyclic(2), k.pi1s);
  c.check(r1.k0_prime == AbelianGroup::integers(1), "K'0 with trivial units");
  c.check(r1.k1_prime == expect1, "K'1 with trivial units");
  c.check(r1.d1_surjective && abs(r1.t_image) == Integer(1), "d1 and [t]");
  c.check(r2.k1_prime == expect2, "K'1 with units Z/2");
  c.r.expected = "K'0 = Z, K'1 = " + expect1.str() + ", [t] -> +-1; K'1 = " + expect2.str();
  c.r.computed = "K'0 = " + r1.k0_prime.str() + ", K'1 = " + r1.k1_prime.str() + ", [t] -> " + r1.t_image.str() + "; K'1 = " +
                 r2.k1_prime.str();
}

void gersten(Context& c) {
  std::vector<std::pair<std::string, AffineMonoid>> smooth{{"N", free_monoid(1)},
                                                           {"N^2", free_monoid(2)},
                                                           {"N^3", free_monoid(3)},
                                                           {"(Z/2)+ ^ N", free_monoid(1, UnitGroup::from_orders(0, {2}))}};
  std::string got;
  for (const auto& [name, a] : smooth) {
    bool exact = false;
    try {
      exact = gersten_exactness_check(a).exact;
    } catch (const std::exception&) {
    }
    c.check(exact, "Gersten complex of " + name);
    got += name + (exact ? " exact, " : " not exact, ");
  }
  auto control = gersten_homology(example_a());
  c.check(control.h1 == AbelianGroup::cyclic(2) && !control.exact, "control H1");
  c.r.expected = "exact on 0-smooth; control H1 = Z/2";
  c.r.computed = got + "control H1 = " + control.h1.str();
}

struct Criterion {
  int id;
  const char* name;
  double limit;
  std::function<void(Context&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "class group of <(1,0),(1,1),(1,2)>", 1, class_group_example},
      {2, "coniveau graded and K'0", 1, coniveau_example},
      {3, "factorial monoids", 1, factorial},
      {4, "pc N-sets are rooted trees", 60, pc_rooted_trees},
      {5, "pc Gamma-sets are free", 60, gamma_pc_free},
      {6, "Burnside ranks", 30, burnside},
      {7, "devissage at pi_0", 30, devissage},
      {8, "localization exactness at pi_0", 120, localization},
      {9, "quotient category laws", 0, category_laws},
      {10, "filteredness and condition W", 0, condition_w},
      {11, "key diagram", 120, key_diagrams},
      {12, "quotient by support vs localization", 0, quotient_localization},
      {13, "discrete valuation monoids", 0, dvm},
      {14, "Gersten exactness", 0, gersten},
  };
  return all;
}

CriterionResult run_one(const Criterion& crit, const SelftestOptions& opts) {
  CriterionResult r;
  r.id = crit.id;
  r.name = crit.name;
  r.limit = crit.limit;
  r.pass = true;
  Context ctx{opts, r};
  auto start = std::chrono::steady_clock::now();
  try {
    crit.run(ctx);
  } catch (const std::exception& e) {
    r.pass = false;
    r.failures.push_back(std::string("exception: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.limit > 0 && r.seconds >= r.limit) {
    r.pass = false;
    r.failures.push_back("time limit exceeded");
  }
  return r;
}

}  // namespace

std::vector<CriterionResult> run_selftest(const SelftestOptions& opts) {
  std::vector<const Criterion*> chosen;
  for (const auto& c : criteria())
    if (opts.only.empty() || std::find(opts.only.begin(), opts.only.end(), c.id) != opts.only.end()) chosen.push_back(&c);
  std::vector<CriterionResult> out;
  if (opts.parallel && std::thread::hardware_concurrency() > 1) {
    std::vector<std::future<CriterionResult>> jobs;
    for (const auto* c : chosen) jobs.push_back(std::async(std::launch::async, run_one, std::cref(*c), std::cref(opts)));
    for (auto& j : jobs) out.push_back(j.get());
  } else {
    for (const auto* c : chosen) out.push_back(run_one(*c, opts));
  }
  std::sort(out.begin(), out.end(), [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.pass ? "PASS " : "FAIL ") << (r.id < 10 ? " " : "") << r.id << "  " << r.name << "  expected: " << r.expected
     << " | computed: " << r.computed << "  (" << std::fixed;
  os.precision(2);
  os << r.seconds << " s";
  if (r.limit > 0) os << " < " << r.limit << " s";
  os << ")";
  for (const auto& f : r.failures) os << "\n      " << f;
  return os.str();
}

}  // namespace pcmk
