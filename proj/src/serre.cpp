#include "pcmk/serre.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>

namespace pcmk {

namespace {

std::size_t U(int i) { return static_cast<std::size_t>(i); }
bool has(Mask m, int i) { return ((m >> i) & 1U) != 0; }
bool subset(Mask a, Mask b) { return (a & ~b) == 0; }

std::vector<Transformation> mult_actions(const SerrePredicate& c, const FiniteASet& x) {
  const auto& d = *c.domain;
  std::vector<Transformation> out;
  std::vector<Transformation> elems;
  for (const auto& name : c.mult_set) {
    int g = d.generator_index(name);
    if (g >= 0) {
      out.push_back(x.action[U(g)]);
      continue;
    }
    if (d.finite()) {
      int e = d.table().index_of(name);
      if (e >= 0) {
        if (elems.empty()) elems = d.element_actions(x.action, x.size());
        out.push_back(elems[U(e)]);
        continue;
      }
    }
    throw invalid_action_error("unknown element of the multiplicative set: " + name);
  }
  return out;
}

bool is_torsion(const SerrePredicate& c, const FiniteASet& x) {
  auto ts = mult_actions(c, x);
  for (int e = 1; e < x.size(); ++e) {
    Mask seen = Mask(1) << e;
    std::deque<int> q{e};
    bool dies = false;
    while (!q.empty() && !dies) {
      int v = q.front();
      q.pop_front();
      for (const auto& t : ts) {
        int w = t[U(v)];
        if (w == 0) {
          dies = true;
          break;
        }
        if (!has(seen, w)) {
          seen |= Mask(1) << w;
          q.push_back(w);
        }
      }
    }
    if (!dies) return false;
  }
  return true;
}

std::vector<PrimeIdeal> domain_primes(const ActionDomain& d) {
  if (d.finite()) return primes(d.table());
  return primes(d.monoid());
}

// Whether prime q contains prime p.
bool prime_contains(const PrimeIdeal& q, const PrimeIdeal& p) {
  if (!q.ideal.empty() || !p.ideal.empty())
    return std::includes(q.ideal.begin(), q.ideal.end(), p.ideal.begin(), p.ideal.end());
  return std::includes(p.face.begin(), p.face.end(), q.face.begin(), q.face.end());
}

bool can_localize(const ActionDomain& d) { return d.finite() || d.is_natural_numbers(); }

// Y index of every element of a Rees quotient Y/Y'.
std::vector<int> rees_lift(const ASetMap& q) {
  std::vector<int> lift(U(q.target.size()), 0);
  for (std::size_t y = 0; y < q.map.size(); ++y)
    if (q.map[y] != 0) lift[U(q.map[y])] = static_cast<int>(y);
  return lift;
}

}  // namespace

SerrePredicate SerrePredicate::zero(const Domain& d) { return explicit_list(d, {zero_aset(d)}); }

SerrePredicate SerrePredicate::support_in(const Domain& d, std::vector<std::string> ps) {
  SerrePredicate c;
  c.kind = Kind::support_in;
  c.domain = d;
  c.primes = std::move(ps);
  return c;
}

SerrePredicate SerrePredicate::torsion(const Domain& d, std::vector<std::string> s) {
  SerrePredicate c;
  c.kind = Kind::torsion;
  c.domain = d;
  c.mult_set = std::move(s);
  return c;
}

SerrePredicate SerrePredicate::finite_length(const Domain& d) {
  SerrePredicate c;
  c.kind = Kind::finite_length;
  c.domain = d;
  return c;
}

SerrePredicate SerrePredicate::explicit_list(const Domain& d, std::vector<FiniteASet> objects) {
  SerrePredicate c;
  c.kind = Kind::explicit_list;
  c.domain = d;
  c.objects = std::move(objects);
  return c;
}

std::string kind_name(SerrePredicate::Kind k) {
  switch (k) {
    case SerrePredicate::Kind::support_in: return "support_in";
    case SerrePredicate::Kind::torsion: return "torsion";
    case SerrePredicate::Kind::finite_length: return "finite_length";
    case SerrePredicate::Kind::explicit_list: return "explicit";
  }
  return "";
}

bool contains(const SerrePredicate& c, const FiniteASet& x) {
  switch (c.kind) {
    case SerrePredicate::Kind::support_in:
      for (const auto& p : support(x))
        if (std::find(c.primes.begin(), c.primes.end(), p.label) == c.primes.end()) return false;
      return true;
    case SerrePredicate::Kind::torsion: return is_torsion(c, x);
    case SerrePredicate::Kind::finite_length: return has_finite_length(x);
    case SerrePredicate::Kind::explicit_list:
      return std::any_of(c.objects.begin(), c.objects.end(), [&](const FiniteASet& o) { return isomorphic(o, x); });
  }
  return false;
}

ValidationReport validate_serre(const SerrePredicate& c, const std::vector<FiniteASet>& universe, std::size_t max_pullbacks) {
  ValidationReport r;
  const auto& d = c.domain;
  if (!contains(c, zero_aset(d))) r.violations.push_back("the zero object is not in the subcategory");
  std::vector<FiniteASet> all = universe;
  all.insert(all.end(), c.objects.begin(), c.objects.end());
  std::vector<bool> in(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) in[i] = contains(c, all[i]);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& x = all[i];
    for (Mask m : subobjects(x)) {
      ExactSeq s = exact_sequence(x, m);
      bool ends = contains(c, s.i.source) && contains(c, s.p.target);
      if (ends != in[i])
        r.violations.push_back("two-out-of-three fails for " + element_list(x, m) + " >-> " + element_list(x, x.all()));
    }
  }
  std::size_t done = 0;
  for (std::size_t i = 0; i < universe.size() && done < max_pullbacks; ++i) {
    if (!in[i]) continue;
    for (std::size_t j = i; j < universe.size() && done < max_pullbacks; ++j) {
      if (!in[j]) continue;
      for (const auto& z : universe) {
        auto fs = homs(universe[i], z);
        auto gs = homs(universe[j], z);
        for (const auto& f : fs)
          for (const auto& g : gs) {
            if (done++ >= max_pullbacks) break;
            Pullback p = pullback(ASetMap{universe[i], z, f}, ASetMap{universe[j], z, g});
            if (!contains(c, p.object)) r.violations.push_back("not closed under pullbacks");
          }
      }
    }
  }
  if (can_localize(*d) && (c.kind == SerrePredicate::Kind::support_in || c.kind == SerrePredicate::Kind::torsion)) {
    std::vector<PrimeIdeal> outside;
    for (const auto& p : domain_primes(*d)) {
      if (c.kind == SerrePredicate::Kind::support_in) {
        if (std::find(c.primes.begin(), c.primes.end(), p.label) == c.primes.end()) outside.push_back(p);
        continue;
      }
      // Primes disjoint from S.
      bool disjoint = true;
      for (const auto& name : c.mult_set) {
        int g = d->generator_index(name);
        if (d->finite()) {
          int e = g >= 0 ? d->generator_element(g) : d->table().index_of(name);
          disjoint &= !std::binary_search(p.ideal.begin(), p.ideal.end(), e);
        } else {
          disjoint &= std::binary_search(p.face.begin(), p.face.end(), g);
        }
      }
      if (disjoint) outside.push_back(p);
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
      bool vanishes = true;
      for (const auto& p : outside)
        if (localize_aset(all[i], p, localized_domain(d, p)).size() > 1) vanishes = false;
      if (vanishes != in[i]) r.violations.push_back("membership differs from vanishing of the localization for " + element_list(all[i], all[i].all()));
    }
  }
  return r;
}

FilteredCheck check_filtered(const Poset& p) {
  for (int a = 0; a < p.size; ++a)
    for (int b = a + 1; b < p.size; ++b) {
      bool bound = false;
      for (int t = 0; t < p.size && !bound; ++t) bound = p.leq[U(a)][U(t)] && p.leq[U(b)][U(t)];
      if (!bound) return {false, std::make_pair(a, b)};
    }
  if (p.size == 0) return {false, std::nullopt};
  return {};
}

IndexPoset index_poset(const FiniteASet& x, const FiniteASet& y, const SerrePredicate& c) {
  IndexPoset ip{x, y, {}, {}};
  std::vector<Mask> subs, kers;
  for (Mask m : subobjects(x))
    if (contains(c, rees_quotient(x, m).target)) subs.push_back(m);
  for (Mask m : subobjects(y))
    if (contains(c, sub_inclusion(y, m).source)) kers.push_back(m);
  for (Mask s : subs)
    for (Mask k : kers) ip.windows.push_back({s, k});
  const int n = static_cast<int>(ip.windows.size());
  ip.order.size = n;
  ip.order.leq.assign(U(n), std::vector<bool>(U(n), false));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const auto& wa = ip.windows[U(a)];
      const auto& wb = ip.windows[U(b)];
      ip.order.leq[U(a)][U(b)] = subset(wb.sub, wa.sub) && subset(wa.kernel, wb.kernel);
    }
  return ip;
}

WindowPair canonical_window(const FiniteASet& x, const FiniteASet& y, const SerrePredicate& c) {
  Mask sub = x.all(), ker = 1;
  for (Mask m : subobjects(x))
    if (contains(c, rees_quotient(x, m).target)) sub &= m;
  for (Mask m : subobjects(y))
    if (contains(c, sub_inclusion(y, m).source)) ker |= m;
  if (!contains(c, rees_quotient(x, sub).target) || !contains(c, sub_inclusion(y, ker).source))
    throw not_serre_error("admissible windows have no maximum; the predicate is not a Serre subcategory");
  return {sub, ker};
}

QuotientHom from_map(const ASetMap& f) { return {f.source, f.target, {f.source.all(), 1}, f.map}; }

QuotientHom identity_quotient(const FiniteASet& x) { return from_map(identity_map(x)); }

QuotientHom refine(const QuotientHom& f, const WindowPair& w) {
  if (!subset(w.sub, f.window.sub) || !subset(f.window.kernel, w.kernel)) throw invalid_action_error("window is not a refinement");
  QuotientHom out{f.x, f.y, w, std::vector<int>(U(f.x.size()), -1)};
  for (int i = 0; i < f.x.size(); ++i)
    if (has(w.sub, i)) {
      int v = f.map[U(i)];
      out.map[U(i)] = has(w.kernel, v) ? 0 : v;
    }
  return out;
}

QuotientHom canonical(const QuotientHom& f, const SerrePredicate& c) { return refine(f, canonical_window(f.x, f.y, c)); }

bool same_quotient_hom(const QuotientHom& f, const QuotientHom& g, const SerrePredicate& c) {
  if (f.x.names != g.x.names || f.y.names != g.y.names) return false;
  return canonical(f, c).map == canonical(g, c).map;
}

bool is_representative(const QuotientHom& f) {
  if (!is_subobject(f.x, f.window.sub) || !is_subobject(f.y, f.window.kernel)) return false;
  if (f.map.size() != U(f.x.size()) || f.map[0] != 0) return false;
  for (int i = 0; i < f.x.size(); ++i) {
    int v = f.map[U(i)];
    if (has(f.window.sub, i) != (v >= 0)) return false;
    if (v > 0 && has(f.window.kernel, v)) return false;
    if (v < 0) continue;
    for (std::size_t g = 0; g < f.x.action.size(); ++g) {
      int w = f.y.act(static_cast<int>(g), v);
      if (has(f.window.kernel, w)) w = 0;
      if (f.map[U(f.x.act(static_cast<int>(g), i))] != w) return false;
    }
  }
  return true;
}

std::vector<QuotientHom> hom_quotient(const FiniteASet& x, const FiniteASet& y, const SerrePredicate& c) {
  WindowPair w = canonical_window(x, y, c);
  ASetMap s = sub_inclusion(x, w.sub);
  ASetMap q = rees_quotient(y, w.kernel);
  auto lift = rees_lift(q);
  std::vector<QuotientHom> out;
  for (const auto& h : homs(s.source, q.target)) {
    QuotientHom f{x, y, w, std::vector<int>(U(x.size()), -1)};
    for (std::size_t k = 0; k < h.size(); ++k) f.map[U(s.map[k])] = lift[U(h[k])];
    out.push_back(std::move(f));
  }
  return out;
}

QuotientHom compose_quotient(const QuotientHom& g, const QuotientHom& f, const SerrePredicate& c) {
  if (f.y.names != g.x.names || f.y.action != g.x.action) throw invalid_action_error("morphisms are not composable");
  const Mask yb = g.window.sub, yk = f.window.kernel;
  // X* = f^{-1}((Y_b u Y_k)/Y_k).
  Mask xs = 0;
  for (int i = 0; i < f.x.size(); ++i) {
    int v = f.map[U(i)];
    if (v == 0 || (v > 0 && has(yb, v))) xs |= Mask(1) << i;
  }
  // Z_k' = Z_k together with the image of Y_b n Y_k.
  Mask zk = g.window.kernel;
  for (int y = 0; y < g.x.size(); ++y)
    if (has(yb, y) && has(yk, y)) zk |= Mask(1) << g.map[U(y)];
  zk = closure(g.y, zk);
  QuotientHom out{f.x, g.y, {xs, zk}, std::vector<int>(U(f.x.size()), -1)};
  for (int i = 0; i < f.x.size(); ++i) {
    if (!has(xs, i)) continue;
    int v = f.map[U(i)];
    int z = v == 0 ? 0 : g.map[U(v)];
    out.map[U(i)] = has(zk, z) ? 0 : z;
  }
  return canonical(out, c);
}

std::optional<QuotientHom> inverse_quotient(const QuotientHom& f, const SerrePredicate& c) {
  QuotientHom idx = canonical(identity_quotient(f.x), c);
  QuotientHom idy = canonical(identity_quotient(f.y), c);
  for (const auto& g : hom_quotient(f.y, f.x, c)) {
    if (compose_quotient(g, f, c).map != idx.map) continue;
    if (compose_quotient(f, g, c).map != idy.map) continue;
    return g;
  }
  return std::nullopt;
}

bool is_iso_quotient(const QuotientHom& f, const SerrePredicate& c) { return inverse_quotient(f, c).has_value(); }

MonicRepresentative monic_representative(const QuotientHom& f, const SerrePredicate& c) {
  if (!is_iso_quotient(f, c)) throw not_iso_error("not an isomorphism in the quotient category");
  QuotientHom target = canonical(f, c);
  IndexPoset ip = index_poset(f.x, f.y, c);
  for (const auto& w : ip.windows) {
    ASetMap s = sub_inclusion(f.x, w.sub);
    ASetMap q = rees_quotient(f.y, w.kernel);
    auto lift = rees_lift(q);
    for (const auto& h : homs(s.source, q.target)) {
      if (!injective(h)) continue;
      QuotientHom rep{f.x, f.y, w, std::vector<int>(U(f.x.size()), -1)};
      for (std::size_t k = 0; k < h.size(); ++k) rep.map[U(s.map[k])] = lift[U(h[k])];
      if (canonical(rep, c).map != target.map) continue;
      for (const auto& p : homs(q.target, s.source)) {
        bool retract = true;
        for (std::size_t k = 0; k < h.size() && retract; ++k) retract = p[U(h[k])] == static_cast<int>(k);
        if (retract) return {rep, ASetMap{s.source, q.target, h}, ASetMap{q.target, s.source, p}};
      }
    }
  }
  throw not_iso_error("no representative with a retraction");
}

// ---------------------------------------------------------------- condition (W)

ConditionWReport check_condition_w(const FiniteASet& v, const SerrePredicate& c, const ConditionWOptions& opts) {
  ConditionWReport rep;
  auto universe = enumerate_asets(v.domain, v.size() + opts.slack);
  struct Obj {
    FiniteASet x;
    QuotientHom phi;
  };
  std::vector<Obj> objs;
  for (const auto& x : universe)
    for (auto& phi : hom_quotient(x, v, c))
      if (is_iso_quotient(phi, c)) objs.push_back({x, phi});
  rep.objects = objs.size();
  if (objs.empty()) {
    rep.ok = false;
    rep.failures.push_back("I_V^m is empty");
    return rep;
  }
  std::mt19937_64 rng(opts.seed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  auto fail = [&](const std::string& s) {
    rep.ok = false;
    rep.failures.push_back(s);
  };

  for (std::size_t trial = 0; trial < opts.pair_samples; ++trial) {
    const Obj& a = objs[pick(objs.size())];
    const Obj& b = objs[pick(objs.size())];
    ++rep.upper_bound_checks;
    MonicRepresentative r1 = monic_representative(a.phi, c);
    MonicRepresentative r2 = monic_representative(b.phi, c);
    // Common codomain V'' = V / (V'_1 u V'_2).
    Mask vk = r1.h.window.kernel | r2.h.window.kernel;
    ASetMap vq = rees_quotient(v, vk);
    auto to_common = [&](const MonicRepresentative& r) {
      ASetMap s = sub_inclusion(r.h.x, r.h.window.sub);
      std::vector<int> m;
      for (int e : s.map) m.push_back(vq.map[U(r.h.map[U(e)])]);
      return std::make_pair(s, ASetMap{s.source, vq.target, m});
    };
    auto [s1, h1] = to_common(r1);
    auto [s2, h2] = to_common(r2);
    Pushout y1 = pushout(s1, h1);
    Pushout y2 = pushout(s2, h2);
    Pushout y = pushout(ASetMap{vq.target, y1.object, y1.from_y}, ASetMap{vq.target, y2.object, y2.from_y});
    std::vector<int> g1, g2, u;
    for (int e = 0; e < a.x.size(); ++e) g1.push_back(y.from_x[U(y1.from_x[U(e)])]);
    for (int e = 0; e < b.x.size(); ++e) g2.push_back(y.from_y[U(y2.from_x[U(e)])]);
    for (int e = 0; e < vq.target.size(); ++e) u.push_back(y.from_x[U(y1.from_y[U(e)])]);
    auto uinv = inverse_quotient(from_map(ASetMap{vq.target, y.object, u}), c);
    if (!uinv) {
      fail("V'' -> Y is not an isomorphism in M/C");
      continue;
    }
    auto vq_inv = inverse_quotient(from_map(vq), c);
    if (!vq_inv) {
      fail("V -> V'' is not an isomorphism in M/C");
      continue;
    }
    QuotientHom psi = compose_quotient(*vq_inv, *uinv, c);
    QuotientHom m1 = from_map(ASetMap{a.x, y.object, g1});
    QuotientHom m2 = from_map(ASetMap{b.x, y.object, g2});
    if (!is_iso_quotient(m1, c) || !is_iso_quotient(m2, c)) fail("a leg of the upper bound is not an isomorphism in M/C");
    if (!same_quotient_hom(compose_quotient(psi, m1, c), a.phi, c) || !same_quotient_hom(compose_quotient(psi, m2, c), b.phi, c))
      fail("upper bound is not compatible with the maps to V");
  }

  for (std::size_t trial = 0; trial < opts.parallel_samples * 8 && rep.coequalizer_checks < opts.parallel_samples; ++trial) {
    const Obj& a = objs[pick(objs.size())];
    const Obj& b = objs[pick(objs.size())];
    std::vector<std::vector<int>> over;
    for (auto& g : homs(a.x, b.x))
      if (same_quotient_hom(compose_quotient(b.phi, from_map(ASetMap{a.x, b.x, g}), c), a.phi, c)) over.push_back(g);
    if (over.size() < 2) continue;
    const auto& g1 = over[pick(over.size())];
    const auto& g2 = over[pick(over.size())];
    ++rep.coequalizer_checks;
    auto psi_inv = inverse_quotient(b.phi, c);
    QuotientHom h = compose_quotient(*psi_inv, a.phi, c);
    MonicRepresentative r = monic_representative(h, c);
    ASetMap proj = rees_quotient(b.x, r.h.window.kernel);
    std::vector<int> k;
    for (int e = 0; e < b.x.size(); ++e) k.push_back(r.retraction.map[U(proj.map[U(e)])]);
    bool equal = true;
    for (int e = 0; e < a.x.size() && equal; ++e) equal = k[U(g1[U(e)])] == k[U(g2[U(e)])];
    if (!equal) fail("projection followed by the retraction does not coequalize a parallel pair");
    // (X', phi restricted) receives k over V.
    ASetMap sub = sub_inclusion(a.x, r.h.window.sub);
    QuotientHom phi_sub = compose_quotient(a.phi, from_map(sub), c);
    if (!same_quotient_hom(compose_quotient(phi_sub, from_map(ASetMap{b.x, sub.source, k}), c), b.phi, c))
      fail("weak coequalizer is not a map over V");
  }
  return rep;
}

// ---------------------------------------------------------------- localization comparison

EquivalenceReport quotient_equivalence_report(const Domain& d, const std::vector<std::string>& z, int max_size) {
  if (!can_localize(*d)) throw invalid_action_error("quotient equivalence is implemented for finite monoids and N");
  auto ps = domain_primes(*d);
  auto in_z = [&](const PrimeIdeal& p) { return std::find(z.begin(), z.end(), p.label) != z.end(); };
  for (const auto& p : ps)
    for (const auto& q : ps)
      if (in_z(p) && prime_contains(q, p) && !in_z(q)) throw invalid_action_error("Z must be closed under specialization");
  std::vector<PrimeIdeal> u;
  for (const auto& p : ps)
    if (!in_z(p)) u.push_back(p);
  std::optional<PrimeIdeal> top;
  for (const auto& p : u)
    if (std::all_of(u.begin(), u.end(), [&](const PrimeIdeal& q) { return prime_contains(p, q); })) top = p;
  if (!top) throw invalid_action_error("the complement of Z must have a unique maximal prime");
  SerrePredicate c = SerrePredicate::support_in(d, z);
  Domain l = localized_domain(d, *top);
  EquivalenceReport rep;
  rep.localized_at = top->label;
  auto corpus = enumerate_asets(d, max_size);
  std::vector<FiniteASet> local;
  for (const auto& x : corpus) local.push_back(localize_aset(x, *top, l));
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = 0; j < corpus.size(); ++j) {
      ++rep.pairs;
      std::size_t qh = hom_quotient(corpus[i], corpus[j], c).size();
      std::size_t lh = count_homs(local[i], local[j]);
      if (qh != lh) rep.mismatches.push_back({corpus[i], corpus[j], qh, lh});
    }
  return rep;
}

}  // namespace pcmk
