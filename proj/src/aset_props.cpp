#include "pcmk/aset.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace pcmk {

namespace {

std::size_t U(int i) { return static_cast<std::size_t>(i); }
bool has(Mask m, int i) { return ((m >> i) & 1U) != 0; }
Mask single(int i) { return Mask(1) << i; }

int apply_power(const FiniteASet& x, int g, int e, std::int64_t k) {
  for (std::int64_t i = 0; i < k; ++i) e = x.act(g, e);
  return e;
}

void require_natural(const FiniteASet& x) {
  if (!x.domain->is_natural_numbers()) throw invalid_action_error("expected an N-set");
}

std::vector<std::vector<std::int64_t>> torsion_elements(const std::vector<std::int64_t>& orders) {
  std::vector<std::vector<std::int64_t>> elems{{}};
  for (auto o : orders) {
    std::vector<std::vector<std::int64_t>> next;
    for (const auto& e : elems)
      for (std::int64_t i = 0; i < o; ++i) {
        auto f = e;
        f.push_back(i);
        next.push_back(std::move(f));
      }
    elems = std::move(next);
  }
  return elems;
}

// Affine domains with finite units: a x = b x != * forces a = b.
bool affine_pc(const FiniteASet& x) {
  const auto& d = *x.domain;
  if (x.size() == 1) return true;
  if (d.free_unit_rank() > 0) return false;
  const int k = d.cone_generator_count();
  const int m = x.size() - 1;
  auto tors = torsion_elements(d.torsion_orders());
  auto act_torsion = [&](const std::vector<std::int64_t>& t, int e) {
    for (std::size_t i = 0; i < t.size(); ++i) e = apply_power(x, k + static_cast<int>(i), e, t[i]);
    return e;
  };
  for (int start = 1; start < x.size(); ++start) {
    // Exponent vectors n with n.x != *, layer by total degree.
    std::map<std::vector<int>, int> layer{{std::vector<int>(U(k), 0), start}};
    std::vector<std::pair<std::vector<int>, int>> alive;
    for (int deg = 0; !layer.empty(); ++deg) {
      if (deg >= m) return false;  // a path of m + 1 live values repeats one
      std::map<std::vector<int>, int> next;
      for (const auto& [n, v] : layer) {
        alive.emplace_back(n, v);
        for (int g = 0; g < k; ++g) {
          int w = x.act(g, v);
          if (w == 0) continue;
          auto n2 = n;
          ++n2[U(g)];
          next[n2] = w;
        }
      }
      layer = std::move(next);
    }
    std::set<int> seen;
    for (const auto& [n, v] : alive)
      for (const auto& t : tors)
        if (!seen.insert(act_torsion(t, v)).second) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------- pc, trees, orbits

bool has_loop(const FiniteASet& x) {
  require_natural(x);
  for (int e = 1; e < x.size(); ++e) {
    int y = e;
    for (int i = 0; i < x.size(); ++i) {
      y = x.act(0, y);
      if (y == e) return true;
      if (y == 0) break;
    }
  }
  return false;
}

bool is_rooted_tree(const FiniteASet& x) {
  require_natural(x);
  for (int e = 1; e < x.size(); ++e)
    if (apply_power(x, 0, e, x.size()) != 0) return false;
  return true;
}

bool is_pc_aset(const FiniteASet& x) {
  const auto& d = *x.domain;
  if (d.finite()) {
    const auto& t = d.table();
    auto te = d.element_actions(x.action, x.size());
    for (int e = 1; e < x.size(); ++e)
      for (int a = 0; a < t.size(); ++a)
        for (int b = a + 1; b < t.size(); ++b) {
          int v = te[U(a)][U(e)];
          if (v != 0 && v == te[U(b)][U(e)]) return false;
        }
    return true;
  }
  if (d.is_natural_numbers()) return !has_loop(x);
  return affine_pc(x);
}

std::vector<std::vector<int>> orbit_decomposition(const FiniteASet& x) {
  const auto& d = *x.domain;
  if (!d.is_finite_group()) throw invalid_action_error("orbit decomposition needs a finite group");
  const auto& t = d.table();
  auto te = d.element_actions(x.action, x.size());
  std::vector<bool> done(U(x.size()), false);
  std::vector<std::vector<int>> out;
  for (int e = 1; e < x.size(); ++e) {
    if (done[U(e)]) continue;
    std::vector<int> stab;
    for (int u = 0; u < t.size(); ++u) {
      if (u == t.zero) continue;
      done[U(te[U(u)][U(e)])] = true;
      if (te[U(u)][U(e)] == e) stab.push_back(u);
    }
    out.push_back(stab);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_free_gamma_set(const FiniteASet& x) {
  const int one = x.domain->table().one;
  for (const auto& s : orbit_decomposition(x))
    if (s != std::vector<int>{one}) return false;
  return true;
}

// ---------------------------------------------------------------- length

LengthFiltration length_filtration(const FiniteASet& x) {
  const auto& d = *x.domain;
  bool infinite_units = !d.finite() && d.free_unit_rank() > 0;
  if (infinite_units) {
    if (x.size() == 1) return LengthFiltration{{1}, {}};
    throw not_finite_length_error("the unit group is infinite, so no nonzero finite set has finite length; witness " + element_list(x, x.all()));
  }
  FiniteASet residue = residue_aset(x.domain);
  const Mask all = x.all();
  std::set<Mask> dead;
  std::vector<Mask> chain{1};
  Mask stuck = 0;
  bool stuck_set = false;
  std::function<bool(Mask)> rec = [&](Mask f) -> bool {
    if (f == all) return true;
    if (dead.count(f)) return false;
    std::set<Mask> tried;
    for (int e = 1; e < x.size(); ++e) {
      if (has(f, e)) continue;
      Mask g = closure(x, f | single(e));
      if (!tried.insert(g).second) continue;
      ASetMap inc = sub_inclusion(x, g);
      Mask inner = 0;
      for (std::size_t i = 0; i < inc.map.size(); ++i)
        if (has(f, inc.map[i])) inner |= single(static_cast<int>(i));
      if (!isomorphic(rees_quotient(inc.source, inner).target, residue)) continue;
      chain.push_back(g);
      if (rec(g)) return true;
      chain.pop_back();
    }
    if (!stuck_set) {
      stuck = f;
      stuck_set = true;
    }
    dead.insert(f);
    return false;
  };
  if (!rec(1)) {
    throw not_finite_length_error("no composition series; the subquotient X/" + element_list(x, stuck) + " = " +
                                  element_list(rees_quotient(x, stuck).target, rees_quotient(x, stuck).target.all()) +
                                  " has no subobject with quotient " + element_list(residue, residue.all()));
  }
  LengthFiltration out;
  out.chain = chain;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    ASetMap inc = sub_inclusion(x, chain[i]);
    Mask inner = 0;
    for (std::size_t j = 0; j < inc.map.size(); ++j)
      if (has(chain[i - 1], inc.map[j])) inner |= single(static_cast<int>(j));
    out.steps.push_back(exact_sequence(inc.source, inner));
  }
  return out;
}

bool has_finite_length(const FiniteASet& x) {
  try {
    length_filtration(x);
    return true;
  } catch (const not_finite_length_error&) {
    return false;
  }
}

// ---------------------------------------------------------------- support and localization

namespace {

std::vector<PrimeIdeal> domain_primes(const ActionDomain& d) {
  if (d.finite()) return primes(d.table());
  return primes(d.monoid());
}

// Elements s outside the prime act on e without reaching the basepoint.
bool survives(const FiniteASet& x, const PrimeIdeal& p, int e, const std::vector<Transformation>* element_actions) {
  const auto& d = *x.domain;
  if (e == 0) return false;
  if (d.finite()) {
    const auto& t = d.table();
    for (int s = 0; s < t.size(); ++s)
      if (!std::binary_search(p.ideal.begin(), p.ideal.end(), s) && (*element_actions)[U(s)][U(e)] == 0) return false;
    return true;
  }
  std::vector<int> gens = p.face;
  for (int g = d.cone_generator_count(); g < d.generator_count(); ++g) gens.push_back(g);
  Mask seen = single(e);
  std::deque<int> q{e};
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int g : gens) {
      int w = x.act(g, v);
      if (w == 0) return false;
      if (!has(seen, w)) {
        seen |= single(w);
        q.push_back(w);
      }
    }
  }
  return true;
}

}  // namespace

std::vector<PrimeIdeal> support(const FiniteASet& x) {
  const auto& d = *x.domain;
  std::vector<Transformation> te;
  if (d.finite()) te = d.element_actions(x.action, x.size());
  std::vector<PrimeIdeal> out;
  for (const auto& p : domain_primes(d))
    for (int e = 1; e < x.size(); ++e)
      if (survives(x, p, e, &te)) {
        out.push_back(p);
        break;
      }
  return out;
}

std::optional<int> codim_support(const FiniteASet& x) {
  std::optional<int> best;
  for (const auto& p : support(x))
    if (!best || p.height < *best) best = p.height;
  return best;
}

Domain localized_domain(const Domain& d, const PrimeIdeal& p) {
  if (d->finite()) return make_domain(localize(d->table(), p));
  if (d->is_natural_numbers()) return make_domain(localize(std::get<AffineMonoid>(d->monoid()), p));
  throw invalid_action_error("localization of A-sets is implemented for finite monoids and N");
}

FiniteASet localize_aset(const FiniteASet& x, const PrimeIdeal& p, const Domain& localized) {
  const auto& d = *x.domain;
  if (d.finite()) {
    const auto& t = d.table();
    std::vector<std::pair<int, int>> fractions;
    FiniteMonoid l = localize(t, p, &fractions);
    if (!localized->finite() || localized->table().elements != l.elements)
      throw invalid_action_error("localized domain does not match the prime");
    auto te = d.element_actions(x.action, x.size());
    std::vector<int> s;
    for (int a = 0; a < t.size(); ++a)
      if (!std::binary_search(p.ideal.begin(), p.ideal.end(), a)) s.push_back(a);
    // Pairs (e, u) with (e,u) ~ (f,v) iff w v e = w u f for some w in S.
    std::vector<std::pair<int, int>> pairs{{0, t.one}};
    for (int e = 0; e < x.size(); ++e)
      for (int u : s)
        if (e != 0 || u != t.one) pairs.emplace_back(e, u);
    auto equivalent = [&](const std::pair<int, int>& a, const std::pair<int, int>& b) {
      for (int w : s)
        if (te[U(w)][U(te[U(b.second)][U(a.first)])] == te[U(w)][U(te[U(a.second)][U(b.first)])]) return true;
      return false;
    };
    std::vector<int> cls(pairs.size(), -1);
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      for (std::size_t r = 0; r < reps.size() && cls[i] < 0; ++r)
        if (equivalent(pairs[i], pairs[reps[r]])) cls[i] = static_cast<int>(r);
      if (cls[i] < 0) {
        cls[i] = static_cast<int>(reps.size());
        reps.push_back(i);
      }
    }
    auto class_of = [&](int e, int u) {
      for (std::size_t i = 0; i < pairs.size(); ++i)
        if (pairs[i].first == e && pairs[i].second == u) return cls[i];
      return -1;
    };
    FiniteASet out{localized, {}, {}};
    for (std::size_t r = 0; r < reps.size(); ++r) {
      std::string name;
      for (std::size_t i = 0; i < pairs.size() && name.empty(); ++i)
        if (cls[i] == static_cast<int>(r) && pairs[i].second == t.one) name = x.names[U(pairs[i].first)];
      if (name.empty()) name = x.names[U(pairs[reps[r]].first)] + "/" + t.elements[U(pairs[reps[r]].second)];
      out.names.push_back(name);
    }
    for (int g = 0; g < localized->generator_count(); ++g) {
      auto [num, den] = fractions[U(localized->generator_element(g))];
      Transformation tr;
      for (auto r : reps) {
        auto [e, u] = pairs[r];
        tr.push_back(class_of(te[U(num)][U(e)], t.mul(den, u)));
      }
      out.action.push_back(std::move(tr));
    }
    return out;
  }
  if (!d.is_natural_numbers()) throw invalid_action_error("localization of A-sets is implemented for finite monoids and N");
  if (p.face.empty()) {
    FiniteASet out = x;
    out.domain = localized;
    if (localized->generator_count() != 1) throw invalid_action_error("localized domain does not match the prime");
    return out;
  }
  // Inverting t keeps the periodic part, on which t acts as a unit.
  if (localized->generator_count() != 1 || !localized->generator_is_unit(0))
    throw invalid_action_error("localized domain does not match the prime");
  std::vector<int> keep{0};
  for (int e = 1; e < x.size(); ++e) {
    int y = e;
    for (int i = 0; i < x.size(); ++i) {
      y = x.act(0, y);
      if (y == e) {
        keep.push_back(e);
        break;
      }
      if (y == 0) break;
    }
  }
  std::map<int, int> pos;
  for (std::size_t i = 0; i < keep.size(); ++i) pos[keep[i]] = static_cast<int>(i);
  FiniteASet out{localized, {}, {Transformation{}}};
  for (int e : keep) {
    out.names.push_back(x.names[U(e)]);
    out.action[0].push_back(pos[x.act(0, e)]);
  }
  return out;
}

}  // namespace pcmk
