#include "pcmk/ktheory.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace pcmk {

namespace {

std::size_t U(int i) { return static_cast<std::size_t>(i); }

IntegerMatrix columns(const std::vector<IntegerVector>& cols, Eigen::Index rows) {
  IntegerMatrix m = IntegerMatrix::Zero(rows, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = cols[j];
  return m;
}

IntegerMatrix hcat(const IntegerMatrix& a, const IntegerMatrix& b) {
  IntegerMatrix m(a.rows(), a.cols() + b.cols());
  if (a.cols() > 0) m.leftCols(a.cols()) = a;
  if (b.cols() > 0) m.rightCols(b.cols()) = b;
  return m;
}

// Iso classes with a bucket per invariant key.
struct ClassIndex {
  std::vector<FiniteASet> classes;
  std::map<std::string, std::vector<int>> buckets;

  int find(const FiniteASet& x) const {
    auto it = buckets.find(invariant_key(x));
    if (it == buckets.end()) return -1;
    for (int i : it->second)
      if (isomorphic(classes[U(i)], x)) return i;
    return -1;
  }

  std::pair<int, bool> insert(const FiniteASet& x) {
    int i = find(x);
    if (i >= 0) return {i, false};
    i = static_cast<int>(classes.size());
    classes.push_back(x);
    buckets[invariant_key(x)].push_back(i);
    return {i, true};
  }
};

}  // namespace

int K0Presentation::find(const FiniteASet& x) const {
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (isomorphic(classes[i], x)) return static_cast<int>(i);
  return -1;
}

K0Presentation k0_of_objects(const std::vector<FiniteASet>& objects, std::size_t bound) {
  ClassIndex idx;
  K0Presentation out;
  std::deque<int> todo;
  auto add = [&](const FiniteASet& x) {
    auto [i, fresh] = idx.insert(x);
    if (fresh) {
      if (idx.classes.size() > bound)
        throw closure_bound_error("closure under subquotients exceeds " + std::to_string(bound) + " classes");
      todo.push_back(i);
    }
    return i;
  };
  for (const auto& x : objects) out.class_of.push_back(add(x));
  while (!todo.empty()) {
    FiniteASet y = idx.classes[U(todo.front())];
    todo.pop_front();
    for (Mask m : subobjects(y)) {
      ExactSeq s = exact_sequence(y, m);
      add(s.i.source);
      add(s.p.target);
    }
  }
  const auto n = static_cast<Eigen::Index>(idx.classes.size());
  std::set<std::vector<int>> seen;
  std::vector<IntegerVector> rels;
  for (std::size_t c = 0; c < idx.classes.size(); ++c) {
    const auto& y = idx.classes[c];
    for (Mask m : subobjects(y)) {
      ExactSeq s = exact_sequence(y, m);
      std::vector<int> key{static_cast<int>(c), idx.find(s.i.source), idx.find(s.p.target)};
      if (!seen.insert(key).second) continue;
      IntegerVector r = IntegerVector::Zero(n);
      r(key[0]) += 1;
      r(key[1]) -= 1;
      r(key[2]) -= 1;
      rels.push_back(r);
    }
  }
  out.classes = std::move(idx.classes);
  out.relations = columns(rels, n);
  out.group = PresentedGroup(out.relations, n);
  return out;
}

// ---------------------------------------------------------------- Burnside

std::vector<std::vector<int>> subgroups(const UnitGroup& g) {
  if (!g.finite()) throw std::invalid_argument("subgroups of an infinite group");
  const auto& orders = g.torsion;
  int n = 1;
  for (auto o : orders) n *= static_cast<int>(o);
  auto add = [&](int a, int b) {
    int out = 0, scale = 1;
    for (auto o : orders) {
      int oi = static_cast<int>(o);
      out += ((a % oi + b % oi) % oi) * scale;
      a /= oi;
      b /= oi;
      scale *= oi;
    }
    return out;
  };
  auto close = [&](std::vector<int> gens) {
    std::set<int> h{0};
    std::deque<int> q{0};
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (int s : gens) {
        int y = add(x, s);
        if (h.insert(y).second) q.push_back(y);
      }
    }
    return std::vector<int>(h.begin(), h.end());
  };
  std::set<std::vector<int>> found{{0}};
  std::deque<std::vector<int>> q{{0}};
  while (!q.empty()) {
    auto h = q.front();
    q.pop_front();
    for (int x = 0; x < n; ++x) {
      if (std::binary_search(h.begin(), h.end(), x)) continue;
      auto gens = h;
      gens.push_back(x);
      auto bigger = close(gens);
      if (found.insert(bigger).second) q.push_back(bigger);
    }
  }
  return {found.begin(), found.end()};
}

std::size_t burnside_rank(const UnitGroup& g) { return subgroups(g).size(); }

// ---------------------------------------------------------------- devissage

bool killed_by_maximal_power(const FiniteASet& x) {
  const auto& d = *x.domain;
  if (!d.finite()) throw invalid_action_error("maximal-ideal filtration needs a finite monoid");
  const auto& t = d.table();
  auto acts = d.element_actions(x.action, x.size());
  std::vector<int> nonunits;
  for (int a = 0; a < t.size(); ++a) {
    bool unit = false;
    for (int b = 0; b < t.size() && !unit; ++b) unit = t.mul(a, b) == t.one;
    if (!unit) nonunits.push_back(a);
  }
  Mask s = x.all();
  while (true) {
    Mask next = 1;
    for (int a : nonunits)
      for (int e = 0; e < x.size(); ++e)
        if ((s >> e) & 1U) next |= Mask(1) << acts[U(a)][U(e)];
    next = closure(x, next);
    if (next == s) break;
    s = next;
  }
  return s == 1;
}

DevissageReport devissage_check_k0(const FiniteMonoid& a, bool pc, int max_size) {
  Domain d = make_domain(a);
  std::vector<FiniteASet> objs;
  for (const auto& x : enumerate_asets(d, max_size))
    if (killed_by_maximal_power(x) && (!pc || is_pc_aset(x))) objs.push_back(x);
  DevissageReport r;
  r.objects = objs.size();
  K0Presentation p = k0_of_objects(objs, std::max<std::size_t>(64, objs.size()));
  r.k0 = p.k0();
  UnitGroup gamma = units(a);
  if (pc) {
    r.expected = AbelianGroup::integers(1);
    r.expected_source = "K0(Gamma)";
    int irr = p.find(residue_aset(d));
    r.classes_match_length = irr >= 0;
    if (irr >= 0) {
      const auto n = static_cast<Eigen::Index>(p.classes.size());
      for (Eigen::Index i = 0; i < n && r.classes_match_length; ++i) {
        IntegerVector v = IntegerVector::Zero(n);
        v(i) += 1;
        v(irr) -= length_filtration(p.classes[static_cast<std::size_t>(i)]).length();
        r.classes_match_length = p.group.is_zero(v);
      }
    }
  } else {
    r.expected = AbelianGroup::integers(static_cast<std::int64_t>(burnside_rank(gamma)));
    r.expected_source = "Burnside ring";
  }
  r.match = r.k0 == r.expected && r.classes_match_length;
  return r;
}

// ---------------------------------------------------------------- localization

FiniteASet reduced_object(const FiniteASet& x, const SerrePredicate& c) {
  FiniteASet cur = x;
  while (true) {
    WindowPair w = canonical_window(cur, cur, c);
    FiniteASet sub = sub_inclusion(cur, w.sub).source;
    WindowPair w2 = canonical_window(sub, sub, c);
    FiniteASet next = rees_quotient(sub, w2.kernel).target;
    if (next.size() == cur.size()) return next;
    cur = std::move(next);
  }
}

LocalizationK0Report localization_exactness_k0(const std::vector<FiniteASet>& objects, const SerrePredicate& c,
                                               std::size_t bound) {
  LocalizationK0Report r;
  K0Presentation m = k0_of_objects(objects, bound);
  std::vector<FiniteASet> in_c;
  for (const auto& x : m.classes)
    if (contains(c, x)) in_c.push_back(x);
  K0Presentation kc = k0_of_objects(in_c, bound);
  const auto nm = static_cast<Eigen::Index>(m.classes.size());
  const auto nc = static_cast<Eigen::Index>(kc.classes.size());

  ClassIndex mc;
  std::vector<int> phi_of;
  for (const auto& x : m.classes) phi_of.push_back(mc.insert(reduced_object(x, c)).first);
  const auto nq = static_cast<Eigen::Index>(mc.classes.size());
  IntegerMatrix phi = IntegerMatrix::Zero(nq, nm);
  for (Eigen::Index i = 0; i < nm; ++i) phi(phi_of[U(static_cast<int>(i))], i) = 1;
  IntegerMatrix iota = IntegerMatrix::Zero(nm, nc);
  for (Eigen::Index j = 0; j < nc; ++j) {
    int i = m.find(kc.classes[U(static_cast<int>(j))]);
    if (i < 0) throw std::logic_error("object of C missing from M");
    iota(i, j) = 1;
  }
  IntegerMatrix rq = phi * m.relations;

  r.k0_m = m.k0();
  r.k0_c = kc.k0();
  r.k0_mc = cokernel(rq);
  r.m_classes = m.classes.size();
  r.c_classes = kc.classes.size();
  r.mc_classes = mc.classes.size();

  PresentedGroup q(rq, nq);
  IntegerMatrix composite = phi * iota;
  r.composite_zero = true;
  for (Eigen::Index j = 0; j < composite.cols(); ++j) r.composite_zero &= q.is_zero(composite.col(j));
  r.exact_middle = kernel_of(phi, hcat(iota, m.relations), rq).trivial();
  r.surjective = cokernel_of(phi, rq).trivial();
  return r;
}

}  // namespace pcmk
