#include "pcmk/aset.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <Eigen/LU>

namespace pcmk {

namespace {

std::size_t U(int i) { return static_cast<std::size_t>(i); }
bool has(Mask m, int i) { return ((m >> i) & 1U) != 0; }
Mask single(int i) { return Mask(1) << i; }

Transformation identity_transform(int n) {
  Transformation t(U(n));
  std::iota(t.begin(), t.end(), 0);
  return t;
}

// (a o b)(x) = a(b(x))
Transformation after(const Transformation& a, const Transformation& b) {
  Transformation out(b.size());
  for (std::size_t x = 0; x < b.size(); ++x) out[x] = a[U(b[x])];
  return out;
}

Transformation power_of(const Transformation& t, std::int64_t k) {
  Transformation out = identity_transform(static_cast<int>(t.size()));
  for (std::int64_t i = 0; i < k; ++i) out = after(t, out);
  return out;
}

bool is_constant_base(const Transformation& t) {
  return std::all_of(t.begin(), t.end(), [](int v) { return v == 0; });
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

bool same_object(const FiniteASet& a, const FiniteASet& b) {
  return a.domain == b.domain && a.names == b.names && a.action == b.action;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(U(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[U(x)] != x) x = parent[U(x)] = parent[U(parent[U(x)])];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent[U(b)] = a;
    return true;
  }
};

// Closes an equivalence on the elements of x under the action.
void close_under_action(const FiniteASet& x, UnionFind& uf) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int e = 0; e < x.size(); ++e) {
      int r = uf.find(e);
      if (r == e) continue;
      for (int g = 0; g < static_cast<int>(x.action.size()); ++g) changed |= uf.unite(x.act(g, e), x.act(g, r));
    }
  }
}

std::vector<int> labels_of(UnionFind& uf, int n) {
  std::vector<int> out(U(n));
  for (int i = 0; i < n; ++i) out[U(i)] = uf.find(i);
  return out;
}

}  // namespace

// ---------------------------------------------------------------- domains

ActionDomain::ActionDomain(Monoid m) : monoid_(std::move(m)) {
  auto report = validate_monoid(monoid_);
  if (!report.ok()) throw invalid_monoid_error(report.violations.front());
  table_ = finite_form(monoid_);
  if (table_) {
    const auto& t = *table_;
    const int n = t.size();
    gen_elements_ = monoid_generators(t);
    for (int g : gen_elements_) names_.push_back(t.elements[U(g)]);
    words_.assign(U(n), {});
    has_word_.assign(U(n), false);
    has_word_[U(t.one)] = true;
    std::deque<int> q{t.one};
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (std::size_t g = 0; g < gen_elements_.size(); ++g) {
        int y = t.mul(gen_elements_[g], x);
        if (has_word_[U(y)]) continue;
        has_word_[U(y)] = true;
        words_[U(y)] = words_[U(x)];
        words_[U(y)].push_back(static_cast<int>(g));
        q.push_back(y);
      }
    }
    auto is_unit = [&](int a) {
      for (int b = 0; b < n; ++b)
        if (t.mul(a, b) == t.one) return true;
      return false;
    };
    for (int g : gen_elements_) {
      bool u = !t.terminal() && is_unit(g);
      unit_gen_.push_back(u);
      std::int64_t order = 0;
      if (u)
        for (int k = 1; k <= n; ++k)
          if (t.power(g, k) == t.one) {
            order = k;
            break;
          }
      gen_order_.push_back(order);
    }
    group_ = !t.terminal();
    for (int a = 0; a < n && group_; ++a)
      if (a != t.zero && !is_unit(a)) group_ = false;
    return;
  }
  const auto& a = std::get<AffineMonoid>(monoid_);
  const int k = a.generator_count();
  if (matrix_rank(a.generators) != k)
    throw invalid_action_error("acting on finite sets needs linearly independent cone generators");
  Cone cone = cone_of(a);
  names_ = affine_generator_names(a);
  cone_gens_ = k;
  torsion_ = a.units.torsion;
  free_units_ = a.units.free_rank;
  for (int i = 0; i < k; ++i) {
    unit_gen_.push_back(false);
    gen_order_.push_back(0);
  }
  for (auto d : torsion_) {
    unit_gen_.push_back(true);
    gen_order_.push_back(d);
  }
  for (std::int64_t i = 0; i < free_units_; ++i) {
    unit_gen_.push_back(true);
    gen_order_.push_back(0);
  }
  Eigen::MatrixXd c = cone.coords().cast<double>();
  for (const auto& v : a.ideal) {
    auto coords = cone.to_coords(v);
    if (!coords) throw invalid_monoid_error("ideal generator outside the monoid");
    Eigen::VectorXd sol = c.fullPivLu().solve(coords->cast<double>());
    std::vector<std::int64_t> e;
    LatticeVector check = LatticeVector::Zero(cone.rank());
    for (int i = 0; i < k; ++i) {
      auto r = static_cast<std::int64_t>(std::llround(sol(i)));
      if (r < 0) throw invalid_monoid_error("ideal generator outside the monoid");
      e.push_back(r);
      check += r * cone.coords().col(i);
    }
    if (check != *coords) throw invalid_monoid_error("ideal generator outside the monoid");
    ideal_exponents_.push_back(std::move(e));
  }
  natural_ = k == 1 && torsion_.empty() && free_units_ == 0 && a.ideal.empty();
}

const FiniteMonoid& ActionDomain::table() const {
  if (!table_) throw invalid_action_error("the monoid is infinite");
  return *table_;
}

int ActionDomain::generator_index(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  return -1;
}

std::vector<Transformation> ActionDomain::element_actions(const std::vector<Transformation>& gens, int n) const {
  const auto& t = table();
  std::vector<Transformation> out(U(t.size()));
  for (int e = 0; e < t.size(); ++e) {
    if (e == t.zero || !has_word_[U(e)]) {
      out[U(e)] = Transformation(U(n), 0);
      continue;
    }
    Transformation cur = identity_transform(n);
    for (int g : words_[U(e)]) cur = after(gens[U(g)], cur);
    out[U(e)] = std::move(cur);
  }
  return out;
}

std::vector<std::string> ActionDomain::check_action(const std::vector<Transformation>& gens, int n) const {
  std::vector<std::string> v;
  if (n < 1) return {"an A-set needs a basepoint"};
  if (gens.size() != names_.size())
    return {"expected " + std::to_string(names_.size()) + " generator actions, got " + std::to_string(gens.size())};
  for (std::size_t g = 0; g < gens.size(); ++g) {
    if (gens[g].size() != U(n)) {
      v.push_back("action of " + names_[g] + " has the wrong length");
      continue;
    }
    for (int y : gens[g])
      if (y < 0 || y >= n) {
        v.push_back("action of " + names_[g] + " leaves the set");
        break;
      }
    if (gens[g][0] != 0) v.push_back(names_[g] + " does not fix the basepoint");
  }
  if (!v.empty()) return v;
  for (std::size_t g = 0; g < gens.size(); ++g)
    for (std::size_t h = g + 1; h < gens.size(); ++h)
      if (after(gens[g], gens[h]) != after(gens[h], gens[g])) v.push_back(names_[g] + " and " + names_[h] + " do not commute");
  if (!v.empty()) return v;
  if (table_) {
    const auto& t = *table_;
    if (t.terminal()) {
      if (n != 1) v.push_back("the terminal monoid only acts on *");
      return v;
    }
    auto te = element_actions(gens, n);
    for (int a = 0; a < t.size() && v.empty(); ++a) {
      if (a != t.zero && has_word_[U(a)]) continue;
      Transformation cur = identity_transform(n);
      for (int g : words_[U(a)]) cur = after(gens[U(g)], cur);
      if (a == t.zero && has_word_[U(a)] && !is_constant_base(cur)) v.push_back("zero does not act as the basepoint");
    }
    for (int a = 0; a < t.size() && v.empty(); ++a)
      for (int b = 0; b < t.size() && v.empty(); ++b)
        if (after(te[U(a)], te[U(b)]) != te[U(t.mul(a, b))])
          v.push_back("action is not compatible with " + t.elements[U(a)] + " * " + t.elements[U(b)]);
    return v;
  }
  for (std::size_t i = 0; i < torsion_.size(); ++i) {
    std::size_t g = U(cone_gens_) + i;
    if (power_of(gens[g], torsion_[i]) != identity_transform(n)) v.push_back(names_[g] + " does not have order dividing " + std::to_string(torsion_[i]));
  }
  for (std::int64_t i = 0; i < free_units_; ++i) {
    std::size_t g = U(cone_gens_) + torsion_.size() + static_cast<std::size_t>(i);
    std::vector<int> sorted = gens[g];
    std::sort(sorted.begin(), sorted.end());
    if (sorted != identity_transform(n)) v.push_back(names_[g] + " is a unit but does not act bijectively");
  }
  for (const auto& e : ideal_exponents_) {
    Transformation cur = identity_transform(n);
    for (std::size_t i = 0; i < e.size(); ++i) cur = after(power_of(gens[i], e[i]), cur);
    if (!is_constant_base(cur)) v.push_back("an element of the ideal does not act as the basepoint");
  }
  return v;
}

Domain make_domain(Monoid m) { return std::make_shared<const ActionDomain>(std::move(m)); }

// ---------------------------------------------------------------- objects

ValidationReport validate_aset(const FiniteASet& x) {
  ValidationReport r;
  if (!x.domain) {
    r.violations.push_back("missing monoid");
    return r;
  }
  std::set<std::string> seen;
  for (const auto& n : x.names) {
    if (n.empty()) r.violations.push_back("empty element name");
    if (!seen.insert(n).second) r.violations.push_back("duplicate element name " + n);
  }
  if (x.size() > 64) r.violations.push_back("A-sets are limited to 64 elements");
  for (auto& v : x.domain->check_action(x.action, x.size())) r.violations.push_back(std::move(v));
  return r;
}

FiniteASet make_aset(const Domain& d, std::vector<std::string> names, std::vector<Transformation> action) {
  FiniteASet x{d, std::move(names), std::move(action)};
  auto r = validate_aset(x);
  if (!r.ok()) throw invalid_action_error(join(r.violations, "; "));
  return x;
}

FiniteASet zero_aset(const Domain& d) {
  return FiniteASet{d, {"*"}, std::vector<Transformation>(U(d->generator_count()), Transformation{0})};
}

FiniteASet regular_aset(const Domain& d) {
  const auto& t = d->table();
  std::vector<int> order{t.zero};
  for (int a = 0; a < t.size(); ++a)
    if (a != t.zero) order.push_back(a);
  std::vector<int> pos(U(t.size()));
  for (std::size_t i = 0; i < order.size(); ++i) pos[U(order[i])] = static_cast<int>(i);
  FiniteASet x{d, {}, {}};
  for (int a : order) x.names.push_back(a == t.zero ? "*" : t.elements[U(a)]);
  for (int g = 0; g < d->generator_count(); ++g) {
    Transformation tr(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) tr[i] = pos[U(t.mul(d->generator_element(g), order[i]))];
    x.action.push_back(std::move(tr));
  }
  return x;
}

FiniteASet residue_aset(const Domain& d) {
  FiniteASet x{d, {"*"}, {}};
  if (d->finite()) {
    const auto& t = d->table();
    if (t.terminal()) return zero_aset(d);
    std::vector<int> units;
    for (int a = 0; a < t.size(); ++a)
      for (int b = 0; b < t.size(); ++b)
        if (t.mul(a, b) == t.one) {
          units.push_back(a);
          break;
        }
    std::vector<int> pos(U(t.size()), 0);
    for (std::size_t i = 0; i < units.size(); ++i) {
      pos[U(units[i])] = static_cast<int>(i) + 1;
      x.names.push_back(t.elements[U(units[i])]);
    }
    for (int g = 0; g < d->generator_count(); ++g) {
      Transformation tr(units.size() + 1, 0);
      if (d->generator_is_unit(g))
        for (std::size_t i = 0; i < units.size(); ++i) tr[i + 1] = pos[U(t.mul(d->generator_element(g), units[i]))];
      x.action.push_back(std::move(tr));
    }
    return x;
  }
  if (d->free_unit_rank() > 0) throw invalid_action_error("the unit group is infinite");
  const auto& tor = d->torsion_orders();
  // Elements of the torsion group in mixed radix order.
  std::vector<std::vector<std::int64_t>> elems{{}};
  for (auto o : tor) {
    std::vector<std::vector<std::int64_t>> next;
    for (const auto& e : elems)
      for (std::int64_t i = 0; i < o; ++i) {
        auto f = e;
        f.push_back(i);
        next.push_back(std::move(f));
      }
    elems = std::move(next);
  }
  std::map<std::vector<std::int64_t>, int> pos;
  for (const auto& e : elems) {
    pos[e] = static_cast<int>(x.names.size());
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) parts.push_back("g" + std::to_string(i + 1) + (e[i] == 1 ? "" : "^" + std::to_string(e[i])));
    x.names.push_back(parts.empty() ? "1" : join(parts, "."));
  }
  for (int g = 0; g < d->generator_count(); ++g) {
    Transformation tr(elems.size() + 1, 0);
    int ti = g - d->cone_generator_count();
    if (ti >= 0)
      for (const auto& e : elems) {
        auto f = e;
        f[U(ti)] = (f[U(ti)] + 1) % tor[U(ti)];
        tr[U(pos[e])] = pos[f];
      }
    x.action.push_back(std::move(tr));
  }
  return x;
}

FiniteASet wedge(const FiniteASet& x, const FiniteASet& y) {
  FiniteASet w{x.domain, x.names, {}};
  std::set<std::string> used(x.names.begin(), x.names.end());
  for (int i = 1; i < y.size(); ++i) {
    std::string n = y.names[U(i)];
    while (used.count(n)) n += "'";
    used.insert(n);
    w.names.push_back(n);
  }
  const int off = x.size() - 1;
  for (std::size_t g = 0; g < x.action.size(); ++g) {
    Transformation t = x.action[g];
    for (int i = 1; i < y.size(); ++i) {
      int v = y.action[g][U(i)];
      t.push_back(v == 0 ? 0 : v + off);
    }
    w.action.push_back(std::move(t));
  }
  return w;
}

// ---------------------------------------------------------------- maps

bool is_equivariant(const FiniteASet& x, const FiniteASet& y, const std::vector<int>& f) {
  if (f.size() != U(x.size()) || f.empty() || f[0] != 0) return false;
  for (int v : f)
    if (v < 0 || v >= y.size()) return false;
  for (std::size_t g = 0; g < x.action.size(); ++g)
    for (int e = 0; e < x.size(); ++e)
      if (f[U(x.act(static_cast<int>(g), e))] != y.act(static_cast<int>(g), f[U(e)])) return false;
  return true;
}

ASetMap identity_map(const FiniteASet& x) { return {x, x, identity_transform(x.size())}; }

ASetMap compose(const ASetMap& g, const ASetMap& f) { return {f.source, g.target, after(g.map, f.map)}; }

bool injective(const std::vector<int>& f) {
  std::set<int> s(f.begin(), f.end());
  return s.size() == f.size();
}

bool surjective(const std::vector<int>& f, int target_size) {
  std::set<int> s(f.begin(), f.end());
  return static_cast<int>(s.size()) == target_size;
}

// ---------------------------------------------------------------- subobjects and quotients

Mask closure(const FiniteASet& x, Mask m) {
  m |= 1;
  std::deque<int> q;
  for (int i = 0; i < x.size(); ++i)
    if (has(m, i)) q.push_back(i);
  while (!q.empty()) {
    int e = q.front();
    q.pop_front();
    for (std::size_t g = 0; g < x.action.size(); ++g) {
      int y = x.act(static_cast<int>(g), e);
      if (!has(m, y)) {
        m |= single(y);
        q.push_back(y);
      }
    }
  }
  return m;
}

bool is_subobject(const FiniteASet& x, Mask m) { return has(m, 0) && closure(x, m) == m; }

std::vector<Mask> subobjects(const FiniteASet& x) {
  std::vector<Mask> principal;
  for (int i = 1; i < x.size(); ++i) principal.push_back(closure(x, single(i)));
  std::set<Mask> found{Mask(1)};
  std::vector<Mask> frontier{Mask(1)};
  while (!frontier.empty()) {
    std::vector<Mask> next;
    for (Mask s : frontier)
      for (Mask p : principal) {
        Mask u = s | p;
        if (found.insert(u).second) next.push_back(u);
      }
    frontier = std::move(next);
  }
  return {found.begin(), found.end()};
}

ASetMap sub_inclusion(const FiniteASet& x, Mask m) {
  if (!is_subobject(x, m)) throw invalid_action_error("not a subobject: " + element_list(x, m));
  std::vector<int> keep, pos(U(x.size()), -1);
  for (int i = 0; i < x.size(); ++i)
    if (has(m, i)) {
      pos[U(i)] = static_cast<int>(keep.size());
      keep.push_back(i);
    }
  FiniteASet s{x.domain, {}, {}};
  for (int i : keep) s.names.push_back(x.names[U(i)]);
  for (std::size_t g = 0; g < x.action.size(); ++g) {
    Transformation t;
    for (int i : keep) t.push_back(pos[U(x.act(static_cast<int>(g), i))]);
    s.action.push_back(std::move(t));
  }
  return {s, x, keep};
}

ASetMap rees_quotient(const FiniteASet& x, Mask m) {
  if (!is_subobject(x, m)) throw invalid_action_error("not a subobject: " + element_list(x, m));
  std::vector<int> classes(U(x.size()));
  for (int i = 0; i < x.size(); ++i) classes[U(i)] = has(m, i) ? 0 : i;
  FiniteASet q{x.domain, {x.names[0]}, {}};
  std::vector<int> pos(U(x.size()), 0);
  for (int i = 0; i < x.size(); ++i)
    if (!has(m, i)) {
      pos[U(i)] = static_cast<int>(q.names.size());
      q.names.push_back(x.names[U(i)]);
    }
  for (std::size_t g = 0; g < x.action.size(); ++g) {
    Transformation t(q.names.size(), 0);
    for (int i = 0; i < x.size(); ++i)
      if (!has(m, i)) t[U(pos[U(i)])] = pos[U(x.act(static_cast<int>(g), i))];
    q.action.push_back(std::move(t));
  }
  return {x, q, pos};
}

ASetMap congruence_quotient(const FiniteASet& x, const std::vector<int>& classes) {
  if (classes.size() != U(x.size())) throw invalid_action_error("class labels do not match the set");
  std::map<int, int> cls;
  std::vector<int> order;
  cls[classes[0]] = 0;
  order.push_back(classes[0]);
  for (int i = 0; i < x.size(); ++i)
    if (!cls.count(classes[U(i)])) {
      cls[classes[U(i)]] = static_cast<int>(order.size());
      order.push_back(classes[U(i)]);
    }
  std::vector<int> map(U(x.size()));
  for (int i = 0; i < x.size(); ++i) map[U(i)] = cls[classes[U(i)]];
  FiniteASet q{x.domain, {}, {}};
  for (std::size_t c = 0; c < order.size(); ++c) {
    std::vector<std::string> members;
    for (int i = 0; i < x.size(); ++i)
      if (map[U(i)] == static_cast<int>(c)) members.push_back(x.names[U(i)]);
    q.names.push_back(c == 0 ? x.names[0] : join(members, "="));
  }
  for (std::size_t g = 0; g < x.action.size(); ++g) {
    Transformation t(order.size(), -1);
    for (int i = 0; i < x.size(); ++i) {
      int v = map[U(x.act(static_cast<int>(g), i))];
      int& slot = t[U(map[U(i)])];
      if (slot >= 0 && slot != v) throw invalid_action_error("relation is not compatible with the action");
      slot = v;
    }
    q.action.push_back(std::move(t));
  }
  return {x, q, map};
}

std::vector<std::vector<int>> congruences(const FiniteASet& x) {
  const int n = x.size();
  std::vector<std::vector<int>> out;
  std::vector<int> label(U(n), 0);
  auto compatible = [&]() {
    for (std::size_t g = 0; g < x.action.size(); ++g)
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (label[U(i)] == label[U(j)] && label[U(x.act(static_cast<int>(g), i))] != label[U(x.act(static_cast<int>(g), j))])
            return false;
    return true;
  };
  std::function<void(int, int)> rec = [&](int i, int used) {
    if (i == n) {
      if (compatible()) out.push_back(label);
      return;
    }
    for (int c = 0; c <= used; ++c) {
      label[U(i)] = c;
      rec(i + 1, std::max(used, c + 1));
    }
  };
  rec(1, 1);
  return out;
}

Mask image_mask(const ASetMap& f) {
  Mask m = 1;
  for (int v : f.map) m |= single(v);
  return m;
}

Mask preimage_mask(const ASetMap& f, Mask target) {
  Mask m = 0;
  for (std::size_t i = 0; i < f.map.size(); ++i)
    if (has(target, f.map[i])) m |= single(static_cast<int>(i));
  return m;
}

std::optional<std::vector<int>> descend(const ASetMap& q, const ASetMap& f) {
  std::vector<int> h(U(q.target.size()), -1);
  for (std::size_t i = 0; i < q.map.size(); ++i) {
    int& slot = h[U(q.map[i])];
    if (slot >= 0 && slot != f.map[i]) return std::nullopt;
    slot = f.map[i];
  }
  if (std::find(h.begin(), h.end(), -1) != h.end()) return std::nullopt;
  return h;
}

// ---------------------------------------------------------------- exactness

ASetMap kernel(const ASetMap& p) {
  ASetMap inc = sub_inclusion(p.source, preimage_mask(p, 1));
  return inc;
}

ASetMap cokernel(const ASetMap& i) { return rees_quotient(i.target, image_mask(i)); }

std::pair<ASetMap, ASetMap> image_factorization(const ASetMap& f) {
  ASetMap mono = sub_inclusion(f.target, image_mask(f));
  std::vector<int> pos(U(f.target.size()), -1);
  for (std::size_t k = 0; k < mono.map.size(); ++k) pos[U(mono.map[k])] = static_cast<int>(k);
  std::vector<int> e;
  for (int v : f.map) e.push_back(pos[U(v)]);
  return {ASetMap{f.source, mono.source, e}, mono};
}

ExactSeq exact_sequence(const FiniteASet& y, Mask sub) { return {sub_inclusion(y, sub), rees_quotient(y, sub)}; }

bool is_exact(const ExactSeq& s) {
  if (!same_object(s.i.target, s.p.source)) return false;
  if (!is_equivariant(s.i.source, s.i.target, s.i.map) || !is_equivariant(s.p.source, s.p.target, s.p.map)) return false;
  if (!injective(s.i.map) || !surjective(s.p.map, s.p.target.size())) return false;
  Mask im = image_mask(s.i);
  std::set<int> hit;
  for (int y = 0; y < s.p.source.size(); ++y) {
    bool in = has(im, y);
    int v = s.p.map[U(y)];
    if (in != (v == 0)) return false;
    if (!in && !hit.insert(v).second) return false;
  }
  return true;
}

// ---------------------------------------------------------------- homs and isomorphism

namespace {

// Greedy generators of x as an A-set.
std::vector<int> aset_generators(const FiniteASet& x) {
  std::vector<int> gens;
  Mask reached = 1;
  for (int i = 1; i < x.size(); ++i) {
    if (has(reached, i)) continue;
    gens.push_back(i);
    reached = closure(x, reached | single(i));
  }
  return gens;
}

// Extends f from the value at `start` along the action; false on a conflict.
bool propagate(const FiniteASet& x, const FiniteASet& y, std::vector<int>& f, int start) {
  std::deque<int> q{start};
  while (!q.empty()) {
    int e = q.front();
    q.pop_front();
    for (std::size_t g = 0; g < x.action.size(); ++g) {
      int a = x.act(static_cast<int>(g), e);
      int b = y.act(static_cast<int>(g), f[U(e)]);
      if (f[U(a)] < 0) {
        f[U(a)] = b;
        q.push_back(a);
      } else if (f[U(a)] != b) {
        return false;
      }
    }
  }
  return true;
}

void search_homs(const FiniteASet& x, const FiniteASet& y, const std::vector<int>& gens, std::size_t i, std::vector<int>& f,
                 const std::function<bool(const std::vector<int>&)>& admissible, const std::function<bool(const std::vector<int>&)>& emit,
                 bool& stop) {
  if (stop) return;
  if (i == gens.size()) {
    if (admissible(f)) stop = !emit(f);
    return;
  }
  int e = gens[i];
  if (f[U(e)] >= 0) {
    search_homs(x, y, gens, i + 1, f, admissible, emit, stop);
    return;
  }
  for (int v = 0; v < y.size() && !stop; ++v) {
    std::vector<int> g = f;
    g[U(e)] = v;
    if (!propagate(x, y, g, e)) continue;
    search_homs(x, y, gens, i + 1, g, admissible, emit, stop);
  }
}

void for_each_hom(const FiniteASet& x, const FiniteASet& y, const std::function<bool(const std::vector<int>&)>& admissible,
                  const std::function<bool(const std::vector<int>&)>& emit) {
  if (x.domain != y.domain && x.action.size() != y.action.size()) return;
  std::vector<int> f(U(x.size()), -1);
  f[0] = 0;
  if (!propagate(x, y, f, 0)) return;
  bool stop = false;
  search_homs(x, y, aset_generators(x), 0, f, admissible, emit, stop);
}

// Canonical colour refinement; returns final colours and appends a description of every round to key.
std::vector<int> refine(const FiniteASet& x, std::string& key) {
  const int n = x.size();
  const auto k = x.action.size();
  std::vector<int> col(U(n), 1);
  col[0] = 0;
  std::size_t classes = n > 1 ? 2 : 1;
  std::ostringstream out;
  out << n << ':' << k << ';';
  for (int round = 0; round <= n; ++round) {
    std::vector<std::vector<int>> sig(U(n));
    for (int e = 0; e < n; ++e) {
      auto& s = sig[U(e)];
      s.push_back(col[U(e)]);
      for (std::size_t g = 0; g < k; ++g) s.push_back(col[U(x.act(static_cast<int>(g), e))]);
      for (std::size_t g = 0; g < k; ++g) {
        std::vector<int> pre;
        for (int z = 0; z < n; ++z)
          if (x.act(static_cast<int>(g), z) == e) pre.push_back(col[U(z)]);
        std::sort(pre.begin(), pre.end());
        s.push_back(-1);
        s.insert(s.end(), pre.begin(), pre.end());
      }
    }
    std::vector<std::vector<int>> distinct = sig;
    std::sort(distinct.begin(), distinct.end());
    std::vector<std::vector<int>> all_sorted = distinct;
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (int e = 0; e < n; ++e)
      col[U(e)] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), sig[U(e)]) - distinct.begin());
    out << '[';
    for (const auto& s : all_sorted) {
      for (int v : s) out << v << ',';
      out << '|';
    }
    out << ']';
    if (distinct.size() == classes && round > 0) break;
    classes = distinct.size();
  }
  key += out.str();
  return col;
}

}  // namespace

std::vector<std::vector<int>> homs(const FiniteASet& x, const FiniteASet& y) {
  std::vector<std::vector<int>> out;
  for_each_hom(
      x, y, [](const std::vector<int>&) { return true; },
      [&](const std::vector<int>& f) {
        out.push_back(f);
        return true;
      });
  return out;
}

std::size_t count_homs(const FiniteASet& x, const FiniteASet& y) {
  std::size_t n = 0;
  for_each_hom(
      x, y, [](const std::vector<int>&) { return true; },
      [&](const std::vector<int>&) {
        ++n;
        return true;
      });
  return n;
}

std::string invariant_key(const FiniteASet& x) {
  std::string key;
  refine(x, key);
  return key;
}

std::optional<std::vector<int>> find_isomorphism(const FiniteASet& x, const FiniteASet& y) {
  if (x.size() != y.size() || x.action.size() != y.action.size()) return std::nullopt;
  std::string kx, ky;
  auto cx = refine(x, kx);
  auto cy = refine(y, ky);
  if (kx != ky) return std::nullopt;
  std::optional<std::vector<int>> found;
  auto gens = aset_generators(x);
  std::vector<int> f(U(x.size()), -1);
  f[0] = 0;
  if (!propagate(x, y, f, 0)) return std::nullopt;
  std::function<void(std::size_t, std::vector<int>&)> rec = [&](std::size_t i, std::vector<int>& cur) {
    if (found) return;
    if (i == gens.size()) {
      if (injective(cur)) found = cur;
      return;
    }
    int e = gens[i];
    if (cur[U(e)] >= 0) {
      rec(i + 1, cur);
      return;
    }
    for (int v = 1; v < y.size() && !found; ++v) {
      if (cy[U(v)] != cx[U(e)]) continue;
      std::vector<int> g = cur;
      g[U(e)] = v;
      if (!propagate(x, y, g, e)) continue;
      bool ok = true;
      std::vector<bool> used(U(y.size()), false);
      for (int z = 0; z < x.size() && ok; ++z) {
        if (g[U(z)] < 0) continue;
        if (cy[U(g[U(z)])] != cx[U(z)] || used[U(g[U(z)])]) ok = false;
        else used[U(g[U(z)])] = true;
      }
      if (ok) rec(i + 1, g);
    }
  };
  rec(0, f);
  return found;
}

bool isomorphic(const FiniteASet& x, const FiniteASet& y) { return find_isomorphism(x, y).has_value(); }

// ---------------------------------------------------------------- limits and colimits

Pullback pullback(const ASetMap& f, const ASetMap& g) {
  const FiniteASet& x = f.source;
  const FiniteASet& y = g.source;
  if (f.target.size() != g.target.size()) throw invalid_action_error("pullback of maps with different targets");
  Pullback out{FiniteASet{x.domain, {}, {}}, {}, {}};
  std::map<std::pair<int, int>, int> pos;
  std::vector<std::pair<int, int>> pairs{{0, 0}};
  for (int a = 0; a < x.size(); ++a)
    for (int b = 0; b < y.size(); ++b)
      if ((a || b) && f.map[U(a)] == g.map[U(b)]) pairs.emplace_back(a, b);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [a, b] = pairs[i];
    pos[pairs[i]] = static_cast<int>(i);
    out.object.names.push_back(i == 0 ? x.names[0] : "(" + x.names[U(a)] + "," + y.names[U(b)] + ")");
    out.to_x.push_back(a);
    out.to_y.push_back(b);
  }
  for (std::size_t gi = 0; gi < x.action.size(); ++gi) {
    Transformation t;
    for (auto [a, b] : pairs) t.push_back(pos[{x.act(static_cast<int>(gi), a), y.act(static_cast<int>(gi), b)}]);
    out.object.action.push_back(std::move(t));
  }
  return out;
}

Pushout pushout(const ASetMap& f, const ASetMap& g) {
  const FiniteASet& x = f.target;
  const FiniteASet& y = g.target;
  FiniteASet w = wedge(x, y);
  const int off = x.size() - 1;
  auto from_y = [&](int b) { return b == 0 ? 0 : b + off; };
  UnionFind uf(w.size());
  for (int z = 0; z < f.source.size(); ++z) uf.unite(f.map[U(z)], from_y(g.map[U(z)]));
  close_under_action(w, uf);
  ASetMap q = congruence_quotient(w, labels_of(uf, w.size()));
  Pushout out{q.target, {}, {}};
  for (int a = 0; a < x.size(); ++a) out.from_x.push_back(q.map[U(a)]);
  for (int b = 0; b < y.size(); ++b) out.from_y.push_back(q.map[U(from_y(b))]);
  return out;
}

namespace {

// Smash product together with the class of every pair (a, b), indexed a * |Y| + b.
std::pair<FiniteASet, std::vector<int>> smash_classes(const FiniteASet& x, const FiniteASet& y) {
  if (x.action.size() != y.action.size()) throw invalid_action_error("smash of sets over different monoids");
  const int nx = x.size(), ny = y.size();
  auto idx = [&](int a, int b) { return (a == 0 || b == 0) ? 0 : 1 + (a - 1) * (ny - 1) + (b - 1); };
  const int n = 1 + (nx - 1) * (ny - 1);
  FiniteASet p{x.domain, std::vector<std::string>(U(n)), {}};
  p.names[0] = "*";
  for (int a = 1; a < nx; ++a)
    for (int b = 1; b < ny; ++b) p.names[U(idx(a, b))] = x.names[U(a)] + "^" + y.names[U(b)];
  for (std::size_t g = 0; g < x.action.size(); ++g) {
    Transformation t(U(n), 0);
    for (int a = 1; a < nx; ++a)
      for (int b = 1; b < ny; ++b) t[U(idx(a, b))] = idx(x.act(static_cast<int>(g), a), b);
    p.action.push_back(std::move(t));
  }
  UnionFind uf(n);
  for (std::size_t g = 0; g < x.action.size(); ++g)
    for (int a = 1; a < nx; ++a)
      for (int b = 1; b < ny; ++b)
        uf.unite(idx(x.act(static_cast<int>(g), a), b), idx(a, y.act(static_cast<int>(g), b)));
  close_under_action(p, uf);
  ASetMap q = congruence_quotient(p, labels_of(uf, n));
  std::vector<int> cls(U(nx * ny));
  for (int a = 0; a < nx; ++a)
    for (int b = 0; b < ny; ++b) cls[U(a * ny + b)] = q.map[U(idx(a, b))];
  return {q.target, cls};
}

}  // namespace

FiniteASet smash(const FiniteASet& x, const FiniteASet& y) { return smash_classes(x, y).first; }

ASetMap smash_map(const ASetMap& f, const FiniteASet& y) {
  auto [src, cs] = smash_classes(f.source, y);
  auto [dst, cd] = smash_classes(f.target, y);
  const int ny = y.size();
  std::vector<int> map(U(src.size()), -1);
  for (int a = 0; a < f.source.size(); ++a)
    for (int b = 0; b < ny; ++b) map[U(cs[U(a * ny + b)])] = cd[U(f.map[U(a)] * ny + b)];
  return {src, dst, map};
}

// ---------------------------------------------------------------- enumeration

std::vector<FiniteASet> enumerate_actions(const Domain& d, int n) {
  const int k = d->generator_count();
  std::vector<std::vector<Transformation>> candidates(U(k));
  // All maps fixing the basepoint.
  std::vector<Transformation> maps;
  {
    Transformation t(U(n), 0);
    std::function<void(int)> rec = [&](int i) {
      if (i == n) {
        maps.push_back(t);
        return;
      }
      for (int v = 0; v < n; ++v) {
        t[U(i)] = v;
        rec(i + 1);
      }
    };
    rec(1);
  }
  for (int g = 0; g < k; ++g) {
    for (const auto& t : maps) {
      if (d->generator_is_unit(g)) {
        std::vector<int> s = t;
        std::sort(s.begin(), s.end());
        if (s != identity_transform(n)) continue;
        auto o = d->generator_order(g);
        if (o > 0 && power_of(t, o) != identity_transform(n)) continue;
      } else if (d->finite()) {
        const auto& tab = d->table();
        int e = d->generator_element(g);
        bool ok = true;
        std::map<int, int> seen;
        int cur = tab.one;
        for (int p = 0; p <= tab.size() && ok; ++p) {
          if (cur == tab.zero) {
            ok = is_constant_base(power_of(t, p));
            break;
          }
          auto it = seen.find(cur);
          if (it != seen.end()) {
            ok = power_of(t, it->second) == power_of(t, p);
            break;
          }
          seen[cur] = p;
          cur = tab.mul(cur, e);
        }
        if (!ok) continue;
      }
      candidates[U(g)].push_back(t);
    }
  }
  std::vector<FiniteASet> out;
  std::vector<std::string> names{"*"};
  for (int i = 1; i < n; ++i) names.push_back("x" + std::to_string(i));
  std::vector<Transformation> chosen;
  std::function<void(int)> rec = [&](int g) {
    if (g == k) {
      if (d->check_action(chosen, n).empty()) out.push_back(FiniteASet{d, names, chosen});
      return;
    }
    for (const auto& t : candidates[U(g)]) {
      bool ok = true;
      for (const auto& c : chosen)
        if (after(c, t) != after(t, c)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      chosen.push_back(t);
      rec(g + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  return out;
}

std::vector<FiniteASet> unique_up_to_iso(const std::vector<FiniteASet>& xs) {
  std::map<std::string, std::vector<std::size_t>> buckets;
  std::vector<FiniteASet> out;
  for (const auto& x : xs) {
    auto& bucket = buckets[invariant_key(x)];
    bool dup = false;
    for (auto r : bucket)
      if (isomorphic(out[r], x)) {
        dup = true;
        break;
      }
    if (dup) continue;
    bucket.push_back(out.size());
    out.push_back(x);
  }
  return out;
}

std::vector<FiniteASet> enumerate_asets(const Domain& d, int max_size) {
  std::vector<FiniteASet> out;
  for (int n = 1; n <= max_size; ++n) {
    auto level = unique_up_to_iso(enumerate_actions(d, n));
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::string element_list(const FiniteASet& x, Mask m) {
  std::vector<std::string> parts;
  for (int i = 0; i < x.size(); ++i)
    if (has(m, i)) parts.push_back(x.names[U(i)]);
  return "{" + join(parts, ", ") + "}";
}

}  // namespace pcmk
