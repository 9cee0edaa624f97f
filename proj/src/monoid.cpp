#include "pcmk/monoid.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace pcmk {

namespace {

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::string power_name(const std::string& base, std::int64_t e) {
  if (e == 1) return base;
  return base + "^" + std::to_string(e);
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

bool lex_less(const LatticeVector& a, const LatticeVector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

// Elements of a finite abelian group Z/d_1 x ... as tuples.
std::vector<std::vector<std::int64_t>> group_elements(const std::vector<std::int64_t>& orders) {
  std::vector<std::vector<std::int64_t>> out{{}};
  for (std::int64_t d : orders) {
    std::vector<std::vector<std::int64_t>> next;
    for (const auto& e : out)
      for (std::int64_t i = 0; i < d; ++i) {
        auto f = e;
        f.push_back(i);
        next.push_back(std::move(f));
      }
    out = std::move(next);
  }
  return out;
}

std::string unit_name(const std::vector<std::int64_t>& g) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i] != 0) parts.push_back(power_name("g" + std::to_string(i + 1), g[i]));
  return join(parts, ".");
}

std::string monomial_name(const LatticeVector& v) {
  std::vector<std::string> parts;
  if (v.size() == 1) {
    if (v(0) != 0) parts.push_back(power_name("t", v(0)));
  } else {
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (v(i) != 0) parts.push_back(power_name("x" + std::to_string(i + 1), v(i)));
  }
  return join(parts, ".");
}

bool in_ideal(const Cone& cone, const std::vector<LatticeVector>& ideal_coords, const LatticeVector& x) {
  for (const auto& w : ideal_coords)
    if (semigroup_contains(cone, x - w)) return true;
  return false;
}

std::vector<LatticeVector> ideal_in_coords(const Cone& cone, const std::vector<LatticeVector>& ideal) {
  std::vector<LatticeVector> out;
  for (const auto& v : ideal) {
    auto c = cone.to_coords(v);
    if (!c) throw invalid_monoid_error("ideal generator outside the group of the monoid");
    out.push_back(*c);
  }
  return out;
}

bool face_meets_ideal(const Cone& cone, const Face& face, const std::vector<LatticeVector>& ideal_coords) {
  for (const auto& w : ideal_coords) {
    bool on = true;
    for (int f : face.facets)
      if (cone.facet_normals()[static_cast<std::size_t>(f)].dot(w) != 0) {
        on = false;
        break;
      }
    if (on) return true;
  }
  return false;
}

// Residue set C \ I is finite iff every extremal ray carries an ideal generator.
bool residue_finite(const Cone& cone, const std::vector<LatticeVector>& ideal_coords) {
  for (const auto& face : cone.faces())
    if (face.dim == 1 && !face_meets_ideal(cone, face, ideal_coords)) return false;
  return true;
}

FiniteMonoid enumerate_residue(const AffineMonoid& m, const Cone& cone, const std::vector<LatticeVector>& ideal_coords) {
  // Points of the semigroup outside the ideal, by breadth-first search from 0.
  std::vector<LatticeVector> pts;
  std::set<std::vector<std::int64_t>> seen;
  auto key = [](const LatticeVector& v) { return std::vector<std::int64_t>(v.data(), v.data() + v.size()); };
  std::deque<LatticeVector> queue;
  LatticeVector origin = LatticeVector::Zero(cone.rank());
  if (!in_ideal(cone, ideal_coords, origin)) {
    queue.push_back(origin);
    seen.insert(key(origin));
  }
  while (!queue.empty()) {
    LatticeVector v = queue.front();
    queue.pop_front();
    pts.push_back(v);
    for (int g = 0; g < cone.generator_count(); ++g) {
      LatticeVector w = v + cone.coords().col(g);
      if (seen.count(key(w))) continue;
      seen.insert(key(w));
      if (!in_ideal(cone, ideal_coords, w)) queue.push_back(w);
    }
    if (pts.size() > 100000) throw undecidable_error("residue set too large to enumerate");
  }
  LatticeVector ell = cone.interior_functional();
  std::stable_sort(pts.begin(), pts.end(), [&](const LatticeVector& a, const LatticeVector& b) {
    if (ell.dot(a) != ell.dot(b)) return ell.dot(a) < ell.dot(b);
    return lex_less(a, b);
  });
  auto units_list = group_elements(m.units.torsion);

  FiniteMonoid out;
  std::map<std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>, int> index;
  for (const auto& p : pts)
    for (const auto& g : units_list) {
      LatticeVector amb = cone.lattice_basis() * p;
      std::string a = unit_name(g), b = monomial_name(amb);
      std::string name = a.empty() && b.empty() ? "1" : a.empty() ? b : b.empty() ? a : a + "." + b;
      index[{g, key(p)}] = out.size();
      out.elements.push_back(name);
    }
  out.elements.push_back("*");
  out.one = 0;
  out.zero = out.size() - 1;
  if (pts.empty()) out.one = out.zero;
  const auto n = static_cast<std::size_t>(out.size());
  out.table.assign(n, std::vector<int>(n, out.zero));
  for (const auto& [ka, ia] : index)
    for (const auto& [kb, ib] : index) {
      std::vector<std::int64_t> g(ka.first.size());
      for (std::size_t i = 0; i < g.size(); ++i) g[i] = (ka.first[i] + kb.first[i]) % m.units.torsion[i];
      std::vector<std::int64_t> v(ka.second.size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = ka.second[i] + kb.second[i];
      auto it = index.find({g, v});
      out.table[static_cast<std::size_t>(ia)][static_cast<std::size_t>(ib)] = it == index.end() ? out.zero : it->second;
    }
  return out;
}

std::int64_t det_int(const LatticeMatrix& m) { return to_int64(determinant(cast_matrix<Integer>(m))); }

LatticeMatrix adjugate(const LatticeMatrix& m) {
  const Eigen::Index n = m.rows();
  LatticeMatrix adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      LatticeMatrix minor(n - 1, n - 1);
      for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;
        for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
          if (c == i) continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      adj(i, j) = ((i + j) % 2 ? -1 : 1) * det_int(minor);
    }
  return adj;
}

}  // namespace

// ---------------------------------------------------------------- UnitGroup

UnitGroup UnitGroup::from_orders(std::int64_t free_rank, const std::vector<std::int64_t>& orders) {
  std::vector<Integer> o;
  for (std::int64_t i = 0; i < free_rank; ++i) o.emplace_back(0);
  for (auto d : orders) o.emplace_back(d);
  return from_group(direct_sum_of_cyclics(o));
}

UnitGroup UnitGroup::from_group(const AbelianGroup& g) {
  UnitGroup u;
  u.free_rank = g.free_rank;
  for (const auto& d : g.invariant_factors) u.torsion.push_back(to_int64(d));
  return u;
}

AbelianGroup UnitGroup::group() const {
  AbelianGroup g;
  g.free_rank = free_rank;
  for (auto d : torsion) g.invariant_factors.emplace_back(d);
  return g;
}

std::int64_t UnitGroup::torsion_order() const {
  std::int64_t p = 1;
  for (auto d : torsion) p *= d;
  return p;
}

bool UnitGroup::normalized() const {
  if (free_rank < 0) return false;
  for (std::size_t i = 0; i < torsion.size(); ++i) {
    if (torsion[i] <= 1) return false;
    if (i + 1 < torsion.size() && torsion[i + 1] % torsion[i] != 0) return false;
  }
  return true;
}

std::string describe(const UnitGroup& g) { return g.group().str(); }

// ---------------------------------------------------------------- FiniteMonoid

int FiniteMonoid::index_of(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (elements[static_cast<std::size_t>(i)] == name) return i;
  return -1;
}

int FiniteMonoid::power(int a, int k) const {
  int r = one;
  for (int i = 0; i < k; ++i) r = mul(r, a);
  return r;
}

FiniteMonoid field_with_one() {
  FiniteMonoid m;
  m.elements = {"1", "*"};
  m.one = 0;
  m.zero = 1;
  m.table = {{0, 1}, {1, 1}};
  return m;
}

FiniteMonoid terminal_monoid() {
  FiniteMonoid m;
  m.elements = {"*"};
  m.table = {{0}};
  return m;
}

FiniteMonoid truncated_polynomial(int n) {
  if (n < 1) throw std::invalid_argument("truncated_polynomial needs n >= 1");
  FiniteMonoid m;
  for (int i = 0; i < n; ++i) m.elements.push_back(i == 0 ? "1" : power_name("t", i));
  m.elements.push_back("*");
  m.one = 0;
  m.zero = n;
  if (n == 1) {
    // N/(t) = F_1
    return field_with_one();
  }
  m.table.assign(static_cast<std::size_t>(n + 1), std::vector<int>(static_cast<std::size_t>(n + 1), n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = i + j < n ? i + j : n;
  return m;
}

FiniteMonoid cyclic_with_tail(int n, int d) {
  if (!(0 <= d && d < n)) throw std::invalid_argument("cyclic_with_tail needs 0 <= d < n");
  FiniteMonoid m;
  for (int i = 0; i < n; ++i) m.elements.push_back(i == 0 ? "1" : power_name("t", i));
  m.elements.push_back("*");
  m.one = 0;
  m.zero = n;
  auto reduce = [&](int e) {
    while (e >= n) e -= n - d;
    return e;
  };
  m.table.assign(static_cast<std::size_t>(n + 1), std::vector<int>(static_cast<std::size_t>(n + 1), n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = reduce(i + j);
  return m;
}

FiniteMonoid finite_group_monoid(const std::vector<std::int64_t>& orders) {
  AffineMonoid a;
  a.dim = 0;
  a.generators = LatticeMatrix(0, 0);
  a.units = UnitGroup::from_orders(0, orders);
  auto f = finite_form(a);
  return *f;
}

AffineMonoid free_monoid(int n, UnitGroup units) {
  return affine_monoid(LatticeMatrix::Identity(n, n), std::move(units));
}

AffineMonoid affine_monoid(const LatticeMatrix& generators, UnitGroup units) {
  AffineMonoid m;
  m.dim = static_cast<int>(generators.rows());
  m.generators = generators;
  m.units = std::move(units);
  return m;
}

Cone cone_of(const AffineMonoid& m) { return Cone(m.generators); }

// ---------------------------------------------------------------- validation

ValidationReport validate_monoid(const FiniteMonoid& m) {
  ValidationReport r;
  const int n = m.size();
  if (n == 0) {
    r.violations.push_back("empty element list");
    return r;
  }
  std::set<std::string> names;
  for (const auto& e : m.elements) {
    if (!names.insert(e).second) r.violations.push_back("duplicate element " + e);
    if (e.find(',') != std::string::npos) r.violations.push_back("element name contains a comma: " + e);
  }
  if (m.one < 0 || m.one >= n || m.zero < 0 || m.zero >= n) {
    r.violations.push_back("one or zero out of range");
    return r;
  }
  if (static_cast<int>(m.table.size()) != n) {
    r.violations.push_back("table is not total");
    return r;
  }
  for (const auto& row : m.table) {
    if (static_cast<int>(row.size()) != n) {
      r.violations.push_back("table is not total");
      return r;
    }
    for (int v : row)
      if (v < 0 || v >= n) {
        r.violations.push_back("table entry out of range");
        return r;
      }
  }
  const auto& e = m.elements;
  auto nm = [&](int i) { return e[static_cast<std::size_t>(i)]; };
  for (int a = 0; a < n; ++a) {
    if (m.mul(a, m.one) != a || m.mul(m.one, a) != a) r.violations.push_back("unit law fails at " + nm(a));
    if (m.mul(a, m.zero) != m.zero || m.mul(m.zero, a) != m.zero) r.violations.push_back("zero law fails at " + nm(a));
    for (int b = 0; b < n; ++b) {
      if (m.mul(a, b) != m.mul(b, a)) r.violations.push_back("commutativity fails at " + nm(a) + "," + nm(b));
      for (int c = 0; c < n; ++c)
        if (m.mul(m.mul(a, b), c) != m.mul(a, m.mul(b, c)))
          r.violations.push_back("associativity fails at " + nm(a) + "," + nm(b) + "," + nm(c));
    }
  }
  if (m.one == m.zero && n != 1) r.violations.push_back("one equals zero in a nonterminal monoid");
  return r;
}

ValidationReport validate_monoid(const AffineMonoid& m) {
  ValidationReport r;
  if (m.dim < 0 || m.generators.rows() != m.dim) {
    r.violations.push_back("generator length differs from dim");
    return r;
  }
  for (Eigen::Index j = 0; j < m.generators.cols(); ++j)
    if (m.generators.col(j).isZero()) r.violations.push_back("zero generator");
  if (!m.units.normalized()) r.violations.push_back("unit group not in invariant-factor form");
  if (!r.ok()) return r;
  Cone cone = cone_of(m);
  if (!cone.pointed()) {
    r.violations.push_back("cone contains a line");
    return r;
  }
  for (const auto& v : m.ideal) {
    if (v.size() != m.dim) {
      r.violations.push_back("ideal generator length differs from dim");
      continue;
    }
    auto c = cone.to_coords(v);
    if (!c || !semigroup_contains(cone, *c)) r.violations.push_back("ideal generator is not an element of the monoid");
  }
  return r;
}

ValidationReport validate_monoid(const Monoid& m) {
  return std::visit([](const auto& x) { return validate_monoid(x); }, m);
}

// ---------------------------------------------------------------- membership

bool semigroup_contains(const Cone& cone, const LatticeVector& x) {
  if (x.isZero()) return true;
  if (!cone.in_cone(x)) return false;
  const LatticeVector ell = cone.interior_functional();
  std::set<std::vector<std::int64_t>> failed;
  std::function<bool(const LatticeVector&)> rec = [&](const LatticeVector& y) -> bool {
    if (y.isZero()) return true;
    if (!cone.in_cone(y) || ell.dot(y) <= 0) return false;
    std::vector<std::int64_t> key(y.data(), y.data() + y.size());
    if (failed.count(key)) return false;
    for (int g = 0; g < cone.generator_count(); ++g)
      if (rec(y - cone.coords().col(g))) return true;
    failed.insert(std::move(key));
    return false;
  };
  return rec(x);
}

// ---------------------------------------------------------------- primes

std::vector<PrimeIdeal> primes(const FiniteMonoid& m) {
  const int n = m.size();
  std::vector<std::vector<int>> ideals;
  for (int a = 0; a < n; ++a) {
    std::set<int> pw;
    int x = m.one;
    while (pw.insert(x).second) x = m.mul(x, a);
    if (pw.count(m.zero)) continue;
    std::vector<int> ideal;
    for (int b = 0; b < n; ++b) {
      bool divides = false;
      for (int c = 0; c < n && !divides; ++c) divides = pw.count(m.mul(b, c)) > 0;
      if (!divides) ideal.push_back(b);
    }
    if (std::find(ideals.begin(), ideals.end(), ideal) == ideals.end()) ideals.push_back(ideal);
  }
  std::sort(ideals.begin(), ideals.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  auto subset = [](const std::vector<int>& a, const std::vector<int>& b) {
    return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  std::vector<int> height(ideals.size(), 0);
  for (std::size_t i = 0; i < ideals.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (subset(ideals[j], ideals[i])) height[i] = std::max(height[i], height[j] + 1);

  std::vector<bool> unit(static_cast<std::size_t>(n), false);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (m.mul(a, b) == m.one) unit[static_cast<std::size_t>(a)] = true;

  std::vector<PrimeIdeal> out;
  for (std::size_t i = 0; i < ideals.size(); ++i) {
    PrimeIdeal p;
    p.ideal = ideals[i];
    p.height = height[i];
    std::set<int> in(p.ideal.begin(), p.ideal.end());
    std::vector<std::string> gens;
    for (int a : p.ideal) {
      if (a == m.zero) continue;
      bool redundant = false;
      for (int b : p.ideal) {
        if (b == m.zero || b == a) continue;
        for (int c = 0; c < n && !redundant; ++c)
          if (!unit[static_cast<std::size_t>(c)] && m.mul(b, c) == a) redundant = true;
      }
      if (!redundant) gens.push_back(m.elements[static_cast<std::size_t>(a)]);
    }
    if (gens.empty())
      for (int a : p.ideal)
        if (a != m.zero) gens.push_back(m.elements[static_cast<std::size_t>(a)]);
    p.label = gens.empty() ? "(0)" : "(" + join(gens, ",") + ")";
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<std::string> affine_generator_names(const AffineMonoid& m) {
  std::vector<std::string> out;
  const int k = m.generator_count();
  if (k == 1)
    out.push_back("t");
  else
    for (int i = 0; i < k; ++i) out.push_back("x" + std::to_string(i + 1));
  for (std::size_t i = 0; i < m.units.torsion.size(); ++i) out.push_back("g" + std::to_string(i + 1));
  for (std::int64_t i = 0; i < m.units.free_rank; ++i) out.push_back("u" + std::to_string(i + 1));
  return out;
}

std::vector<PrimeIdeal> primes(const AffineMonoid& m) {
  Cone cone = cone_of(m);
  auto ideal = ideal_in_coords(cone, m.ideal);
  auto names = affine_generator_names(m);
  const auto& faces = cone.faces();
  std::vector<bool> avoids(faces.size());
  for (std::size_t i = 0; i < faces.size(); ++i) avoids[i] = !face_meets_ideal(cone, faces[i], ideal);
  auto contains = [](const Face& big, const Face& small) {
    return std::includes(big.generators.begin(), big.generators.end(), small.generators.begin(), small.generators.end());
  };
  std::vector<PrimeIdeal> out;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    if (!avoids[i]) continue;
    PrimeIdeal p;
    p.face = faces[i].generators;
    p.face_index = static_cast<int>(i);
    int h = 0;
    for (std::size_t j = 0; j < faces.size(); ++j)
      if (avoids[j] && contains(faces[j], faces[i])) h = std::max(h, faces[j].dim - faces[i].dim);
    p.height = h;
    std::vector<std::string> gens;
    for (int g = 0; g < m.generator_count(); ++g)
      if (!std::binary_search(p.face.begin(), p.face.end(), g)) gens.push_back(names[static_cast<std::size_t>(g)]);
    p.label = gens.empty() ? "(0)" : "(" + join(gens, ",") + ")";
    out.push_back(std::move(p));
  }
  std::stable_sort(out.begin(), out.end(), [](const PrimeIdeal& a, const PrimeIdeal& b) { return a.height < b.height; });
  return out;
}

std::vector<PrimeIdeal> primes(const Monoid& m) {
  return std::visit([](const auto& x) { return primes(x); }, m);
}

// ---------------------------------------------------------------- localization

FiniteMonoid localize(const FiniteMonoid& m, const PrimeIdeal& p) { return localize(m, p, nullptr); }

FiniteMonoid localize(const FiniteMonoid& m, const PrimeIdeal& p, std::vector<std::pair<int, int>>* fractions) {
  const int n = m.size();
  std::vector<int> s;
  for (int a = 0; a < n; ++a)
    if (!std::binary_search(p.ideal.begin(), p.ideal.end(), a)) s.push_back(a);
  // Pairs (a, u) with u in S; (a,u) ~ (b,v) iff w a v = w b u for some w in S.
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int u : s) pairs.emplace_back(a, u);
  const auto np = pairs.size();
  std::vector<int> cls(np, -1);
  std::vector<std::size_t> reps;
  auto equivalent = [&](const std::pair<int, int>& x, const std::pair<int, int>& y) {
    for (int w : s)
      if (m.mul(w, m.mul(x.first, y.second)) == m.mul(w, m.mul(y.first, x.second))) return true;
    return false;
  };
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t r = 0; r < reps.size(); ++r)
      if (equivalent(pairs[i], pairs[reps[r]])) {
        cls[i] = static_cast<int>(r);
        break;
      }
    if (cls[i] < 0) {
      cls[i] = static_cast<int>(reps.size());
      reps.push_back(i);
    }
  }
  auto class_of = [&](int a, int u) {
    for (std::size_t i = 0; i < np; ++i)
      if (pairs[i].first == a && pairs[i].second == u) return cls[i];
    return -1;
  };
  FiniteMonoid out;
  for (std::size_t r = 0; r < reps.size(); ++r) {
    // Prefer a representative with trivial denominator for naming.
    std::string name;
    for (std::size_t i = 0; i < np && name.empty(); ++i)
      if (cls[i] == static_cast<int>(r) && pairs[i].second == m.one) name = m.elements[static_cast<std::size_t>(pairs[i].first)];
    if (name.empty()) {
      const auto& pr = pairs[reps[r]];
      name = m.elements[static_cast<std::size_t>(pr.first)] + "/" + m.elements[static_cast<std::size_t>(pr.second)];
    }
    out.elements.push_back(name);
  }
  out.one = class_of(m.one, m.one);
  out.zero = class_of(m.zero, m.one);
  const auto k = reps.size();
  out.table.assign(k, std::vector<int>(k, 0));
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = 0; y < k; ++y) {
      const auto& a = pairs[reps[x]];
      const auto& b = pairs[reps[y]];
      out.table[x][y] = class_of(m.mul(a.first, b.first), m.mul(a.second, b.second));
    }
  if (fractions) {
    fractions->clear();
    for (auto r : reps) fractions->push_back(pairs[r]);
  }
  return out;
}

AffineMonoid localize(const AffineMonoid& m, const PrimeIdeal& p) {
  Cone cone = cone_of(m);
  const int r = cone.rank();
  LatticeMatrix face(r, static_cast<Eigen::Index>(p.face.size()));
  for (std::size_t i = 0; i < p.face.size(); ++i) face.col(static_cast<Eigen::Index>(i)) = cone.coords().col(p.face[i]);
  auto snf = smith_normal_form(cast_matrix<Integer>(face), {.want_left = true, .want_right = false});
  for (Eigen::Index i = 0; i < snf.rank; ++i)
    if (snf.diagonal(i, i) != Integer(1))
      throw invalid_monoid_error("localization with torsion in the quotient lattice is not supported");
  const auto fr = snf.rank;
  LatticeMatrix proj = cast_matrix<std::int64_t>(IntegerMatrix(snf.left.bottomRows(r - fr)));
  AffineMonoid out;
  out.dim = static_cast<int>(r - fr);
  std::vector<LatticeVector> gens;
  for (int g = 0; g < m.generator_count(); ++g) {
    if (std::binary_search(p.face.begin(), p.face.end(), g)) continue;
    LatticeVector v = proj * cone.coords().col(g);
    if (std::find(gens.begin(), gens.end(), v) == gens.end()) gens.push_back(v);
  }
  out.generators.resize(out.dim, static_cast<Eigen::Index>(gens.size()));
  for (std::size_t i = 0; i < gens.size(); ++i) out.generators.col(static_cast<Eigen::Index>(i)) = gens[i];
  out.units = UnitGroup::from_orders(m.units.free_rank + fr, m.units.torsion);
  for (const auto& c : ideal_in_coords(cone, m.ideal)) out.ideal.push_back(proj * c);
  return out;
}

Monoid localize(const Monoid& m, const PrimeIdeal& p) {
  return std::visit([&](const auto& x) -> Monoid { return localize(x, p); }, m);
}

// ---------------------------------------------------------------- units

UnitGroup units(const FiniteMonoid& m) {
  if (m.terminal()) return {};
  std::vector<int> u;
  for (int a = 0; a < m.size(); ++a)
    for (int b = 0; b < m.size(); ++b)
      if (m.mul(a, b) == m.one) {
        u.push_back(a);
        break;
      }
  // Presentation: one generator per unit, relations e_a + e_b - e_ab.
  const auto n = static_cast<Eigen::Index>(u.size());
  std::map<int, Eigen::Index> pos;
  for (Eigen::Index i = 0; i < n; ++i) pos[u[static_cast<std::size_t>(i)]] = i;
  IntegerMatrix rel = IntegerMatrix::Zero(n, n * n);
  Eigen::Index col = 0;
  for (int a : u)
    for (int b : u) {
      rel(pos[a], col) += Integer(1);
      rel(pos[b], col) += Integer(1);
      rel(pos[m.mul(a, b)], col) -= Integer(1);
      ++col;
    }
  return UnitGroup::from_group(cokernel(rel));
}

UnitGroup units(const Monoid& m) {
  if (const auto* f = std::get_if<FiniteMonoid>(&m)) return units(*f);
  const auto& a = std::get<AffineMonoid>(m);
  Cone cone = cone_of(a);
  auto ideal = ideal_in_coords(cone, a.ideal);
  if (in_ideal(cone, ideal, LatticeVector::Zero(cone.rank()))) return {};
  return a.units;
}

// ---------------------------------------------------------------- predicates

bool is_pc_monoid(const FiniteMonoid& m) {
  const int n = m.size();
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        int x = m.mul(a, c);
        if (x != m.zero && x == m.mul(b, c)) return false;
      }
  return true;
}

bool is_pc_monoid(const Monoid& m) {
  if (const auto* f = std::get_if<FiniteMonoid>(&m)) return is_pc_monoid(*f);
  const auto& a = std::get<AffineMonoid>(m);
  if (a.ideal.empty()) return true;
  auto fin = finite_form(m);
  if (!fin) throw undecidable_error("pc is not decided for infinite quotients of affine monoids");
  return is_pc_monoid(*fin);
}

bool is_cancellative(const Monoid& m) {
  if (const auto* a = std::get_if<AffineMonoid>(&m)) {
    Cone cone = cone_of(*a);
    auto ideal = ideal_in_coords(cone, a->ideal);
    return ideal.empty() || in_ideal(cone, ideal, LatticeVector::Zero(cone.rank()));
  }
  const auto& f = std::get<FiniteMonoid>(m);
  const int n = f.size();
  for (int c = 0; c < n; ++c) {
    if (c == f.zero) continue;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (f.mul(a, c) == f.mul(b, c)) return false;
  }
  return true;
}

bool is_normal(const AffineMonoid& m) {
  if (!m.ideal.empty()) return false;
  Cone cone = cone_of(m);
  const int r = cone.rank();
  const int k = cone.generator_count();
  if (r == 0) return true;
  // Every lattice point of the cone is a generator combination plus a point of
  // some half-open parallelepiped spanned by r independent generators.
  std::vector<int> pick(static_cast<std::size_t>(r));
  bool normal = true;
  std::function<void(int, int)> rec = [&](int slot, int start) {
    if (!normal) return;
    if (slot == r) {
      LatticeMatrix b(r, r);
      for (int i = 0; i < r; ++i) b.col(i) = cone.coords().col(pick[static_cast<std::size_t>(i)]);
      std::int64_t det = det_int(b);
      if (det == 0) return;
      LatticeMatrix adj = adjugate(b);
      const std::int64_t ad = det < 0 ? -det : det;
      const std::int64_t sg = det < 0 ? -1 : 1;
      LatticeVector lo = LatticeVector::Zero(r), hi = LatticeVector::Zero(r);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
          if (b(i, j) < 0) lo(i) += b(i, j);
          if (b(i, j) > 0) hi(i) += b(i, j);
        }
      LatticeVector x = lo;
      while (true) {
        LatticeVector lam = adj * x * sg;
        bool inside = true;
        for (int i = 0; i < r && inside; ++i) inside = lam(i) >= 0 && lam(i) < ad;
        if (inside && !semigroup_contains(cone, x)) {
          normal = false;
          return;
        }
        int i = 0;
        while (i < r && x(i) == hi(i)) {
          x(i) = lo(i);
          ++i;
        }
        if (i == r) break;
        ++x(i);
      }
      return;
    }
    for (int j = start; j < k; ++j) {
      pick[static_cast<std::size_t>(slot)] = j;
      rec(slot + 1, j + 1);
    }
  };
  rec(0, 0);
  return normal;
}

bool is_zero_smooth(const AffineMonoid& m) {
  if (!m.ideal.empty()) return false;
  Cone cone = cone_of(m);
  const int r = cone.rank();
  if (r == 0) return true;
  auto rays = cone.ray_generators();
  if (static_cast<int>(rays.size()) != r) return false;
  LatticeMatrix b(r, r);
  for (int i = 0; i < r; ++i) {
    LatticeVector v = cone.coords().col(rays[static_cast<std::size_t>(i)]);
    std::int64_t g = 0;
    for (int j = 0; j < r; ++j) g = gcd64(g, v(j));
    b.col(i) = v / g;
  }
  std::int64_t det = det_int(b);
  if (det != 1 && det != -1) return false;
  return is_normal(m);
}

bool is_dvm(const AffineMonoid& m) { return is_zero_smooth(m) && cone_of(m).rank() == 1; }

// ---------------------------------------------------------------- quotients

Monoid quotient_by_ideal(const FiniteMonoid& m, const std::vector<int>& ideal_generators) {
  const int n = m.size();
  std::set<int> ideal{m.zero};
  for (int g : ideal_generators)
    for (int a = 0; a < n; ++a) ideal.insert(m.mul(g, a));
  std::vector<int> keep;
  for (int a = 0; a < n; ++a)
    if (!ideal.count(a)) keep.push_back(a);
  FiniteMonoid out;
  std::map<int, int> pos;
  for (int a : keep) {
    pos[a] = out.size();
    out.elements.push_back(m.elements[static_cast<std::size_t>(a)]);
  }
  out.elements.push_back("*");
  out.zero = out.size() - 1;
  out.one = pos.count(m.one) ? pos[m.one] : out.zero;
  const auto k = static_cast<std::size_t>(out.size());
  out.table.assign(k, std::vector<int>(k, out.zero));
  for (int a : keep)
    for (int b : keep) {
      int c = m.mul(a, b);
      out.table[static_cast<std::size_t>(pos[a])][static_cast<std::size_t>(pos[b])] = ideal.count(c) ? out.zero : pos[c];
    }
  return out;
}

Monoid quotient_by_ideal(const AffineMonoid& m, const std::vector<LatticeVector>& ideal_generators) {
  AffineMonoid q = m;
  for (const auto& v : ideal_generators) q.ideal.push_back(v);
  Cone cone = cone_of(q);
  auto ideal = ideal_in_coords(cone, q.ideal);
  if (in_ideal(cone, ideal, LatticeVector::Zero(cone.rank()))) return terminal_monoid();
  if (q.units.finite() && residue_finite(cone, ideal)) return enumerate_residue(q, cone, ideal);
  // The ideal may be the prime of a face, in which case the quotient is that face monoid.
  for (const auto& face : cone.faces()) {
    if (face_meets_ideal(cone, face, ideal)) continue;
    bool covers = true;
    for (int g = 0; g < q.generator_count() && covers; ++g)
      if (!std::binary_search(face.generators.begin(), face.generators.end(), g))
        covers = in_ideal(cone, ideal, cone.coords().col(g));
    if (!covers) continue;
    AffineMonoid f;
    f.dim = q.dim;
    f.units = q.units;
    f.generators.resize(q.dim, static_cast<Eigen::Index>(face.generators.size()));
    for (std::size_t i = 0; i < face.generators.size(); ++i)
      f.generators.col(static_cast<Eigen::Index>(i)) = q.generators.col(face.generators[i]);
    return f;
  }
  return q;
}

std::optional<FiniteMonoid> finite_form(const Monoid& m) {
  if (const auto* f = std::get_if<FiniteMonoid>(&m)) return *f;
  const auto& a = std::get<AffineMonoid>(m);
  Cone cone = cone_of(a);
  auto ideal = ideal_in_coords(cone, a.ideal);
  if (in_ideal(cone, ideal, LatticeVector::Zero(cone.rank()))) return terminal_monoid();
  if (!a.units.finite()) return std::nullopt;
  if (cone.rank() > 0 && !residue_finite(cone, ideal)) return std::nullopt;
  return enumerate_residue(a, cone, ideal);
}

bool is_finite(const Monoid& m) { return finite_form(m).has_value(); }

std::vector<int> monoid_generators(const FiniteMonoid& m) {
  const int n = m.size();
  std::vector<int> gens;
  std::vector<bool> reached(static_cast<std::size_t>(n), false);
  auto close = [&]() {
    std::fill(reached.begin(), reached.end(), false);
    std::deque<int> q{m.one, m.zero};
    reached[static_cast<std::size_t>(m.one)] = reached[static_cast<std::size_t>(m.zero)] = true;
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (int g : gens) {
        int y = m.mul(x, g);
        if (!reached[static_cast<std::size_t>(y)]) {
          reached[static_cast<std::size_t>(y)] = true;
          q.push_back(y);
        }
      }
    }
  };
  close();
  for (int a = 0; a < n; ++a) {
    if (reached[static_cast<std::size_t>(a)]) continue;
    gens.push_back(a);
    close();
  }
  return gens;
}

bool isomorphic(const FiniteMonoid& a, const FiniteMonoid& b) {
  if (a.size() != b.size()) return false;
  const int n = a.size();
  auto gens = monoid_generators(a);
  std::vector<int> image(gens.size());
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == gens.size()) {
      // Extend along words in the generators and check it is a bijective homomorphism.
      std::vector<int> phi(static_cast<std::size_t>(n), -1);
      phi[static_cast<std::size_t>(a.one)] = b.one;
      phi[static_cast<std::size_t>(a.zero)] = b.zero;
      std::deque<int> q{a.one};
      while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        for (std::size_t g = 0; g < gens.size(); ++g) {
          int y = a.mul(x, gens[g]);
          int fy = b.mul(phi[static_cast<std::size_t>(x)], image[g]);
          if (phi[static_cast<std::size_t>(y)] < 0) {
            phi[static_cast<std::size_t>(y)] = fy;
            q.push_back(y);
          } else if (phi[static_cast<std::size_t>(y)] != fy) {
            return false;
          }
        }
      }
      std::vector<bool> hit(static_cast<std::size_t>(n), false);
      for (int x = 0; x < n; ++x) {
        if (phi[static_cast<std::size_t>(x)] < 0 || hit[static_cast<std::size_t>(phi[static_cast<std::size_t>(x)])]) return false;
        hit[static_cast<std::size_t>(phi[static_cast<std::size_t>(x)])] = true;
      }
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          if (phi[static_cast<std::size_t>(a.mul(x, y))] != b.mul(phi[static_cast<std::size_t>(x)], phi[static_cast<std::size_t>(y)]))
            return false;
      return true;
    }
    for (int t = 0; t < n; ++t) {
      if (t == b.one || t == b.zero) continue;
      image[i] = t;
      if (rec(i + 1)) return true;
    }
    return false;
  };
  return rec(0);
}

}  // namespace pcmk
