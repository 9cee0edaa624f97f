#include "pcmk/ktheory.hpp"

#include <algorithm>

namespace pcmk {

namespace {

std::size_t U(int i) { return static_cast<std::size_t>(i); }

void require_normal(const AffineMonoid& a) {
  if (!is_normal(a)) throw not_normal_error("monoid is not normal");
}

Cone face_cone(const AffineMonoid& a, const Face& f) {
  LatticeMatrix g(a.generators.rows(), static_cast<Eigen::Index>(f.generators.size()));
  for (std::size_t j = 0; j < f.generators.size(); ++j) g.col(static_cast<Eigen::Index>(j)) = a.generators.col(f.generators[j]);
  return Cone(g);
}

// Primitive functional on gp(F) vanishing on the facet `sub` of F, in Cone(F) lattice coordinates.
LatticeVector valuation(const Cone& cf, const Face& f, const Face& sub) {
  if (cf.rank() == 1) {
    LatticeVector v(1);
    v(0) = cf.coords()(0, 0) > 0 ? 1 : -1;
    return v;
  }
  for (const auto& n : cf.facet_normals()) {
    bool vanishes = true;
    for (int g : sub.generators) {
      auto pos = std::find(f.generators.begin(), f.generators.end(), g) - f.generators.begin();
      if (n.dot(cf.coords().col(pos)) != 0) vanishes = false;
    }
    if (vanishes) return n;
  }
  throw std::logic_error("facet of a face without a normal");
}

bool face_contains(const Face& big, const Face& small) {
  return std::includes(big.generators.begin(), big.generators.end(), small.generators.begin(), small.generators.end());
}

}  // namespace

Eigen::Index LatticeComplex::unit_rank(int p) const {
  Eigen::Index n = 0;
  for (const auto& pt : points[U(p)]) n += pt.unit_rank;
  return n;
}

LatticeComplex gersten_complex(const AffineMonoid& a, const StableConstants& constants) {
  require_normal(a);
  Cone cone = cone_of(a);
  const auto& faces = cone.faces();
  const int r = static_cast<int>(a.units.free_rank);
  LatticeComplex c;
  c.constants = constants;
  c.unit_torsion = UnitGroup{0, a.units.torsion}.group();
  auto ps = primes(a);
  int top = 0;
  for (const auto& p : ps) top = std::max(top, p.height);
  c.points.resize(U(top + 1));
  std::vector<Cone> cones(faces.size());
  for (const auto& p : ps) {
    cones[U(p.face_index)] = face_cone(a, faces[U(p.face_index)]);
    c.points[U(p.height)].push_back({p.label, p.face_index, cones[U(p.face_index)].rank() + r});
  }
  for (int h = 0; h < top; ++h) {
    IntegerMatrix d = IntegerMatrix::Zero(static_cast<Eigen::Index>(c.points[U(h + 1)].size()), c.unit_rank(h));
    Eigen::Index col = 0;
    for (const auto& s : c.points[U(h)]) {
      const Face& f = faces[U(s.face_index)];
      const Cone& cf = cones[U(s.face_index)];
      for (std::size_t row = 0; row < c.points[U(h + 1)].size(); ++row) {
        const Face& sub = faces[U(c.points[U(h + 1)][row].face_index)];
        if (sub.dim != f.dim - 1 || !face_contains(f, sub)) continue;
        LatticeVector v = valuation(cf, f, sub);
        for (int j = 0; j < cf.rank(); ++j) d(static_cast<Eigen::Index>(row), col + j) = v(j);
      }
      col += s.unit_rank;
    }
    c.d.push_back(std::move(d));
  }
  c.augmentation = IntegerMatrix::Zero(c.unit_rank(0), r);
  for (int j = 0; j < r; ++j) c.augmentation(c.unit_rank(0) - r + j, j) = 1;
  return c;
}

bool d_squared_zero(const LatticeComplex& c) {
  if (c.d.empty()) return true;
  IntegerMatrix z = c.d[0] * c.augmentation;
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    for (Eigen::Index j = 0; j < z.cols(); ++j)
      if (z(i, j) != Integer(0)) return false;
  return true;
}

IntegerMatrix div_matrix(const AffineMonoid& a) {
  LatticeComplex c = gersten_complex(a);
  if (c.d.empty()) return IntegerMatrix::Zero(0, c.unit_rank(0));
  return c.d[0];
}

AbelianGroup class_group(const AffineMonoid& a) { return cokernel(div_matrix(a)); }

AbelianGroup w_group(const LatticeComplex& c, int p) {
  if (p == 0) return AbelianGroup::integers(1);
  if (p < 0 || p > c.dim()) return AbelianGroup::zero();
  return cokernel(c.d[U(p - 1)]);
}

AbelianGroup w_group(const AffineMonoid& a, int p) { return w_group(gersten_complex(a), p); }

ConiveauReport coniveau_k0_report(const AffineMonoid& a) {
  LatticeComplex c = gersten_complex(a);
  ConiveauReport r;
  for (int p = 0; p <= c.dim(); ++p) r.graded.push_back(w_group(c, p));
  r.class_group = c.dim() >= 1 ? r.graded[1] : AbelianGroup::zero();
  r.determined = true;
  for (int p = 2; p <= c.dim(); ++p) r.determined &= r.graded[U(p)].trivial();
  if (r.determined) {
    r.k0_prime = direct_sum(AbelianGroup::integers(1), r.class_group);
    r.conclusion = r.k0_prime.str();
    r.notes.push_back("E_inf^{1,-1} = Cl; the extension by Z splits");
  } else {
    r.conclusion = "graded only";
    r.notes.push_back("E_inf^{p,-p} is a quotient of W_p for p >= 2; the extension is not resolved");
  }
  r.notes.push_back("K'_0 surjects onto Z + Cl = " + direct_sum(AbelianGroup::integers(1), r.class_group).str());
  return r;
}

AbelianGroup k_gamma(const UnitGroup& g, int n, const StableConstants& constants) {
  if (n == 0) return AbelianGroup::integers(1);
  if (n == 1) return direct_sum(g.group(), constants.pi1s);
  throw unsupported_degree_error("K_n(Gamma) is only available for n = 0, 1");
}

DvmReport dvm_report(const UnitGroup& gamma, const StableConstants& constants) {
  if (!gamma.finite()) throw std::invalid_argument("dvm_report needs a finite unit group");
  DvmReport r;
  r.gamma = gamma;
  r.constants = constants;
  UnitGroup gz{gamma.free_rank + 1, gamma.torsion};
  r.e1_00 = k_gamma(gz, 0, constants);
  r.e1_0m1 = k_gamma(gz, 1, constants);
  r.e1_1m1 = k_gamma(gamma, 0, constants);
  // Generators of K_1(Gamma x Z): [t], the cyclic factors of Gamma, then those of pi_1^s.
  std::vector<Integer> orders{Integer(0)};
  for (auto o : gamma.torsion) orders.emplace_back(o);
  for (std::int64_t i = 0; i < constants.pi1s.free_rank; ++i) orders.emplace_back(0);
  for (const auto& o : constants.pi1s.invariant_factors) orders.push_back(o);
  const auto n = static_cast<Eigen::Index>(orders.size());
  IntegerMatrix src = IntegerMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) src(i, i) = orders[U(static_cast<int>(i))];
  r.d1 = IntegerMatrix::Zero(1, n);
  r.d1(0, 0) = 1;
  r.t_image = r.d1(0, 0);
  IntegerMatrix dst = IntegerMatrix::Zero(1, 0);
  r.d1_surjective = cokernel_of(r.d1, dst).trivial();
  r.d1_kernel = kernel_of(r.d1, src, dst);
  r.k0_prime = r.e1_00;
  r.k1_prime = r.d1_kernel;
  r.matches_k_gamma = r.k0_prime == k_gamma(gamma, 0, constants) && r.k1_prime == k_gamma(gamma, 1, constants);
  r.notes.push_back("pi_1^s = " + constants.pi1s.str() + " (configured)");
  r.notes.push_back("d_1 is zero on the stable summand");
  return r;
}

GerstenReport gersten_homology(const AffineMonoid& a) {
  LatticeComplex c = gersten_complex(a);
  GerstenReport r;
  IntegerMatrix eps = c.augmentation;
  IntegerMatrix ker_eps = integer_kernel(eps);
  r.h_units = AbelianGroup::integers(ker_eps.cols());
  if (c.d.empty()) {
    r.h0 = lattice_quotient(IntegerMatrix::Identity(eps.rows(), eps.rows()), eps);
  } else {
    r.h0 = lattice_quotient(integer_kernel(c.d[0]), eps);
    r.h1 = cokernel(c.d[0]);
  }
  for (int p = 2; p <= c.dim(); ++p) r.tails.push_back(w_group(c, p));
  r.exact = r.h_units.trivial() && r.h0.trivial() && r.h1.trivial();
  for (const auto& t : r.tails) r.exact &= t.trivial();
  return r;
}

GerstenReport gersten_exactness_check(const AffineMonoid& a) {
  if (!is_zero_smooth(a)) throw not_zero_smooth_error("monoid is not 0-smooth");
  return gersten_homology(a);
}

}  // namespace pcmk
