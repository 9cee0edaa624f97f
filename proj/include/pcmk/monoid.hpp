#ifndef PCMK_MONOID_HPP
#define PCMK_MONOID_HPP

#include "pcmk/abelian_group.hpp"
#include "pcmk/cone.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace pcmk {

struct undecidable_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct not_normal_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct invalid_monoid_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Finitely generated abelian group in invariant-factor form, used for unit groups.
struct UnitGroup {
  std::int64_t free_rank = 0;
  std::vector<std::int64_t> torsion;

  /// Normalizes arbitrary cyclic orders into invariant-factor form.
  static UnitGroup from_orders(std::int64_t free_rank, const std::vector<std::int64_t>& orders);
  static UnitGroup from_group(const AbelianGroup& g);

  AbelianGroup group() const;
  bool trivial() const { return free_rank == 0 && torsion.empty(); }
  bool finite() const { return free_rank == 0; }
  std::int64_t torsion_order() const;
  bool normalized() const;

  friend bool operator==(const UnitGroup&, const UnitGroup&) = default;
};

/// Pointed commutative monoid given by its multiplication table.
struct FiniteMonoid {
  std::vector<std::string> elements;
  int one = 0;
  int zero = 0;
  std::vector<std::vector<int>> table;

  int size() const { return static_cast<int>(elements.size()); }
  int mul(int a, int b) const { return table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }
  int index_of(const std::string& name) const;
  bool terminal() const { return one == zero; }
  int power(int a, int k) const;
};

/// Gamma_+ smash (C intersected with an ideal quotient), where C is the monoid
/// generated by integer vectors spanning a pointed cone.
struct AffineMonoid {
  int dim = 0;
  LatticeMatrix generators;  // dim x k, one generator per column
  UnitGroup units;
  std::vector<LatticeVector> ideal;  // generators of an ideal, as points of C

  int generator_count() const { return static_cast<int>(generators.cols()); }
};

using Monoid = std::variant<FiniteMonoid, AffineMonoid>;

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

struct PrimeIdeal {
  std::vector<int> ideal;  // finite monoids: sorted element indices of the prime (zero included)
  std::vector<int> face;   // affine monoids: generator indices on the complementary face
  int face_index = -1;     // affine monoids: index into Cone::faces()
  int height = 0;
  std::string label;
};

// Constructors for the standard examples.
FiniteMonoid field_with_one();
FiniteMonoid terminal_monoid();
/// N/(t^n) = {1, t, ..., t^(n-1), *}.
FiniteMonoid truncated_polynomial(int n);
/// {1, t, ..., t^(n-1)} + {*} with t^n = t^d; no zero product among powers.
FiniteMonoid cyclic_with_tail(int n, int d);
/// Gamma_+ for a finite abelian group given by cyclic orders.
FiniteMonoid finite_group_monoid(const std::vector<std::int64_t>& orders);
/// Gamma_+ smash N^n.
AffineMonoid free_monoid(int n, UnitGroup units = {});
AffineMonoid affine_monoid(const LatticeMatrix& generators, UnitGroup units = {});

Cone cone_of(const AffineMonoid& m);

ValidationReport validate_monoid(const Monoid& m);
ValidationReport validate_monoid(const FiniteMonoid& m);
ValidationReport validate_monoid(const AffineMonoid& m);

std::vector<PrimeIdeal> primes(const Monoid& m);
std::vector<PrimeIdeal> primes(const FiniteMonoid& m);
std::vector<PrimeIdeal> primes(const AffineMonoid& m);

Monoid localize(const Monoid& m, const PrimeIdeal& p);
FiniteMonoid localize(const FiniteMonoid& m, const PrimeIdeal& p);
/// Also reports a fraction (numerator, denominator) representing each element of the result.
FiniteMonoid localize(const FiniteMonoid& m, const PrimeIdeal& p, std::vector<std::pair<int, int>>* fractions);
AffineMonoid localize(const AffineMonoid& m, const PrimeIdeal& p);

UnitGroup units(const Monoid& m);
UnitGroup units(const FiniteMonoid& m);

/// Brute-force pc test on a table; throws undecidable_error for infinite quotients.
bool is_pc_monoid(const Monoid& m);
bool is_pc_monoid(const FiniteMonoid& m);

bool is_normal(const AffineMonoid& m);
bool is_zero_smooth(const AffineMonoid& m);
bool is_dvm(const AffineMonoid& m);
bool is_cancellative(const Monoid& m);

Monoid quotient_by_ideal(const FiniteMonoid& m, const std::vector<int>& ideal_generators);
Monoid quotient_by_ideal(const AffineMonoid& m, const std::vector<LatticeVector>& ideal_generators);

/// The multiplication table when the monoid is finite; nullopt for infinite affine monoids.
std::optional<FiniteMonoid> finite_form(const Monoid& m);
/// Whether the set of elements is finite.
bool is_finite(const Monoid& m);

/// Whether `x` (lattice-basis coordinates) is a nonnegative integer combination of the cone generators.
bool semigroup_contains(const Cone& cone, const LatticeVector& x);

/// Names used for the action generators of an affine monoid: t or x1..xk, then g1.. and u1...
std::vector<std::string> affine_generator_names(const AffineMonoid& m);

/// Greedy generating set of a finite monoid, excluding one and zero.
std::vector<int> monoid_generators(const FiniteMonoid& m);

/// Whether two finite monoids are isomorphic (backtracking over generator images).
bool isomorphic(const FiniteMonoid& a, const FiniteMonoid& b);

std::string describe(const UnitGroup& g);

}  // namespace pcmk

#endif  // PCMK_MONOID_HPP
