#ifndef PCMK_ASET_HPP
#define PCMK_ASET_HPP

#include "pcmk/monoid.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pcmk {

/// Image of every element index under one monoid element.
using Transformation = std::vector<int>;
/// Subset of the elements of an A-set; bit i is element i. Sets have at most 64 elements.
using Mask = std::uint64_t;

struct invalid_action_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct not_finite_length_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A monoid together with the generators through which it acts on A-sets.
///
/// Finite monoids act through a greedy generating set of their table. Infinite
/// affine monoids act through their cone generators (which must be linearly
/// independent), torsion generators of the units and free unit generators.
class ActionDomain {
 public:
  explicit ActionDomain(Monoid m);

  const Monoid& monoid() const { return monoid_; }
  bool finite() const { return table_.has_value(); }
  const FiniteMonoid& table() const;

  const std::vector<std::string>& generator_names() const { return names_; }
  int generator_count() const { return static_cast<int>(names_.size()); }
  int generator_index(const std::string& name) const;
  /// Finite monoids: table element of generator i.
  int generator_element(int i) const { return gen_elements_[static_cast<std::size_t>(i)]; }
  /// Finite monoids: a generator word for every element (empty for one).
  const std::vector<int>& word(int element) const { return words_[static_cast<std::size_t>(element)]; }

  /// N with trivial units and no ideal.
  bool is_natural_numbers() const { return natural_; }
  /// Gamma_+ for a finite group Gamma (every nonzero element invertible).
  bool is_finite_group() const { return group_; }
  /// Affine only: the number of cone generators, torsion orders and free unit rank.
  int cone_generator_count() const { return cone_gens_; }
  const std::vector<std::int64_t>& torsion_orders() const { return torsion_; }
  std::int64_t free_unit_rank() const { return free_units_; }

  /// Whether generator i acts invertibly.
  bool generator_is_unit(int i) const { return unit_gen_[static_cast<std::size_t>(i)]; }
  /// Smallest k >= 1 with g^k = 1 for a unit generator of finite order, 0 otherwise.
  std::int64_t generator_order(int i) const { return gen_order_[static_cast<std::size_t>(i)]; }

  /// Violated action axioms for the given generator transformations on n elements.
  std::vector<std::string> check_action(const std::vector<Transformation>& gens, int n) const;
  /// Finite monoids: transformation of every table element.
  std::vector<Transformation> element_actions(const std::vector<Transformation>& gens, int n) const;

 private:
  Monoid monoid_;
  std::optional<FiniteMonoid> table_;
  std::vector<std::string> names_;
  std::vector<int> gen_elements_;
  std::vector<std::vector<int>> words_;
  std::vector<bool> has_word_;
  std::vector<bool> unit_gen_;
  std::vector<std::int64_t> gen_order_;
  bool natural_ = false;
  bool group_ = false;
  int cone_gens_ = 0;
  std::vector<std::int64_t> torsion_;
  std::int64_t free_units_ = 0;
  std::vector<std::vector<std::int64_t>> ideal_exponents_;
};

using Domain = std::shared_ptr<const ActionDomain>;
Domain make_domain(Monoid m);

/// Finite pointed set with a monoid action. Element 0 is the basepoint.
struct FiniteASet {
  Domain domain;
  std::vector<std::string> names;
  std::vector<Transformation> action;  // one transformation per domain generator

  int size() const { return static_cast<int>(names.size()); }
  int act(int g, int x) const { return action[static_cast<std::size_t>(g)][static_cast<std::size_t>(x)]; }
  Mask all() const { return size() >= 64 ? ~Mask(0) : (Mask(1) << size()) - 1; }
};

struct ASetMap {
  FiniteASet source;
  FiniteASet target;
  std::vector<int> map;
};

/// X' >-> Y ->> Z.
struct ExactSeq {
  ASetMap i;
  ASetMap p;
};

ValidationReport validate_aset(const FiniteASet& x);
FiniteASet make_aset(const Domain& d, std::vector<std::string> names, std::vector<Transformation> action);

FiniteASet zero_aset(const Domain& d);
/// A acting on itself (finite monoids only); the zero is the basepoint.
FiniteASet regular_aset(const Domain& d);
/// (A^x)_+ on which non-units act as zero. Requires a finite unit group.
FiniteASet residue_aset(const Domain& d);
FiniteASet wedge(const FiniteASet& x, const FiniteASet& y);

bool is_equivariant(const FiniteASet& x, const FiniteASet& y, const std::vector<int>& f);
ASetMap identity_map(const FiniteASet& x);
ASetMap compose(const ASetMap& g, const ASetMap& f);
bool injective(const std::vector<int>& f);
bool surjective(const std::vector<int>& f, int target_size);

/// Smallest subobject containing the given elements (and the basepoint).
Mask closure(const FiniteASet& x, Mask m);
bool is_subobject(const FiniteASet& x, Mask m);
/// All subobjects, in increasing mask order.
std::vector<Mask> subobjects(const FiniteASet& x);
/// Subobject with its inclusion map.
ASetMap sub_inclusion(const FiniteASet& x, Mask m);
/// Quotient X -> X/X' collapsing a subobject to the basepoint.
ASetMap rees_quotient(const FiniteASet& x, Mask m);
/// Quotient by an action-compatible equivalence relation given as class labels.
ASetMap congruence_quotient(const FiniteASet& x, const std::vector<int>& classes);
/// All action-compatible equivalence relations, as class labels (label of the basepoint is 0).
std::vector<std::vector<int>> congruences(const FiniteASet& x);
Mask image_mask(const ASetMap& f);
/// The map h with h o q = f for a surjection q, if f is constant on the fibres of q.
std::optional<std::vector<int>> descend(const ASetMap& q, const ASetMap& f);
Mask preimage_mask(const ASetMap& f, Mask target);

ASetMap kernel(const ASetMap& p);
ASetMap cokernel(const ASetMap& i);
/// f = mono o epi, epi onto the image.
std::pair<ASetMap, ASetMap> image_factorization(const ASetMap& f);
ExactSeq exact_sequence(const FiniteASet& y, Mask sub);
bool is_exact(const ExactSeq& s);

/// All equivariant maps x -> y.
std::vector<std::vector<int>> homs(const FiniteASet& x, const FiniteASet& y);
std::size_t count_homs(const FiniteASet& x, const FiniteASet& y);
/// An isomorphism x -> y, if any.
std::optional<std::vector<int>> find_isomorphism(const FiniteASet& x, const FiniteASet& y);
bool isomorphic(const FiniteASet& x, const FiniteASet& y);
/// Isomorphism invariant (equal for isomorphic sets).
std::string invariant_key(const FiniteASet& x);

/// Pullback of x -> z <- y, with its two projections.
struct Pullback {
  FiniteASet object;
  std::vector<int> to_x, to_y;
};
Pullback pullback(const ASetMap& f, const ASetMap& g);
/// Pushout of x <- z -> y, with its two coprojections.
struct Pushout {
  FiniteASet object;
  std::vector<int> from_x, from_y;
};
Pushout pushout(const ASetMap& f, const ASetMap& g);

/// X ∧_A Y.
FiniteASet smash(const FiniteASet& x, const FiniteASet& y);
/// f ∧ Y : X ∧_A Y -> X' ∧_A Y.
ASetMap smash_map(const ASetMap& f, const FiniteASet& y);

// ---------------------------------------------------------------- pc, trees, orbits

bool is_pc_aset(const FiniteASet& x);
bool is_rooted_tree(const FiniteASet& x);
/// Whether some element other than the basepoint lies on a cycle of t.
bool has_loop(const FiniteASet& x);

/// Stabilizer subgroups (as sorted lists of table elements), one per orbit, sorted.
std::vector<std::vector<int>> orbit_decomposition(const FiniteASet& x);
bool is_free_gamma_set(const FiniteASet& x);

struct LengthFiltration {
  std::vector<Mask> chain;  // * = F_0 < F_1 < ... < F_n = X
  std::vector<ExactSeq> steps;
  int length() const { return static_cast<int>(steps.size()); }
};
/// Throws not_finite_length_error (message names a witness subquotient) when no filtration exists.
LengthFiltration length_filtration(const FiniteASet& x);
bool has_finite_length(const FiniteASet& x);

/// Primes s with X_s != *.
std::vector<PrimeIdeal> support(const FiniteASet& x);
/// Minimal height in the support; nullopt for X = *.
std::optional<int> codim_support(const FiniteASet& x);
/// Localization X_s as a set over the localized monoid. Supports finite monoids and N.
FiniteASet localize_aset(const FiniteASet& x, const PrimeIdeal& p, const Domain& localized);
Domain localized_domain(const Domain& d, const PrimeIdeal& p);

// ---------------------------------------------------------------- enumeration

/// A-sets with at most max_size elements (basepoint included), one per isomorphism class.
std::vector<FiniteASet> enumerate_asets(const Domain& d, int max_size);
/// Every generator action (not reduced up to isomorphism) on exactly n elements.
std::vector<FiniteASet> enumerate_actions(const Domain& d, int n);
/// Removes isomorphic duplicates, keeping the first representative.
std::vector<FiniteASet> unique_up_to_iso(const std::vector<FiniteASet>& xs);

// ---------------------------------------------------------------- squares and the key diagram

/// X >-> Y on top, X' >-> Y' below, X' ->> X and Y' ->> Y vertical.
struct MESquare {
  ASetMap top, bottom, left, right;
};
bool commutes(const MESquare& sq);
bool is_distinguished_square(const MESquare& sq);
bool is_pullback_square(const MESquare& sq);
bool is_pushout_square(const MESquare& sq);

struct KeyDiagram {
  FiniteASet x;
  Mask x1, x2, x12, xp;  // X'_1, X'_2, X'_12, X' as subobjects of X
  // Quotients of X: X''_1, X''_2, X''_12, X'' with their projections from X.
  ASetMap q1, q2, q12, q;
  ExactSeq seq12;  // X'_12 >-> X ->> X''_12
  ExactSeq seqp;   // X' >-> X ->> X''
};
KeyDiagram key_diagram(const FiniteASet& x, Mask sub1, Mask sub2);
/// The same diagram from two exact sequences with middle object x.
KeyDiagram key_diagram(const FiniteASet& x, const ExactSeq& s1, const ExactSeq& s2);

/// Each flag compares a square of the diagram with the corresponding construction and
/// checks its universal property against every probe object.
struct KeyDiagramReport {
  bool rows_exact = false;
  bool top_left_pullback = false;        // X'_12 = X'_1 x_X X'_2
  bool top_left_pushout = false;         // X' = X'_1 +_{X'_12} X'_2
  bool bottom_right_pushout = false;     // X'' = X''_1 +_{X''_12} X''_2
  bool bottom_right_set_pullback = false;       // X''_12 = X''_1 x_{X''} X''_2 in A-sets
  bool bottom_right_quotient_pullback = false;  // the same among quotients of X
};
KeyDiagramReport check_key_diagram(const KeyDiagram& k, const std::vector<FiniteASet>& probes);

std::string element_list(const FiniteASet& x, Mask m);

}  // namespace pcmk

#endif  // PCMK_ASET_HPP
