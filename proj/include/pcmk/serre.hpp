#ifndef PCMK_SERRE_HPP
#define PCMK_SERRE_HPP

#include "pcmk/aset.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pcmk {

struct not_iso_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct not_serre_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A Serre subcategory of finite A-sets, described by data.
struct SerrePredicate {
  enum class Kind { support_in, torsion, finite_length, explicit_list };
  Kind kind = Kind::explicit_list;
  Domain domain;
  std::vector<std::string> primes;    // support_in: prime labels
  std::vector<std::string> mult_set;  // torsion: generators (or finite-table elements) of S
  std::vector<FiniteASet> objects;    // explicit_list

  static SerrePredicate zero(const Domain& d);
  static SerrePredicate support_in(const Domain& d, std::vector<std::string> primes);
  static SerrePredicate torsion(const Domain& d, std::vector<std::string> mult_set);
  static SerrePredicate finite_length(const Domain& d);
  static SerrePredicate explicit_list(const Domain& d, std::vector<FiniteASet> objects);
};

std::string kind_name(SerrePredicate::Kind k);

bool contains(const SerrePredicate& c, const FiniteASet& x);

/// Two-out-of-three on every exact sequence with middle term in the universe (and members),
/// closure under pullbacks within the universe, and, for support and torsion predicates,
/// agreement with vanishing of the localization.
ValidationReport validate_serre(const SerrePredicate& c, const std::vector<FiniteASet>& universe,
                                std::size_t max_pullbacks = 2000);

/// (X', Y'') with X/X' and Y' = ker(Y ->> Y'') in C; stored as subobject masks.
struct WindowPair {
  Mask sub;     // X' in X
  Mask kernel;  // Y' in Y
  friend bool operator==(const WindowPair&, const WindowPair&) = default;
};

/// Finite poset given by its order relation.
struct Poset {
  int size = 0;
  std::vector<std::vector<bool>> leq;
};

struct FilteredCheck {
  bool ok = true;
  std::optional<std::pair<int, int>> witness;  // a pair without an upper bound
};
FilteredCheck check_filtered(const Poset& p);

struct IndexPoset {
  FiniteASet x, y;
  std::vector<WindowPair> windows;
  Poset order;  // w1 <= w2 iff X'_2 in X'_1 and Y'_1 in Y'_2 (refinement)
};
IndexPoset index_poset(const FiniteASet& x, const FiniteASet& y, const SerrePredicate& c);

/// Smallest admissible X' and largest admissible Y'; throws not_serre_error if these are not admissible.
WindowPair canonical_window(const FiniteASet& x, const FiniteASet& y, const SerrePredicate& c);

/// Morphism X -> Y of M/C represented by X' -> Y/Y'. The map is indexed by elements of X
/// (-1 outside X') and takes values in Y: 0 or an element outside Y'.
struct QuotientHom {
  FiniteASet x, y;
  WindowPair window;
  std::vector<int> map;
};

QuotientHom from_map(const ASetMap& f);
QuotientHom identity_quotient(const FiniteASet& x);
/// The same morphism on a finer window.
QuotientHom refine(const QuotientHom& f, const WindowPair& w);
QuotientHom canonical(const QuotientHom& f, const SerrePredicate& c);
bool same_quotient_hom(const QuotientHom& f, const QuotientHom& g, const SerrePredicate& c);
bool is_representative(const QuotientHom& f);

/// Hom_{M/C}(X, Y) computed at the canonical window.
std::vector<QuotientHom> hom_quotient(const FiniteASet& x, const FiniteASet& y, const SerrePredicate& c);
QuotientHom compose_quotient(const QuotientHom& g, const QuotientHom& f, const SerrePredicate& c);

std::optional<QuotientHom> inverse_quotient(const QuotientHom& f, const SerrePredicate& c);
bool is_iso_quotient(const QuotientHom& f, const SerrePredicate& c);

/// A monic representative h: X' -> Y'' with p o h = id for some p: Y'' -> X'.
struct MonicRepresentative {
  QuotientHom h;
  ASetMap as_map;      // X' -> Y''
  ASetMap retraction;  // Y'' -> X'
};
MonicRepresentative monic_representative(const QuotientHom& f, const SerrePredicate& c);

struct ConditionWOptions {
  int slack = 1;
  std::size_t pair_samples = 40;
  std::size_t parallel_samples = 40;
  std::uint64_t seed = 1;
};
struct ConditionWReport {
  bool ok = true;
  std::size_t objects = 0;
  std::size_t upper_bound_checks = 0;
  std::size_t coequalizer_checks = 0;
  std::vector<std::string> failures;
};
/// Filteredness of I_V^m over the A-sets with at most |V| + slack elements.
ConditionWReport check_condition_w(const FiniteASet& v, const SerrePredicate& c, const ConditionWOptions& opts = {});

struct EquivalenceMismatch {
  FiniteASet x, y;
  std::size_t quotient_homs = 0, local_homs = 0;
};
struct EquivalenceReport {
  std::string localized_at;
  std::size_t pairs = 0;
  std::vector<EquivalenceMismatch> mismatches;
};
/// Compares Hom_{M/M_Z}(X, Y) with Hom over the localization at the unique maximal prime outside Z.
EquivalenceReport quotient_equivalence_report(const Domain& d, const std::vector<std::string>& z, int max_size);

}  // namespace pcmk

#endif  // PCMK_SERRE_HPP
