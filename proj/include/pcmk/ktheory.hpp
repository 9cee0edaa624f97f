#ifndef PCMK_KTHEORY_HPP
#define PCMK_KTHEORY_HPP

#include "pcmk/abelian_group.hpp"
#include "pcmk/aset.hpp"
#include "pcmk/monoid.hpp"
#include "pcmk/serre.hpp"

#include <string>
#include <vector>

namespace pcmk {

struct closure_bound_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct not_zero_smooth_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct unsupported_degree_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Stable homotopy input; pi_1 of the sphere spectrum.
struct StableConstants {
  AbelianGroup pi1s = AbelianGroup::cyclic(2);
};

// ---------------------------------------------------------------- K_0 of finite categories of A-sets

/// K_0 = Z[iso classes] / ([Y] - [X] - [Y/X]) over all admissible sequences among the classes.
struct K0Presentation {
  std::vector<FiniteASet> classes;  // closed under subobjects and quotients
  std::vector<int> class_of;        // input object -> class index
  IntegerMatrix relations;          // classes x sequences
  PresentedGroup group;

  const AbelianGroup& k0() const { return group.group(); }
  /// Canonical coordinates of [classes[i]].
  IntegerVector element(int cls) const { return group.generator_class(cls); }
  int find(const FiniteASet& x) const;
};

/// Closes under subquotients up to isomorphism; throws closure_bound_error past `bound` classes.
K0Presentation k0_of_objects(const std::vector<FiniteASet>& objects, std::size_t bound = 64);

/// Subgroups of a finite abelian group; elements are indexed in mixed radix over the torsion orders.
std::vector<std::vector<int>> subgroups(const UnitGroup& g);
std::size_t burnside_rank(const UnitGroup& g);

struct DevissageReport {
  AbelianGroup k0;
  AbelianGroup expected;
  std::string expected_source;  // "K0(Gamma)" or "Burnside ring"
  std::size_t objects = 0;
  bool classes_match_length = true;  // pc case: [X] = length(X) [Gamma_+]
  bool match = false;
};
/// K_0 of finite-length (pc) A-sets with at most max_size elements against K_0(Gamma) or G_0(Gamma_+).
DevissageReport devissage_check_k0(const FiniteMonoid& a, bool pc, int max_size);

/// Whether X is filtered with quotients killed by the maximal ideal (m^k X = *).
bool killed_by_maximal_power(const FiniteASet& x);

/// Iterated X -> X_min -> X_min / (largest subobject in C); isomorphic to X in M/C,
/// and M/C-isomorphism of reduced objects is isomorphism.
FiniteASet reduced_object(const FiniteASet& x, const SerrePredicate& c);

struct LocalizationK0Report {
  AbelianGroup k0_c, k0_m, k0_mc;
  std::size_t c_classes = 0, m_classes = 0, mc_classes = 0;
  bool composite_zero = false;
  bool exact_middle = false;
  bool surjective = false;
  bool ok() const { return composite_zero && exact_middle && surjective; }
};
LocalizationK0Report localization_exactness_k0(const std::vector<FiniteASet>& objects, const SerrePredicate& c,
                                               std::size_t bound = 64);

// ---------------------------------------------------------------- divisors and the coniveau spectral sequence

/// Principal divisors: rows are height-one primes, columns a basis of the free part of units(A_0).
IntegerMatrix div_matrix(const AffineMonoid& a);
AbelianGroup class_group(const AffineMonoid& a);

/// Units-lattice rows of E_1: u(s) = free part of the units of A_s, d[p]: (+) u(s), ht s = p -> (+) Z, ht = p + 1.
struct LatticeComplex {
  struct Point {
    std::string label;
    int face_index = -1;
    int unit_rank = 0;
  };
  std::vector<std::vector<Point>> points;  // by height
  std::vector<IntegerMatrix> d;            // d[p] for p = 0 .. dim - 1
  IntegerMatrix augmentation;              // free part of units(A) -> u(A_0)
  AbelianGroup unit_torsion;               // torsion of Gamma; killed by every valuation
  StableConstants constants;

  int dim() const { return static_cast<int>(points.size()) - 1; }
  Eigen::Index unit_rank(int p) const;
};
LatticeComplex gersten_complex(const AffineMonoid& a, const StableConstants& constants = {});
/// d[0] o augmentation = 0.
bool d_squared_zero(const LatticeComplex& c);

/// W_0 = Z, W_p = coker(d[p-1]) = E_2^{p,-p}.
AbelianGroup w_group(const AffineMonoid& a, int p);
AbelianGroup w_group(const LatticeComplex& c, int p);

struct ConiveauReport {
  std::vector<AbelianGroup> graded;  // E_2^{p,-p}, p = 0 .. dim
  AbelianGroup class_group;
  bool determined = false;           // W_p = 0 for p >= 2, so K'_0 = Z + Cl
  AbelianGroup k0_prime;             // valid when determined
  std::string conclusion;
  std::vector<std::string> notes;
};
ConiveauReport coniveau_k0_report(const AffineMonoid& a);

/// K_n(Gamma) for n in {0, 1}: Z, and Gamma + pi_1^s.
AbelianGroup k_gamma(const UnitGroup& g, int n, const StableConstants& constants = {});

struct DvmReport {
  UnitGroup gamma;
  StableConstants constants;
  AbelianGroup e1_00, e1_0m1, e1_1m1;  // K_0(Gamma x Z), K_1(Gamma x Z), K_0(Gamma)
  IntegerMatrix d1;                    // K_1(Gamma x Z) generators -> Z; first generator is [t]
  Integer t_image;
  bool d1_surjective = false;
  AbelianGroup d1_kernel;
  AbelianGroup k0_prime, k1_prime;
  bool matches_k_gamma = false;
  std::vector<std::string> notes;
};
DvmReport dvm_report(const UnitGroup& gamma, const StableConstants& constants = {});

struct GerstenReport {
  AbelianGroup h_units;  // kernel of units(A) -> u(A_0)
  AbelianGroup h0;       // ker(div) / units(A)
  AbelianGroup h1;       // coker(div)
  std::vector<AbelianGroup> tails;  // coker(d[p-1]) for p >= 2
  bool exact = false;
};
/// Homology of 0 -> units(A) -> u(A_0) -> Div -> 0 and of the tails of the higher rows.
GerstenReport gersten_homology(const AffineMonoid& a);
/// As gersten_homology; throws not_zero_smooth_error unless A is 0-smooth.
GerstenReport gersten_exactness_check(const AffineMonoid& a);

}  // namespace pcmk

#endif  // PCMK_KTHEORY_HPP
