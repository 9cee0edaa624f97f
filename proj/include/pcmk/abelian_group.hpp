#ifndef PCMK_ABELIAN_GROUP_HPP
#define PCMK_ABELIAN_GROUP_HPP

#include "pcmk/integer.hpp"
#include "pcmk/lattice.hpp"

#include <string>
#include <vector>

namespace pcmk {

/// Finitely generated abelian group Z^r + Z/d_1 + ... + Z/d_k, d_i > 1, d_i | d_{i+1}.
struct AbelianGroup {
  std::int64_t free_rank = 0;
  std::vector<Integer> invariant_factors;

  static AbelianGroup zero() { return {}; }
  static AbelianGroup integers(std::int64_t rank = 1) { return {rank, {}}; }
  static AbelianGroup cyclic(std::int64_t order);

  bool trivial() const { return free_rank == 0 && invariant_factors.empty(); }
  bool finite() const { return free_rank == 0; }
  /// Order of the torsion subgroup.
  Integer torsion_order() const;

  /// e.g. "Z^2+Z/2"; "0" for the trivial group.
  std::string str(const std::string& sep = "+") const;

  friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;
};

std::ostream& operator<<(std::ostream& os, const AbelianGroup& g);

/// Z^n / colspace(relations), where relations is n x k.
AbelianGroup cokernel(const IntegerMatrix& relations);

/// Normal form of a direct sum of cyclic groups given by arbitrary orders (0 = infinite cyclic).
AbelianGroup direct_sum_of_cyclics(const std::vector<Integer>& orders);

AbelianGroup direct_sum(const AbelianGroup& a, const AbelianGroup& b);

/// Z^n / colspace(relations) with the coordinate change kept, so that elements
/// of Z^n can be reduced to canonical coordinates.
class PresentedGroup {
 public:
  PresentedGroup() = default;
  PresentedGroup(IntegerMatrix relations, Eigen::Index generators);

  const AbelianGroup& group() const { return group_; }
  Eigen::Index generator_count() const { return generators_; }
  const IntegerMatrix& relations() const { return relations_; }

  /// Canonical coordinates: torsion components reduced into [0, d_i), then free components.
  IntegerVector canonical(const IntegerVector& x) const;
  IntegerVector generator_class(Eigen::Index j) const;
  bool is_zero(const IntegerVector& x) const;

 private:
  IntegerMatrix relations_;
  Eigen::Index generators_ = 0;
  IntegerMatrix left_;
  std::vector<Integer> divisors_;
  Eigen::Index rank_ = 0;
  AbelianGroup group_;
};

/// L / colspace(sub), where `lattice` and `sub` are generator columns in Z^n and sub is inside L.
AbelianGroup lattice_quotient(const IntegerMatrix& lattice, const IntegerMatrix& sub);

/// Kernel of the homomorphism Z^n/src_rel -> Z^m/dst_rel induced by phi (m x n).
AbelianGroup kernel_of(const IntegerMatrix& phi, const IntegerMatrix& src_rel, const IntegerMatrix& dst_rel);

/// Cokernel of the same homomorphism.
AbelianGroup cokernel_of(const IntegerMatrix& phi, const IntegerMatrix& dst_rel);

IntegerMatrix to_integer_matrix(const LatticeMatrix& m);

}  // namespace pcmk

#endif  // PCMK_ABELIAN_GROUP_HPP
