#ifndef PCMK_CONE_HPP
#define PCMK_CONE_HPP

#include "pcmk/integer.hpp"
#include "pcmk/lattice.hpp"

#include <optional>
#include <vector>

namespace pcmk {

/// A face of a rational cone, recorded by the generators lying on it.
struct Face {
  std::vector<int> generators;  // sorted indices into the cone's generator list
  std::vector<int> facets;      // indices of facets containing the face
  int dim = 0;
};

/// Rational polyhedral cone spanned by integer generators, described inside
/// the lattice the generators span.
class Cone {
 public:
  Cone() = default;
  /// Generators are the columns of `generators` (d x k).
  explicit Cone(LatticeMatrix generators);

  const LatticeMatrix& generators() const { return gens_; }
  int ambient_dim() const { return static_cast<int>(gens_.rows()); }
  int generator_count() const { return static_cast<int>(gens_.cols()); }
  int rank() const { return rank_; }
  bool pointed() const { return pointed_; }

  /// Basis of the lattice spanned by the generators (d x r).
  const LatticeMatrix& lattice_basis() const { return basis_; }
  /// Generators in lattice-basis coordinates (r x k).
  const LatticeMatrix& coords() const { return coords_; }
  /// Coordinates of an ambient vector, or nullopt outside the lattice.
  std::optional<LatticeVector> to_coords(const LatticeVector& ambient) const;

  /// Primitive inward facet normals in lattice coordinates.
  const std::vector<LatticeVector>& facet_normals() const { return facets_; }
  /// All faces, sorted by dimension; the cone itself is last.
  const std::vector<Face>& faces() const { return faces_; }
  /// Index of the face containing a lattice-coordinate point in its relative interior.
  int carrier_face(const LatticeVector& coords) const;

  /// Generators of the extremal rays (one per ray).
  std::vector<int> ray_generators() const;

  /// Whether a point of the lattice (coordinates) lies in the real cone.
  bool in_cone(const LatticeVector& coords) const;

  /// Linear functional positive on every nonzero cone point (requires pointed).
  LatticeVector interior_functional() const;

 private:
  void compute_facets();
  void compute_faces();
  int rank_of(const std::vector<int>& cols) const;

  LatticeMatrix gens_;
  LatticeMatrix basis_;
  LatticeMatrix coords_;
  std::optional<Sublattice<Integer>> lattice_;
  int rank_ = 0;
  bool pointed_ = true;
  std::vector<LatticeVector> facets_;
  std::vector<Face> faces_;
};

/// Rank of an integer matrix.
int matrix_rank(const LatticeMatrix& m);

}  // namespace pcmk

#endif  // PCMK_CONE_HPP
