#ifndef PCMK_LATTICE_HPP
#define PCMK_LATTICE_HPP

#include "pcmk/smith.hpp"

#include <optional>

namespace pcmk {

/// Basis of {x : m * x = 0}, one column per basis vector.
template <typename Scalar>
MatrixX<Scalar> integer_kernel(const MatrixX<Scalar>& m) {
  auto snf = smith_normal_form(m, {.want_left = false, .want_right = true});
  const Eigen::Index n = m.cols();
  return snf.right.rightCols(n - snf.rank);
}

/// A sublattice of Z^n together with the data needed to test membership
/// and to express members in a basis.
template <typename Scalar>
class Sublattice {
 public:
  /// Lattice spanned by the columns of `generators`.
  explicit Sublattice(const MatrixX<Scalar>& generators) : ambient_(generators.rows()) {
    auto snf = smith_normal_form(generators, {.want_left = true, .want_right = false});
    rank_ = snf.rank;
    left_ = std::move(snf.left);
    divisors_.resize(rank_);
    for (Eigen::Index i = 0; i < rank_; ++i) divisors_[i] = snf.diagonal(i, i);
  }

  Eigen::Index rank() const { return rank_; }
  Eigen::Index ambient_dim() const { return ambient_; }

  /// Basis columns: b_i = d_i * left^{-1} e_i.
  MatrixX<Scalar> basis() const {
    MatrixX<Scalar> inv = unimodular_inverse(left_);
    MatrixX<Scalar> b(ambient_, rank_);
    for (Eigen::Index i = 0; i < rank_; ++i)
      for (Eigen::Index r = 0; r < ambient_; ++r) b(r, i) = inv(r, i) * divisors_[i];
    return b;
  }

  /// Coordinates of v with respect to basis(), or nullopt when v is not in the lattice.
  std::optional<VectorX<Scalar>> coordinates(const VectorX<Scalar>& v) const {
    VectorX<Scalar> w = left_ * v;
    VectorX<Scalar> c(rank_);
    for (Eigen::Index i = 0; i < rank_; ++i) {
      if (w(i) % divisors_[i] != Scalar(0)) return std::nullopt;
      c(i) = w(i) / divisors_[i];
    }
    for (Eigen::Index i = rank_; i < ambient_; ++i)
      if (w(i) != Scalar(0)) return std::nullopt;
    return c;
  }

  bool contains(const VectorX<Scalar>& v) const { return coordinates(v).has_value(); }

  bool contains_all(const MatrixX<Scalar>& columns) const {
    for (Eigen::Index j = 0; j < columns.cols(); ++j)
      if (!contains(columns.col(j))) return false;
    return true;
  }

  /// Saturated iff Z^n / L is torsion-free.
  bool saturated() const {
    for (const auto& d : divisors_)
      if (d != Scalar(1)) return false;
    return true;
  }

  static MatrixX<Scalar> unimodular_inverse(const MatrixX<Scalar>& u) {
    // u is unimodular; its inverse is the right factor of SNF(u) composed with left.
    auto snf = smith_normal_form(u);
    // snf.diagonal == I == L u R  =>  u^{-1} = R L
    return snf.right * snf.left;
  }

 private:
  Eigen::Index ambient_ = 0;
  Eigen::Index rank_ = 0;
  MatrixX<Scalar> left_;
  std::vector<Scalar> divisors_;
};

template <typename Scalar>
bool same_lattice(const MatrixX<Scalar>& a, const MatrixX<Scalar>& b) {
  return Sublattice<Scalar>(a).contains_all(b) && Sublattice<Scalar>(b).contains_all(a);
}

/// Generators of {x in Z^n : phi * x in colspace(target_relations)}.
template <typename Scalar>
MatrixX<Scalar> preimage_lattice(const MatrixX<Scalar>& phi, const MatrixX<Scalar>& target_relations) {
  const Eigen::Index n = phi.cols();
  MatrixX<Scalar> stacked(phi.rows(), n + target_relations.cols());
  stacked << phi, target_relations;
  MatrixX<Scalar> k = integer_kernel(stacked);
  return k.topRows(n);
}

}  // namespace pcmk

#endif  // PCMK_LATTICE_HPP
