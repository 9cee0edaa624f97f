#include "pcmk/cone.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace pcmk {

int matrix_rank(const LatticeMatrix& m) {
  if (m.size() == 0) return 0;
  auto snf = smith_normal_form(cast_matrix<Integer>(m), {.want_left = false, .want_right = false});
  return static_cast<int>(snf.rank);
}

Cone::Cone(LatticeMatrix generators) : gens_(std::move(generators)) {
  lattice_.emplace(cast_matrix<Integer>(gens_));
  rank_ = static_cast<int>(lattice_->rank());
  basis_ = cast_matrix<std::int64_t>(lattice_->basis());
  coords_.resize(rank_, gens_.cols());
  for (Eigen::Index j = 0; j < gens_.cols(); ++j) {
    auto c = lattice_->coordinates(cast_matrix<Integer>(LatticeMatrix(gens_.col(j))).col(0));
    coords_.col(j) = cast_matrix<std::int64_t>(IntegerMatrix(*c)).col(0);
  }
  compute_facets();
  if (rank_ > 0) {
    LatticeMatrix normals(static_cast<Eigen::Index>(facets_.size()), rank_);
    for (std::size_t i = 0; i < facets_.size(); ++i) normals.row(static_cast<Eigen::Index>(i)) = facets_[i].transpose();
    pointed_ = !facets_.empty() && matrix_rank(normals) == rank_;
  }
  compute_faces();
}

std::optional<LatticeVector> Cone::to_coords(const LatticeVector& ambient) const {
  if (ambient.size() != gens_.rows()) return std::nullopt;
  IntegerVector v = cast_matrix<Integer>(LatticeMatrix(ambient)).col(0);
  auto c = lattice_->coordinates(v);
  if (!c) return std::nullopt;
  return LatticeVector(cast_matrix<std::int64_t>(IntegerMatrix(*c)).col(0));
}

int Cone::rank_of(const std::vector<int>& cols) const {
  LatticeMatrix m(rank_, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = coords_.col(cols[i]);
  return matrix_rank(m);
}

void Cone::compute_facets() {
  const int k = generator_count();
  if (rank_ == 0) return;
  const int need = rank_ - 1;
  std::vector<int> pick(static_cast<std::size_t>(need));
  std::vector<LatticeVector> found;

  auto consider = [&]() {
    LatticeMatrix rows(need, rank_);
    for (int i = 0; i < need; ++i) rows.row(i) = coords_.col(pick[static_cast<std::size_t>(i)]).transpose();
    LatticeMatrix ker = integer_kernel(rows);
    if (ker.cols() != 1) return;
    LatticeVector n = ker.col(0);
    int pos = 0, neg = 0;
    std::vector<int> zero;
    for (int j = 0; j < k; ++j) {
      std::int64_t v = n.dot(coords_.col(j));
      if (v > 0) ++pos;
      if (v < 0) ++neg;
      if (v == 0) zero.push_back(j);
    }
    if (pos > 0 && neg > 0) return;
    if (pos == 0 && neg == 0) return;
    if (neg > 0) n = -n;
    if (rank_of(zero) != need) return;
    if (std::find(found.begin(), found.end(), n) == found.end()) found.push_back(n);
  };

  // Enumerate need-subsets of generator indices.
  std::function<void(int, int)> rec = [&](int slot, int start) {
    if (slot == need) {
      consider();
      return;
    }
    for (int j = start; j < k; ++j) {
      pick[static_cast<std::size_t>(slot)] = j;
      rec(slot + 1, j + 1);
    }
  };
  rec(0, 0);
  std::sort(found.begin(), found.end(), [](const LatticeVector& a, const LatticeVector& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  facets_ = std::move(found);
}

void Cone::compute_faces() {
  const int k = generator_count();
  const int nf = static_cast<int>(facets_.size());
  auto facets_on = [&](const std::vector<int>& gens) {
    std::vector<int> out;
    for (int f = 0; f < nf; ++f) {
      bool all = true;
      for (int g : gens)
        if (facets_[static_cast<std::size_t>(f)].dot(coords_.col(g)) != 0) {
          all = false;
          break;
        }
      if (all) out.push_back(f);
    }
    return out;
  };
  std::map<std::vector<int>, Face> seen;
  std::vector<std::vector<int>> queue;
  std::vector<int> all(static_cast<std::size_t>(k));
  std::iota(all.begin(), all.end(), 0);
  queue.push_back(all);
  seen[all] = {};
  while (!queue.empty()) {
    std::vector<int> cur = queue.back();
    queue.pop_back();
    for (int f = 0; f < nf; ++f) {
      std::vector<int> next;
      for (int g : cur)
        if (facets_[static_cast<std::size_t>(f)].dot(coords_.col(g)) == 0) next.push_back(g);
      if (seen.count(next)) continue;
      seen[next] = {};
      queue.push_back(next);
    }
  }
  faces_.clear();
  for (auto& [gens, face] : seen) {
    face.generators = gens;
    face.facets = facets_on(gens);
    face.dim = rank_of(gens);
    faces_.push_back(face);
  }
  std::stable_sort(faces_.begin(), faces_.end(), [](const Face& a, const Face& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.generators < b.generators;
  });
}

int Cone::carrier_face(const LatticeVector& x) const {
  std::vector<int> zero;
  for (int f = 0; f < static_cast<int>(facets_.size()); ++f)
    if (facets_[static_cast<std::size_t>(f)].dot(x) == 0) zero.push_back(f);
  for (int i = 0; i < static_cast<int>(faces_.size()); ++i)
    if (faces_[static_cast<std::size_t>(i)].facets == zero) return i;
  return -1;
}

std::vector<int> Cone::ray_generators() const {
  std::vector<int> out;
  for (const auto& f : faces_)
    if (f.dim == 1) {
      // The shortest generator on the ray, by interior functional value.
      LatticeVector ell = interior_functional();
      int best = f.generators.front();
      for (int g : f.generators)
        if (ell.dot(coords_.col(g)) < ell.dot(coords_.col(best))) best = g;
      out.push_back(best);
    }
  return out;
}

bool Cone::in_cone(const LatticeVector& x) const {
  if (rank_ == 0) return x.size() == 0 || x.isZero();
  for (const auto& n : facets_)
    if (n.dot(x) < 0) return false;
  return true;
}

LatticeVector Cone::interior_functional() const {
  LatticeVector ell = LatticeVector::Zero(rank_);
  for (const auto& n : facets_) ell += n;
  return ell;
}

}  // namespace pcmk
