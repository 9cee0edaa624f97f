#include "pcmk/abelian_group.hpp"

#include <ostream>
#include <sstream>

namespace pcmk {

AbelianGroup AbelianGroup::cyclic(std::int64_t order) {
  return direct_sum_of_cyclics({Integer(order)});
}

Integer AbelianGroup::torsion_order() const {
  Integer p(1);
  for (const auto& d : invariant_factors) p *= d;
  return p;
}

std::string AbelianGroup::str(const std::string& sep) const {
  if (trivial()) return "0";
  std::vector<std::string> parts;
  if (free_rank == 1) parts.push_back("Z");
  if (free_rank > 1) parts.push_back("Z^" + std::to_string(free_rank));
  for (const auto& d : invariant_factors) parts.push_back("Z/" + d.str());
  std::string out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out += sep + parts[i];
  return out;
}

std::ostream& operator<<(std::ostream& os, const AbelianGroup& g) { return os << g.str(" + "); }

AbelianGroup cokernel(const IntegerMatrix& relations) {
  auto snf = smith_normal_form(relations, {.want_left = false, .want_right = false});
  AbelianGroup g;
  g.free_rank = relations.rows() - snf.rank;
  for (Eigen::Index i = 0; i < snf.rank; ++i)
    if (snf.diagonal(i, i) != Integer(1)) g.invariant_factors.push_back(snf.diagonal(i, i));
  return g;
}

AbelianGroup direct_sum_of_cyclics(const std::vector<Integer>& orders) {
  const auto n = static_cast<Eigen::Index>(orders.size());
  IntegerMatrix rel = IntegerMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) rel(i, i) = orders[static_cast<std::size_t>(i)];
  return cokernel(rel);
}

AbelianGroup direct_sum(const AbelianGroup& a, const AbelianGroup& b) {
  std::vector<Integer> orders;
  for (std::int64_t i = 0; i < a.free_rank + b.free_rank; ++i) orders.emplace_back(0);
  orders.insert(orders.end(), a.invariant_factors.begin(), a.invariant_factors.end());
  orders.insert(orders.end(), b.invariant_factors.begin(), b.invariant_factors.end());
  return direct_sum_of_cyclics(orders);
}

PresentedGroup::PresentedGroup(IntegerMatrix relations, Eigen::Index generators)
    : relations_(std::move(relations)), generators_(generators) {
  if (relations_.rows() != generators_) {
    if (relations_.size() == 0)
      relations_ = IntegerMatrix::Zero(generators_, 0);
    else
      throw std::invalid_argument("relation matrix has wrong row count");
  }
  auto snf = smith_normal_form(relations_, {.want_left = true, .want_right = false});
  left_ = std::move(snf.left);
  rank_ = snf.rank;
  for (Eigen::Index i = 0; i < rank_; ++i) divisors_.push_back(snf.diagonal(i, i));
  group_.free_rank = generators_ - rank_;
  for (const auto& d : divisors_)
    if (d != Integer(1)) group_.invariant_factors.push_back(d);
}

IntegerVector PresentedGroup::canonical(const IntegerVector& x) const {
  IntegerVector w = left_ * x;
  std::vector<Integer> out;
  for (Eigen::Index i = 0; i < rank_; ++i) {
    const Integer& d = divisors_[static_cast<std::size_t>(i)];
    if (d == Integer(1)) continue;
    Integer r = w(i) % d;
    if (r < Integer(0)) r += d;
    out.push_back(r);
  }
  for (Eigen::Index i = rank_; i < generators_; ++i) out.push_back(w(i));
  IntegerVector v(static_cast<Eigen::Index>(out.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = out[static_cast<std::size_t>(i)];
  return v;
}

IntegerVector PresentedGroup::generator_class(Eigen::Index j) const {
  IntegerVector e = IntegerVector::Zero(generators_);
  e(j) = 1;
  return canonical(e);
}

bool PresentedGroup::is_zero(const IntegerVector& x) const {
  IntegerVector c = canonical(x);
  for (Eigen::Index i = 0; i < c.size(); ++i)
    if (c(i) != Integer(0)) return false;
  return true;
}

AbelianGroup lattice_quotient(const IntegerMatrix& lattice, const IntegerMatrix& sub) {
  Sublattice<Integer> l(lattice);
  IntegerMatrix coords(l.rank(), sub.cols());
  for (Eigen::Index j = 0; j < sub.cols(); ++j) {
    auto c = l.coordinates(sub.col(j));
    if (!c) throw std::invalid_argument("lattice_quotient: relation outside the lattice");
    coords.col(j) = *c;
  }
  return cokernel(coords);
}

AbelianGroup kernel_of(const IntegerMatrix& phi, const IntegerMatrix& src_rel, const IntegerMatrix& dst_rel) {
  IntegerMatrix pre = preimage_lattice(phi, dst_rel);
  return lattice_quotient(pre, src_rel);
}

AbelianGroup cokernel_of(const IntegerMatrix& phi, const IntegerMatrix& dst_rel) {
  IntegerMatrix all(phi.rows(), phi.cols() + dst_rel.cols());
  all << phi, dst_rel;
  return cokernel(all);
}

IntegerMatrix to_integer_matrix(const LatticeMatrix& m) { return cast_matrix<Integer>(m); }

}  // namespace pcmk
