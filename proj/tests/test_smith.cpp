#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pcmk/abelian_group.hpp"
#include "pcmk/smith.hpp"

#include <random>

using namespace pcmk;

namespace {

template <typename Scalar>
MatrixX<Scalar> random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c, int range) {
  std::uniform_int_distribution<int> d(-range, range);
  MatrixX<Scalar> m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = Scalar(d(rng));
  return m;
}

template <typename Scalar>
void check_smith(const MatrixX<Scalar>& m) {
  auto s = smith_normal_form(m);
  REQUIRE(s.left.rows() == m.rows());
  REQUIRE(s.right.rows() == m.cols());
  CHECK(detail::abs_value(determinant(s.left)) == Scalar(1));
  CHECK(detail::abs_value(determinant(s.right)) == Scalar(1));
  MatrixX<Scalar> prod = s.left * m * s.right;
  CHECK(prod == s.diagonal);
  for (Eigen::Index i = 0; i < s.diagonal.rows(); ++i)
    for (Eigen::Index j = 0; j < s.diagonal.cols(); ++j)
      if (i != j) CHECK(s.diagonal(i, j) == Scalar(0));
  for (Eigen::Index i = 0; i < s.rank; ++i) CHECK(s.diagonal(i, i) > Scalar(0));
  for (Eigen::Index i = 0; i + 1 < s.rank; ++i) CHECK(s.diagonal(i + 1, i + 1) % s.diagonal(i, i) == Scalar(0));
  for (Eigen::Index i = s.rank; i < std::min(m.rows(), m.cols()); ++i) CHECK(s.diagonal(i, i) == Scalar(0));
}

// Product of the nonzero k x k minors' gcd determines the invariant factors.
Integer gcd_of_minors(const IntegerMatrix& m, int k) {
  Integer g(0);
  std::vector<int> rows(k), cols(k);
  auto gcd = [](Integer a, Integer b) {
    a = abs(a);
    b = abs(b);
    while (b != Integer(0)) {
      Integer r = a % b;
      a = b;
      b = r;
    }
    return a;
  };
  std::function<void(int, int, int, int)> rec = [&](int ri, int rstart, int ci, int cstart) {
    if (ri < k) {
      for (int r = rstart; r < m.rows(); ++r) {
        rows[ri] = r;
        rec(ri + 1, r + 1, ci, cstart);
      }
      return;
    }
    if (ci < k) {
      for (int c = cstart; c < m.cols(); ++c) {
        cols[ci] = c;
        rec(ri, rstart, ci + 1, c + 1);
      }
      return;
    }
    IntegerMatrix sub(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) sub(i, j) = m(rows[i], cols[j]);
    g = gcd(g, determinant(sub));
  };
  rec(0, 0, 0, 0);
  return g;
}

}  // namespace

TEST_CASE("smith of a 2x2 example") {
  LatticeMatrix m(2, 2);
  m << 0, 1, 2, -1;
  auto s = smith_normal_form(m);
  CHECK(s.diagonal(0, 0) == 1);
  CHECK(s.diagonal(1, 1) == 2);
  CHECK(s.rank == 2);
  check_smith(m);
}

TEST_CASE("smith of identity and zero") {
  LatticeMatrix id = LatticeMatrix::Identity(3, 3);
  auto s = smith_normal_form(id);
  CHECK(s.diagonal == id);
  LatticeMatrix z = LatticeMatrix::Zero(2, 4);
  auto t = smith_normal_form(z);
  CHECK(t.diagonal == z);
  CHECK(t.rank == 0);
  IntegerMatrix empty(0, 3);
  CHECK(smith_normal_form(empty).rank == 0);
}

TEST_CASE("smith on random matrices up to 8x8") {
  std::mt19937_64 rng(20261015);
  for (int trial = 0; trial < 300; ++trial) {
    auto r = static_cast<Eigen::Index>(1 + rng() % 8);
    auto c = static_cast<Eigen::Index>(1 + rng() % 8);
    check_smith(random_matrix<Integer>(rng, r, c, 9));
    if (r <= 5 && c <= 5) check_smith(random_matrix<std::int64_t>(rng, r, c, 5));
  }
}

TEST_CASE("invariant factors match determinantal divisors") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    auto r = static_cast<Eigen::Index>(1 + rng() % 4);
    auto c = static_cast<Eigen::Index>(1 + rng() % 4);
    IntegerMatrix m = random_matrix<Integer>(rng, r, c, 6);
    auto s = smith_normal_form(m, {.want_left = false, .want_right = false});
    Integer prefix(1);
    for (int k = 1; k <= std::min(r, c); ++k) {
      Integer dk = gcd_of_minors(m, k);
      if (k <= s.rank) {
        prefix *= s.diagonal(k - 1, k - 1);
        CHECK(dk == prefix);
      } else {
        CHECK(dk == Integer(0));
      }
    }
  }
}

TEST_CASE("int64 elimination reports overflow instead of wrapping") {
  LatticeMatrix m(2, 2);
  const std::int64_t big = std::int64_t(1) << 62;
  m << big, 3, 5, big;
  bool threw = false;
  try {
    (void)determinant(m);
  } catch (const std::overflow_error&) {
    threw = true;
  }
  CHECK(threw);
}

TEST_CASE("abelian groups") {
  IntegerMatrix rel(2, 2);
  rel << 2, 0, 0, 3;
  CHECK(cokernel(rel) == AbelianGroup::cyclic(6));
  CHECK(cokernel(rel).str() == "Z/6");
  CHECK(AbelianGroup::cyclic(1).trivial());
  CHECK(direct_sum(AbelianGroup::cyclic(2), AbelianGroup::cyclic(2)).str() == "Z/2+Z/2");
  CHECK(direct_sum(AbelianGroup::integers(), AbelianGroup::cyclic(2)).str() == "Z+Z/2");
  IntegerMatrix none(3, 0);
  CHECK(cokernel(none) == AbelianGroup::integers(3));

  PresentedGroup g(rel, 2);
  IntegerVector x(2);
  x << 3, 2;
  CHECK(!g.is_zero(x));
  x << 2, 3;
  CHECK(g.is_zero(x));
}

TEST_CASE("kernel and cokernel of group maps") {
  // multiplication by 2 on Z/4
  IntegerMatrix phi(1, 1), rel(1, 1);
  phi << 2;
  rel << 4;
  CHECK(kernel_of(phi, rel, rel) == AbelianGroup::cyclic(2));
  CHECK(cokernel_of(phi, rel) == AbelianGroup::cyclic(2));
  // Z -> Z/6, 1 -> 2: kernel 3Z ~ Z
  IntegerMatrix none(1, 0);
  rel << 6;
  CHECK(kernel_of(phi, none, rel) == AbelianGroup::integers());
}

TEST_CASE("sublattice membership") {
  IntegerMatrix gens(2, 2);
  gens << 1, 1, 0, 2;
  Sublattice<Integer> l(gens);
  IntegerVector v(2);
  v << 0, 2;
  CHECK(l.contains(v));
  v << 1, 0;
  CHECK(l.contains(v));
  v << 0, 1;
  CHECK(!l.contains(v));
  CHECK(!l.saturated());
  CHECK(same_lattice<Integer>(l.basis(), gens));
}
