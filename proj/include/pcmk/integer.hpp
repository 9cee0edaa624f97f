#ifndef PCMK_INTEGER_HPP
#define PCMK_INTEGER_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <Eigen/Core>

#include <compare>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace pcmk {

/// Arbitrary-precision integer usable as an Eigen scalar.
///
/// Thin value wrapper around boost's cpp_int. The wrapper exists so that
/// Eigen's scalar-promotion machinery never probes cpp_int's templated
/// converting constructors with expression types.
class Integer {
 public:
  using Rep = boost::multiprecision::cpp_int;

  Integer() = default;
  template <std::integral T>
  Integer(T v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  explicit Integer(Rep v) : v_(std::move(v)) {}
  explicit Integer(const std::string& digits) : v_(digits) {}

  const Rep& rep() const { return v_; }

  Integer& operator+=(const Integer& o) { v_ += o.v_; return *this; }
  Integer& operator-=(const Integer& o) { v_ -= o.v_; return *this; }
  Integer& operator*=(const Integer& o) { v_ *= o.v_; return *this; }
  Integer& operator/=(const Integer& o) { v_ /= o.v_; return *this; }
  Integer& operator%=(const Integer& o) { v_ %= o.v_; return *this; }

  friend Integer operator+(Integer a, const Integer& b) { return a += b; }
  friend Integer operator-(Integer a, const Integer& b) { return a -= b; }
  friend Integer operator*(Integer a, const Integer& b) { return a *= b; }
  friend Integer operator/(Integer a, const Integer& b) { return a /= b; }
  friend Integer operator%(Integer a, const Integer& b) { return a %= b; }
  friend Integer operator-(const Integer& a) { return Integer(Rep(-a.v_)); }

  friend bool operator==(const Integer& a, const Integer& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Integer& a, const Integer& b) {
    if (a.v_ < b.v_) return std::strong_ordering::less;
    if (b.v_ < a.v_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string str() const { return v_.str(); }

  friend std::ostream& operator<<(std::ostream& os, const Integer& a) { return os << a.v_; }

 private:
  Rep v_;
};

inline Integer abs(const Integer& a) { return a < Integer(0) ? -a : a; }

/// Narrowing conversion; throws std::overflow_error when out of range.
inline std::int64_t to_int64(const Integer& a) {
  if (a.rep() > std::numeric_limits<std::int64_t>::max() ||
      a.rep() < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("integer does not fit in 64 bits: " + a.str());
  return static_cast<std::int64_t>(a.rep());
}
inline std::int64_t to_int64(std::int64_t a) { return a; }

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Exact integer matrices: default arbitrary precision.
using IntegerMatrix = MatrixX<Integer>;
using IntegerVector = VectorX<Integer>;

/// Small lattice vectors (cone generators, exponent vectors).
using LatticeVector = VectorX<std::int64_t>;
using LatticeMatrix = MatrixX<std::int64_t>;

template <typename To, typename From>
MatrixX<To> cast_matrix(const MatrixX<From>& m) {
  MatrixX<To> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if constexpr (std::is_same_v<To, std::int64_t>)
        out(i, j) = to_int64(m(i, j));
      else
        out(i, j) = To(m(i, j));
    }
  return out;
}

}  // namespace pcmk

namespace Eigen {
template <>
struct NumTraits<pcmk::Integer> : GenericNumTraits<pcmk::Integer> {
  using Real = pcmk::Integer;
  using NonInteger = pcmk::Integer;
  using Nested = pcmk::Integer;
  using Literal = pcmk::Integer;
  enum {
    IsInteger = 1,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 8,
    MulCost = 16
  };
  static inline int digits10() { return 0; }
  static inline pcmk::Integer epsilon() { return 0; }
  static inline pcmk::Integer dummy_precision() { return 0; }
  static inline pcmk::Integer highest() = delete;
  static inline pcmk::Integer lowest() = delete;
};
}  // namespace Eigen

#endif  // PCMK_INTEGER_HPP
