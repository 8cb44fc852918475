#pragma once

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>

namespace qtile {

using Rational = boost::multiprecision::cpp_rational;

namespace detail {

inline int sign_of(std::int64_t v) { return (v > 0) - (v < 0); }
inline int sign_of(const Rational& v) { return v.sign(); }

// Sign of a + b*sqrt(5) for exact scalars.
inline int sign_sqrt5(std::int64_t a, std::int64_t b) {
  const int sa = sign_of(a), sb = sign_of(b);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  const __int128 a2 = static_cast<__int128>(a) * a;
  const __int128 b2 = static_cast<__int128>(b) * b * 5;
  if (a2 == b2) return 0;  // unreachable for integers, kept for symmetry
  return a2 > b2 ? sa : sb;
}

inline int sign_sqrt5(const Rational& a, const Rational& b) {
  const int sa = a.sign(), sb = b.sign();
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  const Rational a2 = a * a;
  const Rational b2 = b * b * 5;
  if (a2 == b2) return 0;
  return a2 > b2 ? sa : sb;
}

inline double to_double(std::int64_t v) { return static_cast<double>(v); }
inline double to_double(const Rational& v) { return v.convert_to<double>(); }

}  // namespace detail

inline constexpr double kTau = 1.6180339887498948482;

/// Element p + q*tau of the golden field, tau^2 = tau + 1.
///
/// Scalar is either an exact rational (the general field element) or a
/// machine integer (the ring Z[tau], used by geometric predicates).
template <typename Scalar>
class Golden {
 public:
  Golden() : p_(0), q_(0) {}
  Golden(int p) : p_(p), q_(0) {}  // NOLINT: implicit so Eigen can build 0 and 1
  Golden(Scalar p, Scalar q) : p_(std::move(p)), q_(std::move(q)) {}

  static Golden tau() { return Golden(Scalar(0), Scalar(1)); }
  /// tau^k for any integer k, using tau^-1 = tau - 1.
  static Golden tau_pow(int k) {
    Golden base = k >= 0 ? tau() : Golden(Scalar(-1), Scalar(1));
    Golden r(Scalar(1), Scalar(0));
    for (int i = 0; i < std::abs(k); ++i) r *= base;
    return r;
  }

  const Scalar& p() const { return p_; }
  const Scalar& q() const { return q_; }

  Golden conj() const { return Golden(p_ + q_, -q_); }
  /// Field norm x * conj(x) = p^2 + pq - q^2.
  Scalar norm() const { return p_ * p_ + p_ * q_ - q_ * q_; }

  int sign() const { return detail::sign_sqrt5(Scalar(2 * p_ + q_), q_); }
  bool is_zero() const { return p_ == 0 && q_ == 0; }

  double to_double() const { return detail::to_double(p_) + detail::to_double(q_) * kTau; }

  Golden operator-() const { return Golden(-p_, -q_); }
  Golden& operator+=(const Golden& o) { p_ += o.p_; q_ += o.q_; return *this; }
  Golden& operator-=(const Golden& o) { p_ -= o.p_; q_ -= o.q_; return *this; }
  Golden& operator*=(const Golden& o) {
    // (p + q t)(r + s t) = pr + qs + (ps + qr + qs) t
    Scalar qs = q_ * o.q_;
    Scalar np = p_ * o.p_ + qs;
    Scalar nq = p_ * o.q_ + q_ * o.p_ + qs;
    p_ = std::move(np);
    q_ = std::move(nq);
    return *this;
  }
  /// Division is exact only for rational scalars or when the norm divides.
  Golden& operator/=(const Golden& o) {
    Scalar n = o.norm();
    *this *= o.conj();
    p_ /= n;
    q_ /= n;
    return *this;
  }

  friend Golden operator+(Golden a, const Golden& b) { return a += b; }
  friend Golden operator-(Golden a, const Golden& b) { return a -= b; }
  friend Golden operator*(Golden a, const Golden& b) { return a *= b; }
  friend Golden operator/(Golden a, const Golden& b) { return a /= b; }

  friend bool operator==(const Golden& a, const Golden& b) { return a.p_ == b.p_ && a.q_ == b.q_; }
  friend bool operator!=(const Golden& a, const Golden& b) { return !(a == b); }
  friend bool operator<(const Golden& a, const Golden& b) { return (a - b).sign() < 0; }
  friend bool operator>(const Golden& a, const Golden& b) { return b < a; }
  friend bool operator<=(const Golden& a, const Golden& b) { return !(b < a); }
  friend bool operator>=(const Golden& a, const Golden& b) { return !(a < b); }

  /// Text form "p+q*tau", e.g. "1/2+3*tau" or "-1-tau".
  std::string str() const {
    std::ostringstream os;
    if (q_ == 0) {
      os << p_;
      return os.str();
    }
    if (p_ != 0) os << p_ << (q_ > 0 ? "+" : "-");
    else if (q_ < 0) os << "-";
    Scalar aq = q_ < 0 ? Scalar(-q_) : q_;
    if (aq != 1) os << aq << "*";
    os << "tau";
    return os.str();
  }

  friend std::ostream& operator<<(std::ostream& os, const Golden& g) { return os << g.str(); }

 private:
  Scalar p_;
  Scalar q_;
};

using GoldenNum = Golden<Rational>;
using GoldenInt = Golden<std::int64_t>;

inline GoldenNum to_field(const GoldenInt& g) { return GoldenNum(Rational(g.p()), Rational(g.q())); }

template <typename Scalar>
Golden<Scalar> abs(const Golden<Scalar>& g) { return g.sign() < 0 ? -g : g; }

}  // namespace qtile

namespace Eigen {

template <typename Scalar>
struct NumTraits<qtile::Golden<Scalar>> : GenericNumTraits<qtile::Golden<Scalar>> {
  typedef qtile::Golden<Scalar> Real;
  typedef qtile::Golden<Scalar> NonInteger;
  typedef qtile::Golden<Scalar> Nested;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 4,
    MulCost = 8
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
