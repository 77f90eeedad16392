#pragma once

// Exact scalar types: arbitrary-precision integers and rationals (GMP backed)
// and elements of a prime field with a process-wide modulus.

#include <Eigen/Core>
#include <gmpxx.h>

#include <concepts>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qhw {

class Integer {
 public:
  Integer() = default;
  Integer(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Integer(int v) : v_(v) {}   // NOLINT(google-explicit-constructor)
  explicit Integer(mpz_class v) : v_(std::move(v)) {}
  explicit Integer(std::string_view s) : v_(std::string(s)) {}

  const mpz_class& raw() const { return v_; }
  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }
  bool fits_long() const { return v_.fits_slong_p(); }
  long to_long() const { return v_.get_si(); }
  std::string to_string() const { return v_.get_str(); }

  Integer operator-() const { return Integer(mpz_class(-v_)); }
  Integer& operator+=(const Integer& o) { v_ += o.v_; return *this; }
  Integer& operator-=(const Integer& o) { v_ -= o.v_; return *this; }
  Integer& operator*=(const Integer& o) { v_ *= o.v_; return *this; }
  // exact division; callers guarantee divisibility
  Integer& operator/=(const Integer& o) {
    mpz_divexact(v_.get_mpz_t(), v_.get_mpz_t(), o.v_.get_mpz_t());
    return *this;
  }
  friend Integer operator+(Integer a, const Integer& b) { return a += b; }
  friend Integer operator-(Integer a, const Integer& b) { return a -= b; }
  friend Integer operator*(Integer a, const Integer& b) { return a *= b; }
  friend Integer operator/(Integer a, const Integer& b) { return a /= b; }
  friend bool operator==(const Integer& a, const Integer& b) { return a.v_ == b.v_; }
  friend auto operator<=>(const Integer& a, const Integer& b) {
    int c = cmp(a.v_, b.v_);
    return c <=> 0;
  }

  /// Floor division and remainder with 0 <= r < |b|.
  friend std::pair<Integer, Integer> divmod(const Integer& a, const Integer& b) {
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.v_.get_mpz_t(), b.v_.get_mpz_t());
    if (sgn(r) < 0) {
      r += abs(b.v_);
      q -= sgn(b.v_);
    }
    return {Integer(std::move(q)), Integer(std::move(r))};
  }
  friend Integer gcd(const Integer& a, const Integer& b) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.v_.get_mpz_t(), b.v_.get_mpz_t());
    return Integer(std::move(g));
  }
  friend Integer abs(const Integer& a) { return Integer(mpz_class(abs(a.v_))); }
  friend std::ostream& operator<<(std::ostream& os, const Integer& a) { return os << a.v_; }

 private:
  mpz_class v_;
};

/// Extended gcd: returns (g, s, t) with s*a + t*b = g >= 0.
inline std::tuple<Integer, Integer, Integer> xgcd(const Integer& a, const Integer& b) {
  mpz_class g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.raw().get_mpz_t(), b.raw().get_mpz_t());
  return {Integer(std::move(g)), Integer(std::move(s)), Integer(std::move(t))};
}

/// Rational number kept in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(int v) : v_(v) {}   // NOLINT(google-explicit-constructor)
  Rational(const Integer& v) : v_(v.raw()) {}  // NOLINT(google-explicit-constructor)
  Rational(const Integer& num, const Integer& den) : v_(num.raw(), den.raw()) {
    if (den.is_zero()) throw std::domain_error("zero denominator");
    v_.canonicalize();
  }
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  /// Parses "a", "-a" or "a/b".
  static Rational parse(std::string_view s) {
    mpq_class q;
    if (q.set_str(std::string(s), 10) != 0) throw std::invalid_argument("bad rational: " + std::string(s));
    if (sgn(q.get_den()) == 0) throw std::domain_error("zero denominator");
    q.canonicalize();
    return Rational(std::move(q));
  }

  static std::string field_name() { return "Q"; }

  Integer numerator() const { return Integer(mpz_class(v_.get_num())); }
  Integer denominator() const { return Integer(mpz_class(v_.get_den())); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  int sign() const { return sgn(v_); }
  std::string to_string() const { return v_.get_str(); }
  const mpq_class& raw() const { return v_; }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    v_ /= o.v_;
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend auto operator<=>(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) <=> 0; }
  friend std::ostream& operator<<(std::ostream& os, const Rational& a) { return os << a.v_; }

 private:
  mpq_class v_;
};

/// Element of Z/p for a prime p chosen once per run (see Fp::set_modulus).
class Fp {
 public:
  Fp() = default;
  Fp(long v) : v_(reduce(v)) {}  // NOLINT(google-explicit-constructor)
  Fp(int v) : v_(reduce(v)) {}   // NOLINT(google-explicit-constructor)
  Fp(const Integer& v) {         // NOLINT(google-explicit-constructor)
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), v.raw().get_mpz_t(), modulus_);
    v_ = r.get_ui();
  }

  static std::uint64_t modulus() { return modulus_; }
  /// Must be called before any Fp value is created; throws unless p is prime.
  static void set_modulus(std::uint64_t p) {
    if (!is_prime(p)) throw std::invalid_argument("modulus is not prime: " + std::to_string(p));
    if (p >= (1ULL << 31)) throw std::invalid_argument("modulus must be below 2^31");
    modulus_ = p;
  }
  static bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) return false;
    return true;
  }
  static std::string field_name() { return "F" + std::to_string(modulus_); }

  static Fp parse(std::string_view s) {
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return Fp(Integer(s));
    return Fp(Integer(s.substr(0, slash))) / Fp(Integer(s.substr(slash + 1)));
  }

  std::uint64_t value() const { return v_; }
  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }
  /// Sign of the representative in (-p/2, p/2], used for printing.
  int sign() const { return v_ == 0 ? 0 : (v_ > modulus_ / 2 ? -1 : 1); }
  std::string to_string() const { return std::to_string(v_); }

  Fp operator-() const { return from_raw(v_ == 0 ? 0 : modulus_ - v_); }
  Fp& operator+=(const Fp& o) { v_ += o.v_; if (v_ >= modulus_) v_ -= modulus_; return *this; }
  Fp& operator-=(const Fp& o) { v_ += modulus_ - o.v_; if (v_ >= modulus_) v_ -= modulus_; return *this; }
  Fp& operator*=(const Fp& o) { v_ = (v_ * o.v_) % modulus_; return *this; }
  Fp& operator/=(const Fp& o) { return *this *= o.inverse(); }
  friend Fp operator+(Fp a, const Fp& b) { return a += b; }
  friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
  friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
  friend Fp operator/(Fp a, const Fp& b) { return a /= b; }
  friend bool operator==(const Fp& a, const Fp& b) { return a.v_ == b.v_; }
  friend auto operator<=>(const Fp& a, const Fp& b) { return a.v_ <=> b.v_; }
  friend std::ostream& operator<<(std::ostream& os, const Fp& a) { return os << a.v_; }

  Fp inverse() const {
    if (v_ == 0) throw std::domain_error("division by zero");
    std::uint64_t result = 1, base = v_, e = modulus_ - 2;
    while (e) {
      if (e & 1) result = (result * base) % modulus_;
      base = (base * base) % modulus_;
      e >>= 1;
    }
    return from_raw(result);
  }

 private:
  static Fp from_raw(std::uint64_t v) { Fp x; x.v_ = v; return x; }
  static std::uint64_t reduce(long v) {
    long m = static_cast<long>(modulus_);
    long r = v % m;
    return static_cast<std::uint64_t>(r < 0 ? r + m : r);
  }

  inline static std::uint64_t modulus_ = 32003;
  std::uint64_t v_ = 0;
};

template <class S>
concept ExactField = requires(S a, S b) {
  { a + b } -> std::convertible_to<S>;
  { a * b } -> std::convertible_to<S>;
  { a / b } -> std::convertible_to<S>;
  { a.is_zero() } -> std::convertible_to<bool>;
  { S(1) };
  { S::field_name() } -> std::convertible_to<std::string>;
};

template <class S>
S pow_sign(long exponent) {
  return (exponent % 2 == 0) ? S(1) : S(-1);
}

}  // namespace qhw

namespace Eigen {

template <>
struct NumTraits<qhw::Rational> : GenericNumTraits<qhw::Rational> {
  using Real = qhw::Rational;
  using NonInteger = qhw::Rational;
  using Nested = qhw::Rational;
  using Literal = qhw::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 40,
    MulCost = 40
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<qhw::Integer> : GenericNumTraits<qhw::Integer> {
  using Real = qhw::Integer;
  using NonInteger = qhw::Rational;
  using Nested = qhw::Integer;
  using Literal = qhw::Integer;
  enum {
    IsComplex = 0,
    IsInteger = 1,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 20,
    MulCost = 20
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<qhw::Fp> : GenericNumTraits<qhw::Fp> {
  using Real = qhw::Fp;
  using NonInteger = qhw::Fp;
  using Nested = qhw::Fp;
  using Literal = qhw::Fp;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 0,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 2,
    MulCost = 4
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
