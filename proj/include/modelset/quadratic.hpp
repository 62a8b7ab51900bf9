#pragma once

// Exact arithmetic in Q(sqrt(s)) for squarefree integer s > 1.
//
// Both worked cut-and-project schemes (the sqrt(2) chain and the Z[sqrt 2]
// Heisenberg lattice) have coordinates in Q(sqrt 2), so lattice labels and
// dual-lattice membership can be decided without rounding.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace modelset {

/// Normalized fraction num/den with den > 0 and gcd(num, den) = 1.
/// Arithmetic is checked: intermediate results are formed in 128 bits and an
/// ArithmeticOverflowError is thrown if the reduced result leaves int64.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num);  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_zero() const { return num_ == 0; }
  int sign() const { return (num_ > 0) - (num_ < 0); }

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  /// Parses "p", "-p" or "p/q".
  static Rational parse(std::string_view text);
  std::string to_string() const;

 private:
  static Rational from_wide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// a + b*sqrt(s). A value with b == 0 is a plain rational and combines with
/// any radicand; two irrational values must share s.
class QuadraticNumber {
 public:
  QuadraticNumber() = default;
  QuadraticNumber(Rational a);  // NOLINT(google-explicit-constructor)
  QuadraticNumber(std::int64_t a);  // NOLINT(google-explicit-constructor)
  QuadraticNumber(Rational a, Rational b, std::int64_t radicand);

  const Rational& rational_part() const { return a_; }
  const Rational& surd_part() const { return b_; }
  std::int64_t radicand() const { return s_; }
  bool is_rational() const { return b_.is_zero(); }
  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }

  double to_double() const;
  /// Exact sign of a + b*sqrt(s).
  int sign() const;

  /// a - b*sqrt(s).
  QuadraticNumber conjugate() const;
  /// (a + b sqrt s)(a - b sqrt s) = a^2 - s b^2.
  Rational norm() const;

  QuadraticNumber operator-() const;
  QuadraticNumber& operator+=(const QuadraticNumber& o);
  QuadraticNumber& operator-=(const QuadraticNumber& o);
  QuadraticNumber& operator*=(const QuadraticNumber& o);
  QuadraticNumber& operator/=(const QuadraticNumber& o);

  friend QuadraticNumber operator+(QuadraticNumber a, const QuadraticNumber& b) { return a += b; }
  friend QuadraticNumber operator-(QuadraticNumber a, const QuadraticNumber& b) { return a -= b; }
  friend QuadraticNumber operator*(QuadraticNumber a, const QuadraticNumber& b) { return a *= b; }
  friend QuadraticNumber operator/(QuadraticNumber a, const QuadraticNumber& b) { return a /= b; }

  friend bool operator==(const QuadraticNumber& x, const QuadraticNumber& y);
  /// Structural order on (a, b) used for map keys; not the numeric order.
  friend bool structural_less(const QuadraticNumber& x, const QuadraticNumber& y);

  /// Parses "a", "a+b*sqrt(s)", "b*sqrt(s)", "sqrt(s)", "a-sqrt(s)" with
  /// rational a, b (written p or p/q).
  static QuadraticNumber parse(std::string_view text);
  std::string to_string() const;

 private:
  std::int64_t merged_radicand(const QuadraticNumber& o) const;
  void canonicalize();

  Rational a_{};
  Rational b_{};
  std::int64_t s_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);
std::ostream& operator<<(std::ostream& os, const QuadraticNumber& q);

using QuadraticVector = std::vector<QuadraticNumber>;

/// Lexicographic structural order on vectors of quadratic numbers.
struct QuadraticVectorLess {
  bool operator()(const QuadraticVector& x, const QuadraticVector& y) const;
};

/// Row-major square matrix over Q(sqrt s), used for exact bases.
struct QuadraticMatrix {
  int dim = 0;
  std::vector<QuadraticNumber> entries;  // row-major

  QuadraticNumber& operator()(int r, int c) { return entries[static_cast<std::size_t>(r * dim + c)]; }
  const QuadraticNumber& operator()(int r, int c) const {
    return entries[static_cast<std::size_t>(r * dim + c)];
  }
};

/// Exact inverse by Gauss-Jordan elimination; throws DegenerateLatticeError if singular.
QuadraticMatrix inverse(const QuadraticMatrix& m);
QuadraticMatrix transpose(const QuadraticMatrix& m);
QuadraticNumber determinant(const QuadraticMatrix& m);

}  // namespace modelset
