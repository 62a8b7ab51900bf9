#include "modelset/quadratic.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <sstream>

#include "modelset/error.hpp"

namespace modelset {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

constexpr __int128 kInt64Max = static_cast<__int128>(INT64_MAX);

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::int64_t parse_int(std::string_view s) {
  s = trim(s);
  if (s.empty()) throw Error("empty integer");
  std::string buf(s);
  char* end = nullptr;
  errno = 0;
  long long v = std::strtoll(buf.c_str(), &end, 10);
  if (end != buf.c_str() + buf.size() || errno == ERANGE) throw Error("bad integer: " + buf);
  return v;
}

}  // namespace

Rational::Rational(std::int64_t num) : num_(num), den_(1) {}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error("rational with zero denominator");
  *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den) {
  if (den == 0) throw Error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num > kInt64Max || num < -kInt64Max || den > kInt64Max) {
    throw ArithmeticOverflowError("rational overflow");
  }
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational Rational::operator-() const {
  Rational r = *this;
  r.num_ = -r.num_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  __int128 n = static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_;
  __int128 d = static_cast<__int128>(den_) * o.den_;
  return *this = from_wide(n, d);
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  // Cross-reduce first so that products of reduced fractions stay small.
  __int128 g1 = gcd128(num_, o.den_);
  __int128 g2 = gcd128(o.num_, den_);
  if (g1 == 0) g1 = 1;
  if (g2 == 0) g2 = 1;
  __int128 n = (num_ / g1) * (o.num_ / g2);
  __int128 d = (den_ / g2) * (o.den_ / g1);
  return *this = from_wide(n, d);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw Error("rational division by zero");
  Rational inv;
  inv = from_wide(o.den_, o.num_);
  return *this *= inv;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  __int128 l = static_cast<__int128>(a.num_) * b.den_;
  __int128 r = static_cast<__int128>(b.num_) * a.den_;
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational Rational::parse(std::string_view text) {
  text = trim(text);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

QuadraticNumber::QuadraticNumber(Rational a) : a_(a) {}
QuadraticNumber::QuadraticNumber(std::int64_t a) : a_(a) {}

QuadraticNumber::QuadraticNumber(Rational a, Rational b, std::int64_t radicand) : a_(a), b_(b), s_(radicand) {
  if (radicand < 2 && !b.is_zero()) throw Error("radicand must be >= 2");
  canonicalize();
}

void QuadraticNumber::canonicalize() {
  if (b_.is_zero()) s_ = 0;
}

std::int64_t QuadraticNumber::merged_radicand(const QuadraticNumber& o) const {
  if (s_ == 0) return o.s_;
  if (o.s_ == 0 || o.s_ == s_) return s_;
  throw Error("mixing quadratic numbers with different radicands");
}

double QuadraticNumber::to_double() const {
  if (s_ == 0) return a_.to_double();
  return a_.to_double() + b_.to_double() * std::sqrt(static_cast<double>(s_));
}

int QuadraticNumber::sign() const {
  int sa = a_.sign();
  int sb = b_.sign();
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // Opposite signs: compare a^2 with s b^2.
  Rational a2 = a_ * a_;
  Rational sb2 = b_ * b_ * Rational(s_);
  auto c = a2 <=> sb2;
  if (c == 0) return 0;
  return c > 0 ? sa : sb;
}

QuadraticNumber QuadraticNumber::conjugate() const {
  QuadraticNumber r = *this;
  r.b_ = -r.b_;
  return r;
}

Rational QuadraticNumber::norm() const { return a_ * a_ - b_ * b_ * Rational(s_ == 0 ? 0 : s_); }

QuadraticNumber QuadraticNumber::operator-() const {
  QuadraticNumber r = *this;
  r.a_ = -r.a_;
  r.b_ = -r.b_;
  return r;
}

QuadraticNumber& QuadraticNumber::operator+=(const QuadraticNumber& o) {
  s_ = merged_radicand(o);
  a_ += o.a_;
  b_ += o.b_;
  canonicalize();
  return *this;
}

QuadraticNumber& QuadraticNumber::operator-=(const QuadraticNumber& o) { return *this += -o; }

QuadraticNumber& QuadraticNumber::operator*=(const QuadraticNumber& o) {
  std::int64_t s = merged_radicand(o);
  Rational a = a_ * o.a_;
  if (s != 0) a += b_ * o.b_ * Rational(s);
  Rational b = a_ * o.b_ + b_ * o.a_;
  a_ = a;
  b_ = b;
  s_ = s;
  canonicalize();
  return *this;
}

QuadraticNumber& QuadraticNumber::operator/=(const QuadraticNumber& o) {
  if (o.is_zero()) throw Error("quadratic division by zero");
  Rational n = o.norm();
  QuadraticNumber c = o.conjugate();
  *this *= c;
  a_ /= n;
  b_ /= n;
  canonicalize();
  return *this;
}

bool operator==(const QuadraticNumber& x, const QuadraticNumber& y) {
  return x.a_ == y.a_ && x.b_ == y.b_ && (x.b_.is_zero() || x.s_ == y.s_);
}

bool structural_less(const QuadraticNumber& x, const QuadraticNumber& y) {
  if (x.a_ != y.a_) return x.a_ < y.a_;
  return x.b_ < y.b_;
}

namespace {

// One additive term: "p", "p/q", "sqrt(s)", "c*sqrt(s)", "sqrt(s)/q", "c*sqrt(s)/q".
QuadraticNumber parse_term(std::string_view t, bool negative) {
  t = trim(t);
  auto sq = t.find("sqrt(");
  if (sq == std::string_view::npos) {
    Rational r = Rational::parse(t);
    return negative ? QuadraticNumber(-r) : QuadraticNumber(r);
  }
  auto close = t.find(')', sq);
  if (close == std::string_view::npos) throw Error("unbalanced sqrt(");
  std::int64_t s = parse_int(t.substr(sq + 5, close - sq - 5));
  Rational coef(1);
  std::string_view pre = trim(t.substr(0, sq));
  if (!pre.empty()) {
    if (pre.back() != '*') throw Error("expected '*' before sqrt");
    pre.remove_suffix(1);
    coef = Rational::parse(pre);
  }
  std::string_view post = trim(t.substr(close + 1));
  if (!post.empty()) {
    if (post.front() != '/') throw Error("unexpected text after sqrt(...)");
    coef /= Rational(parse_int(post.substr(1)));
  }
  if (negative) coef = -coef;
  return QuadraticNumber(Rational(0), coef, s);
}

}  // namespace

QuadraticNumber QuadraticNumber::parse(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw Error("empty quadratic number");
  QuadraticNumber sum;
  std::size_t start = 0;
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    start = 1;
  }
  int depth = 0;
  for (std::size_t i = start; i <= text.size(); ++i) {
    char ch = i < text.size() ? text[i] : '\0';
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    bool split = ch == '\0' || (depth == 0 && (ch == '+' || ch == '-') && i > start && text[i - 1] != '/' &&
                                text[i - 1] != '*');
    if (split) {
      sum += parse_term(text.substr(start, i - start), negative);
      if (ch == '\0') break;
      negative = ch == '-';
      start = i + 1;
    }
  }
  return sum;
}

std::string QuadraticNumber::to_string() const {
  if (s_ == 0) return a_.to_string();
  std::string surd = "sqrt(" + std::to_string(s_) + ")";
  std::string b;
  if (b_ == Rational(1)) {
    b = surd;
  } else if (b_ == Rational(-1)) {
    b = "-" + surd;
  } else {
    b = b_.to_string() + "*" + surd;
  }
  if (a_.is_zero()) return b;
  if (b_.sign() < 0) return a_.to_string() + b;
  return a_.to_string() + "+" + b;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }
std::ostream& operator<<(std::ostream& os, const QuadraticNumber& q) { return os << q.to_string(); }

bool QuadraticVectorLess::operator()(const QuadraticVector& x, const QuadraticVector& y) const {
  if (x.size() != y.size()) return x.size() < y.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (structural_less(x[i], y[i])) return true;
    if (structural_less(y[i], x[i])) return false;
  }
  return false;
}

QuadraticMatrix transpose(const QuadraticMatrix& m) {
  QuadraticMatrix t{m.dim, m.entries};
  for (int r = 0; r < m.dim; ++r)
    for (int c = 0; c < m.dim; ++c) t(c, r) = m(r, c);
  return t;
}

QuadraticMatrix inverse(const QuadraticMatrix& m) {
  const int n = m.dim;
  QuadraticMatrix a = m;
  QuadraticMatrix inv{n, std::vector<QuadraticNumber>(static_cast<std::size_t>(n * n))};
  for (int i = 0; i < n; ++i) inv(i, i) = QuadraticNumber(1);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (!a(r, col).is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) throw DegenerateLatticeError("singular exact matrix");
    if (pivot != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(a(pivot, c), a(col, c));
        std::swap(inv(pivot, c), inv(col, c));
      }
    }
    QuadraticNumber p = a(col, col);
    for (int c = 0; c < n; ++c) {
      a(col, c) /= p;
      inv(col, c) /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || a(r, col).is_zero()) continue;
      QuadraticNumber f = a(r, col);
      for (int c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

QuadraticNumber determinant(const QuadraticMatrix& m) {
  const int n = m.dim;
  QuadraticMatrix a = m;
  QuadraticNumber det(1);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (!a(r, col).is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return QuadraticNumber(0);
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      det = -det;
    }
    det *= a(col, col);
    for (int r = col + 1; r < n; ++r) {
      if (a(r, col).is_zero()) continue;
      QuadraticNumber f = a(r, col) / a(col, col);
      for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
    }
  }
  return det;
}

}  // namespace modelset
