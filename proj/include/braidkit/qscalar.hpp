#pragma once
// Exact arithmetic in the field Q(q) of rational functions in q with rational
// coefficients.  Internally every value is a ratio of integer Laurent
// polynomials in t = q^(1/6); the sixth root lets fractional powers of q such
// as q^(1/2) or q^(-4/3)... (any exponent with denominator dividing 6) be
// represented exactly, which the built-in models need for their dilation
// constants.  Externally everything is printed and parsed in terms of q.

#include <gmpxx.h>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace braidkit {

struct DivisionByZero : std::runtime_error {
  DivisionByZero() : std::runtime_error("division by zero in Q(q)") {}
};
struct PoleAtSpecialization : std::runtime_error {
  explicit PoleAtSpecialization(const std::string& w) : std::runtime_error(w) {}
};
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& w) : std::runtime_error(w) {}
};

namespace detail {

// Dense integer polynomial, little-endian coefficients.
using ZPoly = std::vector<mpz_class>;

inline void trim(ZPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}
inline bool isZero(const ZPoly& p) { return p.empty(); }
inline long degree(const ZPoly& p) { return static_cast<long>(p.size()) - 1; }

inline ZPoly add(const ZPoly& a, const ZPoly& b) {
  ZPoly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}
inline ZPoly neg(const ZPoly& a) {
  ZPoly r(a);
  for (auto& c : r) c = -c;
  return r;
}
inline ZPoly sub(const ZPoly& a, const ZPoly& b) { return add(a, neg(b)); }
inline ZPoly mul(const ZPoly& a, const ZPoly& b) {
  if (isZero(a) || isZero(b)) return {};
  ZPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}
inline ZPoly scale(const ZPoly& a, const mpz_class& s) {
  if (s == 0) return {};
  ZPoly r(a);
  for (auto& c : r) c *= s;
  return r;
}
inline mpz_class content(const ZPoly& p) {
  mpz_class g = 0;
  for (const auto& c : p) {
    mpz_class a = abs(c);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
    if (g == 1) break;
  }
  return g;  // 0 for the zero polynomial
}
inline ZPoly divExactScalar(const ZPoly& p, const mpz_class& s) {
  ZPoly r(p);
  for (auto& c : r) {
    mpz_class qv, rem;
    mpz_tdiv_qr(qv.get_mpz_t(), rem.get_mpz_t(), c.get_mpz_t(), s.get_mpz_t());
    c = qv;
  }
  return r;
}
inline ZPoly primitive(const ZPoly& p) {
  mpz_class c = content(p);
  if (c == 0 || c == 1) return p;
  return divExactScalar(p, c);
}

// Pseudo-remainder of a by b (deg a >= deg b >= 0, b nonzero).
inline ZPoly prem(ZPoly a, const ZPoly& b) {
  const mpz_class& lb = b.back();
  long da = degree(a), db = degree(b);
  while (!isZero(a) && degree(a) >= db) {
    long d = degree(a) - db;
    mpz_class la = a.back();
    ZPoly shifted(d, 0);
    shifted.insert(shifted.end(), b.begin(), b.end());
    a = sub(scale(a, lb), scale(shifted, la));
    trim(a);
    if (degree(a) > da + d) throw std::logic_error("prem degree grew");
  }
  return a;
}

// Primitive polynomial gcd over Z[t] (primitive pseudo-remainder sequence).
inline ZPoly gcd(ZPoly a, ZPoly b) {
  a = primitive(a);
  b = primitive(b);
  if (isZero(a)) return b;
  if (isZero(b)) return a;
  if (degree(a) < degree(b)) std::swap(a, b);
  while (!isZero(b)) {
    ZPoly r = primitive(prem(a, b));
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty() && a.back() < 0) a = neg(a);
  return a;
}

// Exact division a / b in Z[t]; requires b | a over Q[t] with integer quotient.
inline ZPoly divExact(const ZPoly& a, const ZPoly& b) {
  if (isZero(b)) throw DivisionByZero();
  if (isZero(a)) return {};
  // Long division over Q, asserting integrality of the quotient.
  std::vector<mpq_class> rem(a.size());
  for (size_t i = 0; i < a.size(); ++i) rem[i] = a[i];
  long db = degree(b);
  long dq = degree(a) - db;
  if (dq < 0) throw std::logic_error("divExact: degree mismatch");
  std::vector<mpq_class> quo(dq + 1, 0);
  for (long d = dq; d >= 0; --d) {
    mpq_class c = rem[d + db] / mpq_class(b.back());
    quo[d] = c;
    if (c != 0)
      for (long j = 0; j <= db; ++j) rem[d + j] -= c * mpq_class(b[j]);
  }
  ZPoly out(dq + 1);
  for (long i = 0; i <= dq; ++i) {
    if (quo[i].get_den() != 1) throw std::logic_error("divExact: non-integer quotient");
    out[i] = quo[i].get_num();
  }
  trim(out);
  return out;
}

// Square root of p in Z[t] if p is a perfect square, else nullopt.
inline std::optional<ZPoly> polySqrt(const ZPoly& p) {
  if (isZero(p)) return ZPoly{};
  long d = degree(p);
  if (d % 2 != 0) return std::nullopt;
  if (p.back() < 0) return std::nullopt;
  mpz_class lead;
  mpz_sqrt(lead.get_mpz_t(), p.back().get_mpz_t());
  if (lead * lead != p.back()) return std::nullopt;
  ZPoly r(d / 2 + 1, 0);
  r.back() = lead;
  // Coefficient matching from the top: p[d - k] determines r[d/2 - k].
  for (long k = 1; k <= d / 2; ++k) {
    long idx = d / 2 - k;
    mpz_class s = 0;
    for (long i = idx + 1; i <= d / 2; ++i) {
      long j = d - k - i;
      if (j >= idx + 1 && j <= d / 2 && j >= 0) s += r[i] * r[j];
    }
    mpz_class target = p[d - k] - s;
    mpz_class num, rem;
    mpz_class twoLead = 2 * lead;
    mpz_tdiv_qr(num.get_mpz_t(), rem.get_mpz_t(), target.get_mpz_t(), twoLead.get_mpz_t());
    if (rem != 0) return std::nullopt;
    r[idx] = num;
  }
  if (mul(r, r) != p) return std::nullopt;
  return r;
}

inline mpq_class evalAt(const ZPoly& p, const mpq_class& x) {
  mpq_class r = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * x + mpq_class(*it);
  return r;
}

}  // namespace detail

class QScalar {
 public:
  QScalar() : den_{mpz_class(1)}, low_(0) {}  // zero

  static QScalar zero() { return QScalar(); }
  static QScalar one() { return fromInteger(1); }
  static QScalar fromInteger(long v) { return fromRational(mpz_class(v), 1); }
  static QScalar fromRational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw DivisionByZero();
    QScalar s;
    s.num_ = {num};
    s.den_ = {den};
    s.normalize();
    return s;
  }
  // q^(a/b); b must divide 6.
  static QScalar qPow(long a, long b = 1) {
    if (b == 0 || (6L * a) % b != 0) throw std::invalid_argument("qPow: exponent denominator must divide 6");
    QScalar s;
    s.num_ = {mpz_class(1)};
    s.den_ = {mpz_class(1)};
    s.low_ = 6L * a / b;
    return s;
  }
  static QScalar q() { return qPow(1); }
  // t^e where t = q^(1/6); for module-internal fractional-power bookkeeping.
  static QScalar tPow(long e) {
    QScalar s;
    s.num_ = {mpz_class(1)};
    s.den_ = {mpz_class(1)};
    s.low_ = e;
    return s;
  }

  bool isZero() const { return detail::isZero(num_); }
  bool isOne() const { return *this == one(); }

  bool operator==(const QScalar& o) const {
    return low_ == o.low_ && num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const QScalar& o) const { return !(*this == o); }

  QScalar operator-() const {
    QScalar r(*this);
    r.num_ = detail::neg(r.num_);
    // canonical form keeps the denominator's leading coefficient positive; the
    // numerator may carry the sign, so nothing else changes
    return r;
  }

  QScalar operator+(const QScalar& o) const {
    if (isZero()) return o;
    if (o.isZero()) return *this;
    long low = std::min(low_, o.low_);
    detail::ZPoly a = shifted(num_, low_ - low), b = shifted(o.num_, o.low_ - low);
    QScalar r;
    r.num_ = detail::add(detail::mul(a, o.den_), detail::mul(b, den_));
    r.den_ = detail::mul(den_, o.den_);
    r.low_ = low;
    r.normalize();
    return r;
  }
  QScalar operator-(const QScalar& o) const { return *this + (-o); }
  QScalar operator*(const QScalar& o) const {
    if (isZero() || o.isZero()) return zero();
    QScalar r;
    r.num_ = detail::mul(num_, o.num_);
    r.den_ = detail::mul(den_, o.den_);
    r.low_ = low_ + o.low_;
    r.normalize();
    return r;
  }
  QScalar inverse() const {
    if (isZero()) throw DivisionByZero();
    QScalar r;
    r.num_ = den_;
    r.den_ = num_;
    r.low_ = -low_;
    // strip a power of t from the new denominator (old numerator)
    size_t k = 0;
    while (k < r.den_.size() && r.den_[k] == 0) ++k;
    if (k > 0) {
      r.den_.erase(r.den_.begin(), r.den_.begin() + k);
      r.low_ -= static_cast<long>(k);
    }
    r.normalize();
    return r;
  }
  QScalar operator/(const QScalar& o) const { return *this * o.inverse(); }

  QScalar& operator+=(const QScalar& o) { return *this = *this + o; }
  QScalar& operator-=(const QScalar& o) { return *this = *this - o; }
  QScalar& operator*=(const QScalar& o) { return *this = *this * o; }
  QScalar& operator/=(const QScalar& o) { return *this = *this / o; }

  QScalar pow(long e) const {
    if (e == 0) return one();
    QScalar base = e > 0 ? *this : inverse();
    long n = std::labs(e);
    QScalar acc = one();
    while (n > 0) {
      if (n & 1) acc *= base;
      base = base * base;
      n >>= 1;
    }
    return acc;
  }

  // Coefficients are rational, q is real: conjugation is the identity map,
  // kept explicit so starred formulas read honestly.
  QScalar conjugate() const { return *this; }

  // True when the value is c * t^k for a rational constant c (a monomial in q
  // with exponent denominator dividing 6).
  bool isMonomial() const {
    return !isZero() && num_.size() == 1 && den_.size() == 1;
  }

  // Square root in Q(t) with positive leading coefficient, if one exists.
  std::optional<QScalar> trySqrt() const {
    if (isZero()) return zero();
    if (low_ % 2 != 0) return std::nullopt;
    auto n = detail::polySqrt(num_);
    if (!n) return std::nullopt;
    auto d = detail::polySqrt(den_);
    if (!d) return std::nullopt;
    QScalar r;
    r.num_ = *n;
    r.den_ = *d;
    r.low_ = low_ / 2;
    r.normalize();
    return r;
  }

  // Exact evaluation at a rational q0 != 0 (or q0 = 0 if no negative powers).
  mpq_class specializeAt(const mpq_class& q0) const {
    if (isZero()) return 0;
    // Find the coarsest u = t^g (g | 6) in which the value is a function of u.
    long g = std::labs(low_);
    for (size_t i = 1; i < num_.size(); ++i)
      if (num_[i] != 0) g = gcdLong(g, static_cast<long>(i));
    for (size_t i = 1; i < den_.size(); ++i)
      if (den_[i] != 0) g = gcdLong(g, static_cast<long>(i));
    g = gcdLong(g == 0 ? 6 : g, 6);
    // Need u0 with u0^(6/g) = q0.
    mpq_class u0 = rationalRoot(q0, 6 / g);
    detail::ZPoly nu = compress(num_, g), de = compress(den_, g);
    mpq_class dv = detail::evalAt(de, u0);
    if (dv == 0) throw PoleAtSpecialization("denominator vanishes at the specialization point");
    mpq_class nv = detail::evalAt(nu, u0);
    long lowg = low_ / g;
    if (lowg < 0 && u0 == 0) throw PoleAtSpecialization("negative power of q at q=0");
    mpq_class tp = qpowRational(u0, lowg);
    return nv / dv * tp;
  }

  // --- text form in q ------------------------------------------------------
  std::string str() const {
    if (isZero()) return "0";
    std::string n = polyStr(num_, low_);
    if (den_.size() == 1 && den_[0] == 1) return n;
    std::string d = polyStr(den_, 0);
    bool nsimple = (countTerms(num_) == 1 && low_ >= 0);
    std::string left = nsimple ? n : "(" + n + ")";
    bool dsimple = (countTerms(den_) == 1);
    std::string right = dsimple ? d : "(" + d + ")";
    return left + "/" + right;
  }

  static QScalar parse(const std::string& text) {
    Parser p(text);
    QScalar v = p.parseExpr();
    p.skipSpace();
    if (!p.done()) throw ParseError("trailing characters in QScalar text: " + text);
    return v;
  }

 private:
  // value = t^{low_} * num_(t) / den_(t)
  detail::ZPoly num_, den_;
  long low_;

  static long gcdLong(long a, long b) {
    a = std::labs(a);
    b = std::labs(b);
    while (b) {
      long t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static detail::ZPoly shifted(const detail::ZPoly& p, long k) {
    detail::ZPoly r(static_cast<size_t>(k), 0);
    r.insert(r.end(), p.begin(), p.end());
    return r;
  }
  static detail::ZPoly compress(const detail::ZPoly& p, long g) {
    detail::ZPoly r;
    for (size_t i = 0; i < p.size(); i += g) r.push_back(p[i]);
    detail::trim(r);
    return r;
  }
  static mpq_class qpowRational(const mpq_class& base, long e) {
    if (e == 0) return 1;
    if (base == 0) return 0;
    mpq_class b = e > 0 ? base : mpq_class(1) / base;
    mpq_class acc = 1;
    for (long i = 0; i < std::labs(e); ++i) acc *= b;
    return acc;
  }
  static mpq_class rationalRoot(const mpq_class& v, long k) {
    if (k == 1) return v;
    if (v == 0) return 0;
    if (v < 0) throw PoleAtSpecialization("no rational root for negative specialization point");
    mpz_class rn, rd;
    int okn = mpz_root(rn.get_mpz_t(), v.get_num().get_mpz_t(), static_cast<unsigned long>(k));
    int okd = mpz_root(rd.get_mpz_t(), v.get_den().get_mpz_t(), static_cast<unsigned long>(k));
    if (!okn || !okd)
      throw PoleAtSpecialization("specialization point lacks the exact rational root required by fractional q-powers");
    return mpq_class(rn, rd);
  }

  void normalize() {
    detail::trim(num_);
    detail::trim(den_);
    if (detail::isZero(den_)) throw DivisionByZero();
    if (detail::isZero(num_)) {
      den_ = {mpz_class(1)};
      low_ = 0;
      return;
    }
    // Pull t-powers out of the numerator into low_.
    size_t k = 0;
    while (k < num_.size() && num_[k] == 0) ++k;
    if (k > 0) {
      num_.erase(num_.begin(), num_.begin() + k);
      low_ += static_cast<long>(k);
    }
    // The denominator must have a nonzero constant term by construction.
    size_t kd = 0;
    while (kd < den_.size() && den_[kd] == 0) ++kd;
    if (kd > 0) {
      den_.erase(den_.begin(), den_.begin() + kd);
      low_ -= static_cast<long>(kd);
    }
    detail::ZPoly g = detail::gcd(num_, den_);
    if (detail::degree(g) > 0 || (g.size() == 1 && g[0] != 1)) {
      num_ = detail::divExact(num_, g);
      den_ = detail::divExact(den_, g);
    }
    mpz_class cn = detail::content(num_), cd = detail::content(den_);
    mpz_class cg;
    mpz_gcd(cg.get_mpz_t(), cn.get_mpz_t(), cd.get_mpz_t());
    if (cg > 1) {
      num_ = detail::divExactScalar(num_, cg);
      den_ = detail::divExactScalar(den_, cg);
    }
    if (den_.back() < 0) {
      num_ = detail::neg(num_);
      den_ = detail::neg(den_);
    }
  }

  static int countTerms(const detail::ZPoly& p) {
    int c = 0;
    for (const auto& x : p)
      if (x != 0) ++c;
    return c;
  }

  // Render c * q^(e6/6) as a term.
  static std::string termStr(const mpz_class& c, long e6, bool leading) {
    std::string s;
    mpz_class a = abs(c);
    if (c < 0)
      s += leading ? "-" : " - ";
    else if (!leading)
      s += " + ";
    std::string exp;
    if (e6 != 0) {
      if (e6 % 6 == 0) {
        long e = e6 / 6;
        exp = (e == 1) ? "q" : "q^" + std::to_string(e);
      } else {
        long g = gcdLong(e6, 6);
        long nu = e6 / g, de = 6 / g;
        exp = "q^(" + std::to_string(nu) + "/" + std::to_string(de) + ")";
      }
    }
    if (exp.empty())
      s += a.get_str();
    else if (a == 1)
      s += exp;
    else
      s += a.get_str() + "*" + exp;
    return s;
  }

  static std::string polyStr(const detail::ZPoly& p, long low) {
    std::string s;
    bool leading = true;
    for (long i = detail::degree(p); i >= 0; --i) {
      if (p[i] == 0) continue;
      s += termStr(p[i], low + i, leading);
      leading = false;
    }
    return s;
  }

  // --- recursive-descent parser for the q text form ------------------------
  class Parser {
   public:
    explicit Parser(const std::string& s) : s_(s), pos_(0) {}
    void skipSpace() {
      while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool done() const { return pos_ >= s_.size(); }

    QScalar parseExpr() {
      QScalar v = parseTerm();
      for (;;) {
        skipSpace();
        if (peek() == '+') {
          ++pos_;
          v += parseTerm();
        } else if (peek() == '-') {
          ++pos_;
          v -= parseTerm();
        } else
          return v;
      }
    }

   private:
    const std::string& s_;
    size_t pos_;
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    QScalar parseTerm() {
      QScalar v = parseFactor();
      for (;;) {
        skipSpace();
        if (peek() == '*') {
          ++pos_;
          v *= parseFactor();
        } else if (peek() == '/') {
          ++pos_;
          v /= parseFactor();
        } else
          return v;
      }
    }

    QScalar parseFactor() {
      skipSpace();
      if (peek() == '-') {
        ++pos_;
        return -parseFactor();
      }
      if (peek() == '+') {
        ++pos_;
        return parseFactor();
      }
      QScalar v = parseAtom();
      skipSpace();
      if (peek() == '^') {
        ++pos_;
        auto [en, ed] = parseExponent();
        if (v == QScalar::q()) return QScalar::qPow(en, ed);
        if (ed != 1) throw ParseError("fractional exponent only supported on q");
        return v.pow(en);
      }
      return v;
    }

    QScalar parseAtom() {
      skipSpace();
      if (peek() == '(') {
        ++pos_;
        QScalar v = parseExpr();
        skipSpace();
        if (peek() != ')') throw ParseError("expected ')'");
        ++pos_;
        return v;
      }
      if (peek() == 'q') {
        ++pos_;
        return QScalar::q();
      }
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        return QScalar::fromRational(parseInt(), 1);
      }
      throw ParseError("unexpected character in QScalar text");
    }

    mpz_class parseInt() {
      skipSpace();
      size_t start = pos_;
      if (peek() == '-') ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ == start || (pos_ == start + 1 && s_[start] == '-'))
        throw ParseError("expected integer");
      return mpz_class(s_.substr(start, pos_ - start));
    }

    std::pair<long, long> parseExponent() {
      skipSpace();
      if (peek() == '(') {
        ++pos_;
        long a = static_cast<long>(parseInt().get_si());
        long b = 1;
        skipSpace();
        if (peek() == '/') {
          ++pos_;
          b = static_cast<long>(parseInt().get_si());
        }
        skipSpace();
        if (peek() != ')') throw ParseError("expected ')' in exponent");
        ++pos_;
        return {a, b};
      }
      return {static_cast<long>(parseInt().get_si()), 1};
    }
  };
};

inline QScalar operator*(long a, const QScalar& b) { return QScalar::fromInteger(a) * b; }
inline QScalar operator+(long a, const QScalar& b) { return QScalar::fromInteger(a) + b; }
inline QScalar operator-(long a, const QScalar& b) { return QScalar::fromInteger(a) - b; }

}  // namespace braidkit
