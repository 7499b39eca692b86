#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <map>
#include <stdexcept>
#include <string>

namespace specialforms {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Element of the field Q(i, sqrt2) in the basis {1, i, sqrt2, i*sqrt2}.
struct CycElem {
    Rational a;  // 1
    Rational b;  // i
    Rational c;  // sqrt2
    Rational d;  // i*sqrt2

    CycElem() = default;
    CycElem(Rational a_, Rational b_, Rational c_, Rational d_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}

    bool is_zero() const { return a == 0 && b == 0 && c == 0 && d == 0; }

    CycElem operator+(const CycElem& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    CycElem operator-(const CycElem& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    CycElem operator-() const { return {-a, -b, -c, -d}; }

    // i^2 = -1, sqrt2^2 = 2.
    CycElem operator*(const CycElem& o) const {
        return {a * o.a - b * o.b + 2 * c * o.c - 2 * d * o.d,
                a * o.b + b * o.a + 2 * c * o.d + 2 * d * o.c,
                a * o.c + c * o.a - b * o.d - d * o.b,
                a * o.d + d * o.a + b * o.c + c * o.b};
    }

    CycElem conj_i() const { return {a, -b, c, -d}; }      // i -> -i
    CycElem conj_sqrt2() const { return {a, b, -c, -d}; }  // sqrt2 -> -sqrt2
    bool operator==(const CycElem& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }

    CycElem inv() const;

    std::complex<double> eval() const;
};

/// Exact coefficient scalar: Q(i,sqrt2) with an adjoined formal invertible
/// symbol pi, i.e. finite sums  sum_k  e_k * pi^k  with e_k in Q(i,sqrt2).
class Scalar {
  public:
    Scalar() = default;

    static Scalar zero() { return Scalar(); }
    static Scalar one() { return integer(1); }
    static Scalar integer(long v) { return rational(Rational(v)); }
    static Scalar rational(const Rational& r);
    static Scalar of(CycElem e, int pi_exp = 0);
    static Scalar i();
    static Scalar sqrt2();
    static Scalar pi_pow(int k);
    /// (sqrt2)^e for any integer e; (sqrt2)^-1 = sqrt2/2.
    static Scalar sqrt2_pow(int e);
    /// (2*pi*i)^e for any integer e.
    static Scalar two_pi_i_pow(int e);

    bool is_zero() const { return terms_.empty(); }
    bool is_pi_free() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0); }
    /// Sole CycElem coefficient of a pi-free scalar (zero scalar gives 0).
    CycElem pi_free_part() const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator-() const;
    Scalar operator*(const Scalar& o) const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    bool operator==(const Scalar& o) const { return terms_ == o.terms_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    /// Exact inverse of a single pi-monomial with nonzero coefficient.
    /// Throws std::domain_error for zero or a multi-term scalar.
    Scalar inv() const;

    /// Canonical text rendering, e.g. "3/2*i*pi^-1 + sqrt2".
    /// Terms are ordered by pi-exponent, then basis order {1, i, sqrt2, i*sqrt2}.
    std::string str() const;

    /// Numerical value with pi -> 3.14159..., i -> imaginary unit.
    std::complex<double> eval() const;

    const std::map<int, CycElem>& terms() const { return terms_; }

  private:
    std::map<int, CycElem> terms_;  // pi exponent -> nonzero coefficient

    void add_term(int k, const CycElem& e);
};

inline Scalar operator*(long v, const Scalar& s) { return Scalar::integer(v) * s; }

}  // namespace specialforms
