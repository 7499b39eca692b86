#include "specialforms/scalar.hpp"

#include <cmath>
#include <sstream>

namespace specialforms {

CycElem CycElem::inv() const {
    if (is_zero()) throw std::domain_error("CycElem::inv: division by zero");
    // Multiply by the Galois conjugates; the full norm is rational.
    CycElem y = conj_i();
    CycElem z = *this * y;  // in Q(sqrt2): b = d = 0
    CycElem w = z.conj_sqrt2();
    CycElem nrm = z * w;  // rational: only the a-component survives
    Rational n = nrm.a;
    CycElem num = y * w;
    return {num.a / n, num.b / n, num.c / n, num.d / n};
}

std::complex<double> CycElem::eval() const {
    static const double s2 = std::sqrt(2.0);
    return {static_cast<double>(a) + s2 * static_cast<double>(c),
            static_cast<double>(b) + s2 * static_cast<double>(d)};
}

void Scalar::add_term(int k, const CycElem& e) {
    if (e.is_zero()) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(k, e);
    } else {
        CycElem s = it->second + e;
        if (s.is_zero())
            terms_.erase(it);
        else
            it->second = s;
    }
}

Scalar Scalar::rational(const Rational& r) {
    Scalar s;
    s.add_term(0, CycElem(r, 0, 0, 0));
    return s;
}

Scalar Scalar::of(CycElem e, int pi_exp) {
    Scalar s;
    s.add_term(pi_exp, e);
    return s;
}

Scalar Scalar::i() { return of(CycElem(0, 1, 0, 0)); }
Scalar Scalar::sqrt2() { return of(CycElem(0, 0, 1, 0)); }
Scalar Scalar::pi_pow(int k) { return of(CycElem(1, 0, 0, 0), k); }

Scalar Scalar::sqrt2_pow(int e) {
    // Write e = 2s + r with r in {0,1}: sqrt2^e = 2^s * sqrt2^r.
    int s = (e >= 0) ? e / 2 : (e - 1) / 2;
    int r = e - 2 * s;
    Rational two_s = (s >= 0) ? Rational(BigInt(1) << s) : Rational(1, BigInt(1) << (-s));
    if (r == 0) return rational(two_s);
    return of(CycElem(0, 0, two_s, 0));
}

Scalar Scalar::two_pi_i_pow(int e) {
    // (2 pi i)^e = 2^e * i^e * pi^e.
    Rational two_e = (e >= 0) ? Rational(BigInt(1) << e) : Rational(1, BigInt(1) << (-e));
    CycElem c(0, 0, 0, 0);
    switch (((e % 4) + 4) % 4) {
        case 0: c = CycElem(two_e, 0, 0, 0); break;
        case 1: c = CycElem(0, two_e, 0, 0); break;
        case 2: c = CycElem(-two_e, 0, 0, 0); break;
        case 3: c = CycElem(0, -two_e, 0, 0); break;
    }
    return of(c, e);
}

CycElem Scalar::pi_free_part() const {
    if (terms_.empty()) return CycElem(0, 0, 0, 0);
    if (!is_pi_free()) throw std::domain_error("Scalar::pi_free_part: scalar involves pi");
    return terms_.begin()->second;
}

Scalar Scalar::operator+(const Scalar& o) const {
    Scalar r = *this;
    for (const auto& [k, e] : o.terms_) r.add_term(k, e);
    return r;
}

Scalar Scalar::operator-() const {
    Scalar r;
    for (const auto& [k, e] : terms_) r.terms_.emplace(k, -e);
    return r;
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
    Scalar r;
    for (const auto& [k1, e1] : terms_)
        for (const auto& [k2, e2] : o.terms_) r.add_term(k1 + k2, e1 * e2);
    return r;
}

Scalar Scalar::inv() const {
    if (terms_.empty()) throw std::domain_error("Scalar::inv: division by zero");
    if (terms_.size() != 1)
        throw std::domain_error("Scalar::inv: not a pi-monomial: " + str());
    return of(terms_.begin()->second.inv(), -terms_.begin()->first);
}

namespace {

void render_part(std::ostringstream& os, bool& first, const Rational& coeff,
                 const std::string& sym, int pi_exp) {
    if (coeff == 0) return;
    Rational c = coeff;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
        if (neg) os << "-";
        first = false;
    } else {
        os << (neg ? " - " : " + ");
    }
    std::string pi;
    if (pi_exp == 1)
        pi = "pi";
    else if (pi_exp != 0)
        pi = "pi^" + std::to_string(pi_exp);
    bool unit = (c == 1);
    std::ostringstream body;
    if (!unit || (sym.empty() && pi.empty())) body << c;
    if (!sym.empty()) {
        if (body.tellp() > 0) body << "*";
        body << sym;
    }
    if (!pi.empty()) {
        if (body.tellp() > 0) body << "*";
        body << pi;
    }
    os << body.str();
}

}  // namespace

std::string Scalar::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, e] : terms_) {
        render_part(os, first, e.a, "", k);
        render_part(os, first, e.b, "i", k);
        render_part(os, first, e.c, "sqrt2", k);
        render_part(os, first, e.d, "i*sqrt2", k);
    }
    return os.str();
}

std::complex<double> Scalar::eval() const {
    static const double kPi = 3.14159265358979323846;
    std::complex<double> v(0.0, 0.0);
    for (const auto& [k, e] : terms_) v += e.eval() * std::pow(kPi, k);
    return v;
}

}  // namespace specialforms
