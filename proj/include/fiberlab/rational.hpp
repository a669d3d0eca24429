#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace fiberlab {

// Exact rational scalar. mpq_class keeps the canonical form we need:
// positive denominator, gcd(|num|, den) = 1, zero stored as 0/1.
using Rational = mpq_class;

inline double to_double(const Rational& q) { return q.get_d(); }

/// Gaussian rational a + b*i with exact rational components.
struct GaussQ {
    Rational re;
    Rational im;

    GaussQ() : re(0), im(0) {}
    GaussQ(long r) : re(r), im(0) {}
    GaussQ(Rational r) : re(std::move(r)), im(0) {}
    GaussQ(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    GaussQ operator-() const { return GaussQ(-re, -im); }

    GaussQ& operator+=(const GaussQ& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussQ& operator-=(const GaussQ& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }

    friend GaussQ operator+(GaussQ a, const GaussQ& b) { return a += b; }
    friend GaussQ operator-(GaussQ a, const GaussQ& b) { return a -= b; }
    friend GaussQ operator*(const GaussQ& a, const GaussQ& b) {
        return GaussQ(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    friend bool operator==(const GaussQ& a, const GaussQ& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussQ& a, const GaussQ& b) { return !(a == b); }

    GaussQ inverse() const {
        if (is_zero()) throw std::domain_error("GaussQ: division by zero");
        Rational n = re * re + im * im;
        return GaussQ(re / n, -im / n);
    }
    friend GaussQ operator/(const GaussQ& a, const GaussQ& b) { return a * b.inverse(); }
};

std::string to_string(const Rational& q);
std::string to_string(const GaussQ& c);

}  // namespace fiberlab
