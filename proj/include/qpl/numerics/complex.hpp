#pragma once

#include "qpl/numerics/precision.hpp"

#include <string>

namespace qpl {

/// Complex number over Real. std::complex is unspecified for non-builtin
/// scalars, so the handful of operations the kernels need live here.
struct Complex {
    Real re;
    Real im;

    Complex() : re(0), im(0) {}
    Complex(const Real& r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)
    Complex(int r) : re(r), im(0) {}          // NOLINT(google-explicit-constructor)
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    Complex& operator+=(const Complex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Complex& operator-=(const Complex& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    Complex& operator*=(const Real& s) {
        re *= s;
        im *= s;
        return *this;
    }
    Complex& operator/=(const Real& s) {
        re /= s;
        im /= s;
        return *this;
    }
    Complex& operator*=(const Complex& o) {
        Real r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    Complex& operator/=(const Complex& o);

    /// this += a * b without building a temporary Complex.
    void add_product(const Complex& a, const Complex& b) {
        re += a.re * b.re - a.im * b.im;
        im += a.re * b.im + a.im * b.re;
    }
};

inline Complex operator+(Complex a, const Complex& b) { return a += b; }
inline Complex operator-(Complex a, const Complex& b) { return a -= b; }
inline Complex operator*(Complex a, const Complex& b) { return a *= b; }
inline Complex operator/(Complex a, const Complex& b) { return a /= b; }
inline Complex operator*(Complex a, const Real& s) { return a *= s; }
inline Complex operator*(const Real& s, Complex a) { return a *= s; }
inline Complex operator/(Complex a, const Real& s) { return a /= s; }
inline Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
inline bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
inline bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }

inline Complex conj(const Complex& z) { return {z.re, -z.im}; }
inline Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }
Real abs(const Complex& z);
Real arg(const Complex& z);
Complex polar(const Real& r, const Real& theta);
Complex exp(const Complex& z);
Complex log(const Complex& z);
/// Principal branch, cut along the negative real axis.
Complex sqrt(const Complex& z);
/// Principal branch z^p = exp(p log z).
Complex pow(const Complex& z, const Real& p);
Complex pow(const Complex& z, int n);
inline Complex i_unit() { return {Real(0), Real(1)}; }

inline Complex at_default_precision(const Complex& z) { return {at_default_precision(z.re), at_default_precision(z.im)}; }

std::string to_string(const Complex& z);
std::string to_string(const Complex& z, int significant);

/// Parses "0.5", "0.5+0.3i", "-0.3i", "1e-3-2e-2i", "i" and fractions in
/// either part ("1/2+1/3i").
Complex parse_complex(std::string_view text);

}  // namespace qpl
