#include "qpl/numerics/complex.hpp"

#include "qpl/numerics/errors.hpp"

namespace qpl {

Complex& Complex::operator/=(const Complex& o) {
    // Smith's algorithm keeps the intermediate products in range.
    if (boost::multiprecision::abs(o.re) >= boost::multiprecision::abs(o.im)) {
        const Real r = o.im / o.re;
        const Real d = o.re + o.im * r;
        Real nr = (re + im * r) / d;
        im = (im - re * r) / d;
        re = std::move(nr);
    } else {
        const Real r = o.re / o.im;
        const Real d = o.re * r + o.im;
        Real nr = (re * r + im) / d;
        im = (im * r - re) / d;
        re = std::move(nr);
    }
    return *this;
}

Real abs(const Complex& z) { return boost::multiprecision::hypot(z.re, z.im); }

Real arg(const Complex& z) { return boost::multiprecision::atan2(z.im, z.re); }

Complex polar(const Real& r, const Real& theta) {
    return {r * boost::multiprecision::cos(theta), r * boost::multiprecision::sin(theta)};
}

Complex exp(const Complex& z) {
    const Real m = boost::multiprecision::exp(z.re);
    return {m * boost::multiprecision::cos(z.im), m * boost::multiprecision::sin(z.im)};
}

Complex log(const Complex& z) { return {boost::multiprecision::log(abs(z)), arg(z)}; }

Complex sqrt(const Complex& z) {
    if (z.re == 0 && z.im == 0) return {};
    const Real m = abs(z);
    if (z.re >= 0) {
        const Real r = boost::multiprecision::sqrt((m + z.re) / 2);
        return {r, z.im / (2 * r)};
    }
    Real i = boost::multiprecision::sqrt((m - z.re) / 2);
    // Negative real axis (im == +0 or -0) maps to the upper imaginary axis.
    if (z.im < 0) i = -i;
    return {z.im / (2 * i), i};
}

Complex pow(const Complex& z, const Real& p) {
    if (z.re == 0 && z.im == 0) return {};
    return exp(log(z) * p);
}

Complex pow(const Complex& z, int n) {
    if (n < 0) return Complex(1) / pow(z, -n);
    Complex result(1);
    Complex base = z;
    while (n > 0) {
        if (n & 1) result *= base;
        n >>= 1;
        if (n > 0) base *= base;
    }
    return result;
}

std::string to_string(const Complex& z) { return to_string(z.re) + " " + to_string(z.im) + "i"; }

std::string to_string(const Complex& z, int significant) {
    std::string im = to_string(z.im, significant);
    if (im.front() != '-') im = "+" + im;
    return to_string(z.re, significant) + im + "i";
}

Complex parse_complex(std::string_view text) {
    std::string s;
    for (char c : text) {
        if (c != ' ' && c != '\t') s.push_back(c);
    }
    if (s.empty()) throw UsageError("empty complex number");
    if (s.back() != 'i') return {parse_real(s), Real(0)};
    s.pop_back();
    // Split at the last sign that is not part of an exponent and not leading.
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E' && s[k - 1] != '/') {
            split = k;
            break;
        }
    }
    auto imag_part = [](const std::string& v) -> Real {
        if (v.empty() || v == "+") return Real(1);
        if (v == "-") return Real(-1);
        return parse_real(v);
    };
    if (split == std::string::npos) return {Real(0), imag_part(s)};
    return {parse_real(s.substr(0, split)), imag_part(s.substr(split))};
}

}  // namespace qpl
