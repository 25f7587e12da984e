#ifndef TETRA_COMPLEX_HPP
#define TETRA_COMPLEX_HPP

#include <cmath>
#include <complex>

#include <tetra/mp_real.hpp>

namespace tetra
{

// Minimal complex type over double or MpReal. std::complex is only
// specified for the built-in floating types, hence this one.
template <class R>
struct Complex {
    R re;
    R im;

    Complex() : re(0), im(0) {}
    Complex(R r) : re(std::move(r)), im(real_traits<R>::from_double(0.0, re)) {}
    Complex(R r, R i) : re(std::move(r)), im(std::move(i)) {}

    template <class S = R, std::enable_if_t<!std::is_same_v<S, double>, int> = 0>
    Complex(double r) : re(r), im(0.0)
    {
    }

    friend Complex operator+(const Complex &a, const Complex &b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(const Complex &a, const Complex &b) { return {a.re - b.re, a.im - b.im}; }
    friend Complex operator*(const Complex &a, const Complex &b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    // Smith's algorithm; avoids spurious overflow for large operands.
    friend Complex operator/(const Complex &a, const Complex &b)
    {
        using std::abs;
        if (abs(b.re) >= abs(b.im)) {
            const R r = b.im / b.re;
            const R d = b.re + b.im * r;
            return {(a.re + a.im * r) / d, (a.im - a.re * r) / d};
        }
        const R r = b.re / b.im;
        const R d = b.re * r + b.im;
        return {(a.re * r + a.im) / d, (a.im * r - a.re) / d};
    }
    friend Complex operator*(const Complex &a, const R &s) { return {a.re * s, a.im * s}; }
    friend Complex operator*(const R &s, const Complex &a) { return {a.re * s, a.im * s}; }
    friend Complex operator/(const Complex &a, const R &s) { return {a.re / s, a.im / s}; }
    friend Complex operator+(const Complex &a, const R &s) { return {a.re + s, a.im}; }
    friend Complex operator-(const Complex &a, const R &s) { return {a.re - s, a.im}; }
    Complex operator-() const { return {-re, -im}; }

    Complex &operator+=(const Complex &b) { return *this = *this + b; }
    Complex &operator-=(const Complex &b) { return *this = *this - b; }
    Complex &operator*=(const Complex &b) { return *this = *this * b; }
    Complex &operator/=(const Complex &b) { return *this = *this / b; }

    friend bool operator==(const Complex &a, const Complex &b) { return a.re == b.re && a.im == b.im; }
};

template <class R>
R abs(const Complex<R> &z)
{
    using std::hypot;
    return hypot(z.re, z.im);
}

template <class R>
R arg(const Complex<R> &z)
{
    using std::atan2;
    return atan2(z.im, z.re);
}

template <class R>
Complex<R> conj(const Complex<R> &z)
{
    return {z.re, -z.im};
}

template <class R>
bool is_finite(const Complex<R> &z)
{
    return real_traits<R>::is_finite(z.re) && real_traits<R>::is_finite(z.im);
}

template <class R>
Complex<R> exp(const Complex<R> &z)
{
    using std::cos;
    using std::exp;
    using std::sin;
    const R m = exp(z.re);
    return {m * cos(z.im), m * sin(z.im)};
}

// Principal branch, imaginary part in (-pi, pi]. A negative real axis
// argument with im == -0.0 gives -pi for double; callers that care about
// the side of a cut use log_side() instead.
template <class R>
Complex<R> log(const Complex<R> &z)
{
    using std::log;
    return {log(abs(z)), arg(z)};
}

// e^z - 1 without cancellation near z = 0.
template <class R>
Complex<R> expm1(const Complex<R> &z)
{
    using std::cos;
    using std::exp;
    using std::expm1;
    using std::sin;
    const R s = sin(z.im / 2);
    return {expm1(z.re) * cos(z.im) - 2 * s * s, exp(z.re) * sin(z.im)};
}

// log(1 + z) without cancellation near z = 0.
template <class R>
Complex<R> log1p(const Complex<R> &z)
{
    using std::atan2;
    using std::log1p;
    const R one = real_traits<R>::from_double(1.0, z.re);
    return {log1p(2 * z.re + z.re * z.re + z.im * z.im) / 2, atan2(z.im, one + z.re)};
}

template <class R>
std::complex<double> to_std(const Complex<R> &z)
{
    return {real_traits<R>::to_double(z.re), real_traits<R>::to_double(z.im)};
}

template <class R>
Complex<R> from_std(const std::complex<double> &z, const R &like)
{
    return {real_traits<R>::from_double(z.real(), like), real_traits<R>::from_double(z.imag(), like)};
}

using ComplexD = Complex<double>;
using ComplexMp = Complex<MpReal>;

} // namespace tetra

#endif
