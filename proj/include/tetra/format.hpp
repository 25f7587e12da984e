#ifndef TETRA_FORMAT_HPP
#define TETRA_FORMAT_HPP

#include <charconv>
#include <cmath>
#include <complex>
#include <string>
#include <system_error>

#include <tetra/complex.hpp>
#include <tetra/limit_methods.hpp>
#include <tetra/mp_real.hpp>

namespace tetra
{

// Shortest decimal that reads back to the same double.
inline std::string format_double(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

// Enough significant digits to round-trip a value of the given precision.
inline int round_trip_digits(long bits) { return static_cast<int>(std::ceil(static_cast<double>(bits) * 0.30103)) + 2; }

// Round-trip digits in %g style; values of at most 53 bits print like doubles.
inline std::string format_mp(const MpReal &x)
{
    if (x.precision() <= 53 || !x.is_finite()) {
        return format_double(x.to_double());
    }
    char *buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", round_trip_digits(x.precision()), x.raw());
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
}

// "a" for real values, "a+bi" / "a-bi" otherwise.
inline std::string format_complex(std::complex<double> z)
{
    if (z.imag() == 0) {
        return format_double(z.real());
    }
    const std::string im = format_double(std::abs(z.imag()));
    return format_double(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + im + "i";
}

inline std::string format_complex(const ComplexMp &z)
{
    if (z.im.is_zero()) {
        return format_mp(z.re);
    }
    const MpReal a = abs(z.im);
    return format_mp(z.re) + (z.im.sign() < 0 ? "-" : "+") + format_mp(a) + "i";
}

// Digits after the point used by the published convergence tables, and
// whether they were rounded or cut.
struct PrintedFormat {
    int decimals;
    bool truncate;
};

inline PrintedFormat printed_format(LimitMethod m, long n)
{
    switch (m) {
        case LimitMethod::levy:
            return {n < 1000 ? 4 : n < 10000 ? 6 : n < 100000 ? 7 : 8, false};
        case LimitMethod::fatou1:
        case LimitMethod::fatou2:
            return {n < 10000 ? 7 : n < 100000 ? 9 : 11, true};
        case LimitMethod::newton:
            return {4, false};
    }
    return {8, false};
}

inline std::string printed_value(LimitMethod m, long n, const MpReal &x)
{
    const PrintedFormat f = printed_format(m, n);
    return x.to_fixed(f.decimals, f.truncate ? MPFR_RNDZ : MPFR_RNDN);
}

} // namespace tetra

#endif
