#ifndef TETRA_MP_REAL_HPP
#define TETRA_MP_REAL_HPP

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

#include <mpfr.h>

#include <tetra/error.hpp>
#include <tetra/rational.hpp>

namespace tetra
{

namespace detail
{
inline mpfr_prec_t &default_precision_slot()
{
    thread_local mpfr_prec_t bits = 256;
    return bits;
}
} // namespace detail

// Precision used for values created without an explicit precision
// (constants, literals, default construction). Per thread.
inline long default_precision() { return static_cast<long>(detail::default_precision_slot()); }

class precision_scope
{
public:
    explicit precision_scope(long bits) : saved_(detail::default_precision_slot())
    {
        if (bits < MPFR_PREC_MIN || bits > MPFR_PREC_MAX) {
            throw error(errc::domain, "unsupported precision: " + std::to_string(bits) + " bits");
        }
        detail::default_precision_slot() = static_cast<mpfr_prec_t>(bits);
    }
    ~precision_scope() { detail::default_precision_slot() = saved_; }
    precision_scope(const precision_scope &) = delete;
    precision_scope &operator=(const precision_scope &) = delete;

private:
    mpfr_prec_t saved_;
};

// MPFR value with its own precision. Binary operations round to the larger
// of the two operand precisions; everything rounds to nearest.
class MpReal
{
public:
    MpReal() : MpReal(0.0) {}

    MpReal(double d, long bits = default_precision())
    {
        mpfr_init2(v_, static_cast<mpfr_prec_t>(bits));
        mpfr_set_d(v_, d, MPFR_RNDN);
    }

    template <class I, std::enable_if_t<std::is_integral_v<I>, int> = 0>
    MpReal(I i, long bits = default_precision())
    {
        mpfr_init2(v_, static_cast<mpfr_prec_t>(bits));
        if constexpr (std::is_signed_v<I>) {
            mpfr_set_si(v_, static_cast<long>(i), MPFR_RNDN);
        } else {
            mpfr_set_ui(v_, static_cast<unsigned long>(i), MPFR_RNDN);
        }
    }

    MpReal(const Rational &q, long bits = default_precision())
    {
        mpfr_init2(v_, static_cast<mpfr_prec_t>(bits));
        mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
    }

    static MpReal from_string(std::string_view s, long bits = default_precision())
    {
        MpReal r(0, bits);
        const std::string str(s);
        if (mpfr_set_str(r.v_, str.c_str(), 10, MPFR_RNDN) != 0) {
            throw error(errc::domain, "not a decimal number: '" + str + "'");
        }
        return r;
    }

    static MpReal with_precision(long bits) { return MpReal(0, bits); }

    MpReal(const MpReal &o)
    {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }

    // Copy rounded to a different precision.
    MpReal(const MpReal &o, long bits)
    {
        mpfr_init2(v_, static_cast<mpfr_prec_t>(bits));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }

    MpReal(MpReal &&o) noexcept
    {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, o.v_);
    }

    MpReal &operator=(const MpReal &o)
    {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }

    MpReal &operator=(MpReal &&o) noexcept
    {
        mpfr_swap(v_, o.v_);
        return *this;
    }

    ~MpReal() { mpfr_clear(v_); }

    [[nodiscard]] long precision() const { return static_cast<long>(mpfr_get_prec(v_)); }
    [[nodiscard]] double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    [[nodiscard]] bool is_finite() const { return mpfr_number_p(v_) != 0; }
    [[nodiscard]] bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    [[nodiscard]] int sign() const { return mpfr_sgn(v_); }
    // Binary exponent e with value = m * 2^e, 0.5 <= |m| < 1.
    [[nodiscard]] long exponent() const { return static_cast<long>(mpfr_get_exp(v_)); }

    mpfr_ptr raw() { return v_; }
    [[nodiscard]] mpfr_srcptr raw() const { return v_; }

    // Scientific notation with the given number of significant digits.
    [[nodiscard]] std::string to_string(int digits) const
    {
        if (!is_finite()) {
            return mpfr_nan_p(v_) ? "nan" : (sign() > 0 ? "inf" : "-inf");
        }
        char *buf = nullptr;
        mpfr_asprintf(&buf, "%.*Re", std::max(digits - 1, 0), v_);
        std::string s(buf);
        mpfr_free_str(buf);
        return s;
    }

    // Fixed notation with the given number of digits after the point.
    [[nodiscard]] std::string to_fixed(int decimals, mpfr_rnd_t rnd = MPFR_RNDN) const
    {
        char *buf = nullptr;
        const char fmt_n[] = "%.*RNf";
        const char fmt_z[] = "%.*RZf";
        mpfr_asprintf(&buf, rnd == MPFR_RNDZ ? fmt_z : fmt_n, decimals, v_);
        std::string s(buf);
        mpfr_free_str(buf);
        return s;
    }

    MpReal operator-() const
    {
        MpReal r(*this);
        mpfr_neg(r.v_, r.v_, MPFR_RNDN);
        return r;
    }

#define TETRA_MP_BINOP(op, fn)                                                                                         \
    friend MpReal operator op(const MpReal &a, const MpReal &b)                                                        \
    {                                                                                                                  \
        MpReal r = with_precision(std::max(a.precision(), b.precision()));                                             \
        fn(r.v_, a.v_, b.v_, MPFR_RNDN);                                                                               \
        return r;                                                                                                      \
    }                                                                                                                  \
    friend MpReal operator op(const MpReal &a, double b) { return a op MpReal(b, a.precision()); }                     \
    friend MpReal operator op(double a, const MpReal &b) { return MpReal(a, b.precision()) op b; }                     \
    friend MpReal operator op(const MpReal &a, long b) { return a op MpReal(b, a.precision()); }                       \
    friend MpReal operator op(long a, const MpReal &b) { return MpReal(a, b.precision()) op b; }                       \
    friend MpReal operator op(const MpReal &a, int b) { return a op MpReal(b, a.precision()); }                        \
    friend MpReal operator op(int a, const MpReal &b) { return MpReal(a, b.precision()) op b; }                        \
    MpReal &operator op##=(const MpReal & b) { return *this = *this op b; }                                            \
    MpReal &operator op##=(double b) { return *this = *this op b; }                                                    \
    MpReal &operator op##=(long b) { return *this = *this op b; }                                                      \
    MpReal &operator op##=(int b) { return *this = *this op b; }

    TETRA_MP_BINOP(+, mpfr_add)
    TETRA_MP_BINOP(-, mpfr_sub)
    TETRA_MP_BINOP(*, mpfr_mul)
    TETRA_MP_BINOP(/, mpfr_div)
#undef TETRA_MP_BINOP

    friend bool operator==(const MpReal &a, const MpReal &b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator<(const MpReal &a, const MpReal &b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const MpReal &a, const MpReal &b) { return b < a; }
    friend bool operator<=(const MpReal &a, const MpReal &b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const MpReal &a, const MpReal &b) { return b <= a; }
    friend bool operator<(const MpReal &a, double b) { return mpfr_cmp_d(a.v_, b) < 0; }
    friend bool operator>(const MpReal &a, double b) { return mpfr_cmp_d(a.v_, b) > 0; }
    friend bool operator<=(const MpReal &a, double b) { return mpfr_cmp_d(a.v_, b) <= 0; }
    friend bool operator>=(const MpReal &a, double b) { return mpfr_cmp_d(a.v_, b) >= 0; }
    friend bool operator==(const MpReal &a, double b) { return mpfr_cmp_d(a.v_, b) == 0; }

#define TETRA_MP_UNARY(name, fn)                                                                                       \
    friend MpReal name(const MpReal &a)                                                                                \
    {                                                                                                                  \
        MpReal r = with_precision(a.precision());                                                                      \
        fn(r.v_, a.v_, MPFR_RNDN);                                                                                     \
        return r;                                                                                                      \
    }

    TETRA_MP_UNARY(exp, mpfr_exp)
    TETRA_MP_UNARY(expm1, mpfr_expm1)
    TETRA_MP_UNARY(log, mpfr_log)
    TETRA_MP_UNARY(log1p, mpfr_log1p)
    TETRA_MP_UNARY(sin, mpfr_sin)
    TETRA_MP_UNARY(cos, mpfr_cos)
    TETRA_MP_UNARY(sqrt, mpfr_sqrt)
    TETRA_MP_UNARY(abs, mpfr_abs)
#undef TETRA_MP_UNARY

    friend MpReal floor(const MpReal &a)
    {
        MpReal r = with_precision(a.precision());
        mpfr_floor(r.v_, a.v_);
        return r;
    }

    friend MpReal atan2(const MpReal &y, const MpReal &x)
    {
        MpReal r = with_precision(std::max(y.precision(), x.precision()));
        mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN);
        return r;
    }

    friend MpReal hypot(const MpReal &a, const MpReal &b)
    {
        MpReal r = with_precision(std::max(a.precision(), b.precision()));
        mpfr_hypot(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }

    friend MpReal ldexp(const MpReal &a, long e)
    {
        MpReal r = with_precision(a.precision());
        mpfr_mul_2si(r.v_, a.v_, e, MPFR_RNDN);
        return r;
    }

    static MpReal const_pi(long bits = default_precision())
    {
        MpReal r = with_precision(bits);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }

    static MpReal const_log2(long bits = default_precision())
    {
        MpReal r = with_precision(bits);
        mpfr_const_log2(r.v_, MPFR_RNDN);
        return r;
    }

    static MpReal const_e(long bits = default_precision()) { return exp(MpReal(1, bits)); }

private:
    mpfr_t v_;
};

// Uniform access to double and MpReal for the generic evaluators. The
// "like" argument carries the precision for MpReal and is ignored for double.
template <class R>
struct real_traits;

template <>
struct real_traits<double> {
    static double from_rational(const Rational &q, const double &) { return q.get_d(); }
    static double from_double(double d, const double &) { return d; }
    static double e(const double &) { return 2.718281828459045235360287; }
    static double pi(const double &) { return 3.141592653589793238462643; }
    static double ln2(const double &) { return 0.6931471805599453094172321; }
    static double to_double(double d) { return d; }
    static long bits(const double &) { return 53; }
    static bool is_finite(double d) { return std::isfinite(d); }
    // Smallest relative spacing: 2^{1-bits}.
    static double epsilon(const double &) { return 0x1p-52; }
};

template <>
struct real_traits<MpReal> {
    static MpReal from_rational(const Rational &q, const MpReal &like) { return MpReal(q, like.precision()); }
    static MpReal from_double(double d, const MpReal &like) { return MpReal(d, like.precision()); }
    static MpReal e(const MpReal &like) { return MpReal::const_e(like.precision()); }
    static MpReal pi(const MpReal &like) { return MpReal::const_pi(like.precision()); }
    static MpReal ln2(const MpReal &like) { return MpReal::const_log2(like.precision()); }
    static double to_double(const MpReal &x) { return x.to_double(); }
    static long bits(const MpReal &like) { return like.precision(); }
    static bool is_finite(const MpReal &x) { return x.is_finite(); }
    static MpReal epsilon(const MpReal &like) { return ldexp(MpReal(1, like.precision()), 1 - like.precision()); }
};

} // namespace tetra

#endif
