#ifndef TETRA_LIMIT_METHODS_HPP
#define TETRA_LIMIT_METHODS_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <tetra/complex.hpp>
#include <tetra/error.hpp>
#include <tetra/mp_real.hpp>

namespace tetra
{

struct PrecisionConfig {
    long mantissa_bits = 256;
    // Longest orbit any single call may compute.
    long max_iterations = 10'000'000;
    // Summands of the Newton formula.
    long series_terms = 1000;

    void validate() const
    {
        if (mantissa_bits < 53) {
            throw error(errc::domain, "mantissa_bits must be at least 53");
        }
        if (max_iterations < 1) {
            throw error(errc::domain, "max_iterations must be at least 1");
        }
        if (series_terms < 1) {
            throw error(errc::domain, "series_terms must be at least 1");
        }
    }
};

enum class LimitMethod { levy, newton, fatou1, fatou2 };

inline std::string_view to_string(LimitMethod m)
{
    switch (m) {
        case LimitMethod::levy: return "levy";
        case LimitMethod::newton: return "newton";
        case LimitMethod::fatou1: return "fatou1";
        case LimitMethod::fatou2: return "fatou2";
    }
    return "unknown";
}

struct ConvergenceRecord {
    long n = 0;
    ComplexMp value;
    LimitMethod method = LimitMethod::levy;
    bool failed = false;
    errc error_code = errc::domain;
    std::string message;
    bool warning = false; // precision loss or cancellation flagged
};

// Value of a limit formula plus the diagnostics the caller may want to see.
struct LimitValue {
    ComplexMp value;
    bool warning = false;
    double lost_bits = 0; // estimated bits eaten by cancellation
};

namespace detail
{

inline ComplexMp at_bits(const ComplexMp &z, long bits) { return {MpReal(z.re, bits), MpReal(z.im, bits)}; }

inline ComplexMp to_mp(std::complex<double> z, long bits) { return {MpReal(z.real(), bits), MpReal(z.imag(), bits)}; }

inline void check_n(long n, const PrecisionConfig &cfg)
{
    if (n < 0) {
        throw error(errc::domain, "iteration count must be non-negative");
    }
    if (n > cfg.max_iterations) {
        throw error(errc::domain, "iteration count " + std::to_string(n) + " exceeds max_iterations");
    }
}

// One step of h(z) = e^z - 1 with a real fast path.
inline void step_h(ComplexMp &z)
{
    if (z.im.is_zero()) {
        z.re = expm1(z.re);
    } else {
        z = expm1(z);
    }
}

// One step of h^{-1}(z) = log(1 + z).
inline void step_h_inverse(ComplexMp &z)
{
    if (z.im.is_zero()) {
        if (z.re <= -1.0) {
            throw error(errc::domain, "backward orbit reached the real half-line z <= -1");
        }
        z.re = log1p(z.re);
    } else {
        z = log1p(z);
    }
}

// Forward orbit that can be advanced incrementally.
class Orbit
{
public:
    Orbit(ComplexMp start, bool backward) : z_(std::move(start)), backward_(backward) {}

    const ComplexMp &advance_to(long n)
    {
        for (; n_ < n; ++n_) {
            if (backward_) {
                step_h_inverse(z_);
            } else {
                step_h(z_);
            }
            if (!is_finite(z_)) {
                throw overflow_error(n_ + 1, "orbit overflowed at step " + std::to_string(n_ + 1));
            }
        }
        return z_;
    }

    [[nodiscard]] long index() const { return n_; }

private:
    ComplexMp z_;
    long n_ = 0;
    bool backward_;
};

} // namespace detail

// tau(z) = e (z + 1) conjugates h(z) = e^z - 1 to f(z) = exp(z/e).
inline ComplexMp tau(const ComplexMp &z) { return (z + MpReal(1, z.re.precision())) * MpReal::const_e(z.re.precision()); }
inline ComplexMp tau_inverse(const ComplexMp &z)
{
    return z / MpReal::const_e(z.re.precision()) - MpReal(1, z.re.precision());
}

inline ComplexMp iterate_h(const ComplexMp &z, long n, const PrecisionConfig &cfg)
{
    cfg.validate();
    detail::check_n(n, cfg);
    detail::Orbit orbit(detail::at_bits(z, cfg.mantissa_bits), false);
    return orbit.advance_to(n);
}

inline ComplexMp iterate_h_inverse(const ComplexMp &z, long n, const PrecisionConfig &cfg)
{
    cfg.validate();
    detail::check_n(n, cfg);
    detail::Orbit orbit(detail::at_bits(z, cfg.mantissa_bits), true);
    return orbit.advance_to(n);
}

namespace detail
{

inline LimitValue levy_ratio(const ComplexMp &hz, const ComplexMp &hu, const ComplexMp &hu1, long bits)
{
    const ComplexMp num = hz - hu;
    const ComplexMp den = hu1 - hu;
    const MpReal den_abs = abs(den);
    const MpReal scale = abs(hu);
    if (den_abs.is_zero() || den_abs <= scale * ldexp(MpReal(4, bits), 1 - bits)) {
        throw error(errc::precision_loss, "Levy denominator vanished below the working precision");
    }
    LimitValue out;
    out.value = num / den;
    // Warn when less than half of the mantissa survives the subtraction.
    out.warning = den_abs < scale * ldexp(MpReal(1, bits), -bits / 2);
    if (!scale.is_zero()) {
        out.lost_bits = std::max(0.0, std::log2((scale / den_abs).to_double()));
    }
    return out;
}

} // namespace detail

// (h^n(z) - h^n(u)) / (h^{n+1}(u) - h^n(u)), in the h-plane.
inline LimitValue levy_abel(const ComplexMp &z, const ComplexMp &u, long n, const PrecisionConfig &cfg)
{
    cfg.validate();
    detail::check_n(n + 1, cfg);
    const long bits = cfg.mantissa_bits;
    detail::Orbit oz(detail::at_bits(z, bits), false);
    detail::Orbit ou(detail::at_bits(u, bits), false);
    const ComplexMp hz = oz.advance_to(n);
    const ComplexMp hu = ou.advance_to(n);
    const ComplexMp hu1 = ou.advance_to(n + 1);
    return detail::levy_ratio(hz, hu, hu1, bits);
}

// Partial sums of the Newton series
//   sum_{n<terms} C(t,n) sum_{m<=n} C(n,m) (-1)^{n-m} h^m(u)
// in the h-plane, one entry per count in `checkpoints` (ascending, each
// <= cfg.series_terms). The inner alternating sums are the forward
// differences of the orbit, computed in place at full precision.
inline std::vector<LimitValue> newton_partial_sums(const ComplexMp &u, const ComplexMp &t,
                                                   const std::vector<long> &checkpoints, const PrecisionConfig &cfg)
{
    cfg.validate();
    const long bits = cfg.mantissa_bits;
    const long terms = checkpoints.empty() ? 0 : checkpoints.back();
    if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) {
        throw error(errc::contract, "Newton checkpoints must be ascending");
    }
    if (terms > cfg.series_terms) {
        throw error(errc::domain, "requested more Newton terms than series_terms allows");
    }
    std::vector<LimitValue> out;
    if (terms <= 0) {
        for (std::size_t i = 0; i < checkpoints.size(); ++i) {
            out.push_back({ComplexMp(MpReal(0, bits), MpReal(0, bits)), false, 0});
        }
        return out;
    }
    detail::check_n(terms, cfg);

    std::vector<ComplexMp> diff;
    diff.reserve(static_cast<std::size_t>(terms));
    detail::Orbit orbit(detail::at_bits(u, bits), false);
    for (long m = 0; m < terms; ++m) {
        diff.push_back(orbit.advance_to(m));
    }
    MpReal orbit_scale(0, bits);
    for (const auto &a : diff) {
        orbit_scale = std::max(orbit_scale, abs(a));
    }

    const ComplexMp tt = detail::at_bits(t, bits);
    ComplexMp binom(MpReal(1, bits), MpReal(0, bits));
    ComplexMp sum(MpReal(0, bits), MpReal(0, bits));
    double max_log2_summand = -1e300;
    std::size_t next = 0;
    auto record = [&](long count) {
        while (next < checkpoints.size() && checkpoints[next] == count) {
            LimitValue v;
            v.value = sum;
            const MpReal mag = abs(sum);
            if (!mag.is_zero()) {
                v.lost_bits = std::max(0.0, max_log2_summand - std::log2(mag.to_double()));
            }
            v.warning = v.lost_bits > static_cast<double>(bits - 20);
            out.push_back(std::move(v));
            ++next;
        }
    };
    record(0);
    for (long n = 0; n < terms; ++n) {
        if (n > 0) {
            // After pass n, diff[n] holds the n-th forward difference at 0.
            for (long i = terms - 1; i >= n; --i) {
                diff[static_cast<std::size_t>(i)] -= diff[static_cast<std::size_t>(i - 1)];
            }
            binom = binom * (tt - MpReal(n - 1, bits)) / ComplexMp(MpReal(n, bits), MpReal(0, bits));
        }
        sum += binom * diff[static_cast<std::size_t>(n)];
        // The n-th inner sum adds terms of size up to 2^n * max|h^m(u)|.
        const MpReal b = abs(binom) * orbit_scale;
        if (!b.is_zero()) {
            max_log2_summand = std::max(max_log2_summand, std::log2(b.to_double()) + static_cast<double>(n));
        }
        record(n + 1);
    }
    return out;
}

inline LimitValue newton_superfunction(const ComplexMp &u, const ComplexMp &t, const PrecisionConfig &cfg)
{
    return newton_partial_sums(u, t, {cfg.series_terms}, cfg).front();
}

// Same series for f(z) = exp(z/e): tau commutes with the Newton sum.
inline LimitValue newton_superfunction_f(const ComplexMp &u, const ComplexMp &t, const PrecisionConfig &cfg)
{
    const long bits = cfg.mantissa_bits;
    LimitValue v = newton_superfunction(tau_inverse(detail::at_bits(u, bits)), t, cfg);
    v.value = tau(v.value);
    return v;
}

namespace detail
{

inline void check_petal(const ComplexMp &z, int petal)
{
    if (petal == 1) {
        if (!(z.re < 0.0)) {
            throw error(errc::domain, "petal 1 needs Re(z) < 0");
        }
    } else if (petal == 2) {
        if (!(z.re > 0.0)) {
            throw error(errc::domain, "petal 2 needs Re(z) > 0");
        }
    } else {
        throw error(errc::domain, "petal must be 1 or 2");
    }
}

// -(1/3) log n - 2/w -+ n for the n-th orbit point w.
inline ComplexMp fatou_value(const ComplexMp &w, int petal, long n, long bits)
{
    if (abs(w).is_zero()) {
        throw error(errc::singularity, "orbit reached the fixed point exactly");
    }
    const MpReal nn(n, bits);
    const MpReal head = (n > 0 ? -log(nn) / 3 : MpReal(0, bits)) + (petal == 1 ? -nn : nn);
    const ComplexMp two(MpReal(2, bits), MpReal(0, bits));
    return ComplexMp(head, MpReal(0, bits)) - two / w;
}

} // namespace detail

// Petal 1: -(1/3) log n - 2/h^n(z) - n, Re z < 0.
// Petal 2: -(1/3) log n - 2/h^{-n}(z) + n, Re z > 0.
inline ComplexMp fatou_abel(const ComplexMp &z, int petal, long n, const PrecisionConfig &cfg)
{
    cfg.validate();
    detail::check_petal(z, petal);
    detail::check_n(n, cfg);
    detail::Orbit orbit(detail::at_bits(z, cfg.mantissa_bits), petal == 2);
    return detail::fatou_value(orbit.advance_to(n), petal, n, cfg.mantissa_bits);
}

// Arguments of a convergence table, given in the plane of f(z) = exp(z/e)
// (the h-plane points are tau^{-1} of these).
//   levy:     z, u                   -> Levy ratio
//   fatou1/2: z [, reference, offset] -> alpha_n(z) [- alpha_n(reference) - offset]
//   newton:   z = start point, u = t  -> partial sum with n terms
struct TableArgs {
    ComplexMp z;
    ComplexMp u;
    std::optional<ComplexMp> reference;
    MpReal offset{0};
};

inline std::vector<ConvergenceRecord> convergence_table(LimitMethod method, const TableArgs &args,
                                                        const std::vector<long> &n_list, const PrecisionConfig &cfg)
{
    cfg.validate();
    if (!std::is_sorted(n_list.begin(), n_list.end())) {
        throw error(errc::contract, "n_list must be sorted ascending");
    }
    std::vector<ConvergenceRecord> rows;
    if (n_list.empty()) {
        return rows;
    }
    const long bits = cfg.mantissa_bits;
    auto fail = [&](ConvergenceRecord &r, const error &e) {
        r.failed = true;
        r.error_code = e.code();
        r.message = e.what();
    };

    if (method == LimitMethod::newton) {
        PrecisionConfig c = cfg;
        c.series_terms = std::max(c.series_terms, n_list.back());
        std::vector<LimitValue> sums;
        std::optional<error> err;
        try {
            sums = newton_partial_sums(tau_inverse(detail::at_bits(args.z, bits)), args.u, n_list, c);
        } catch (const error &e) {
            err = e;
        }
        for (std::size_t i = 0; i < n_list.size(); ++i) {
            ConvergenceRecord r;
            r.n = n_list[i];
            r.method = method;
            if (err) {
                fail(r, *err);
            } else {
                r.value = tau(sums[i].value);
                r.warning = sums[i].warning;
            }
            rows.push_back(std::move(r));
        }
        return rows;
    }

    const int petal = method == LimitMethod::fatou2 ? 2 : 1;
    const bool backward = method == LimitMethod::fatou2;
    const ComplexMp hz = tau_inverse(detail::at_bits(args.z, bits));
    std::optional<ComplexMp> href;
    if (method == LimitMethod::levy) {
        href = tau_inverse(detail::at_bits(args.u, bits));
    } else if (args.reference) {
        href = tau_inverse(detail::at_bits(*args.reference, bits));
    }

    std::optional<error> setup_error;
    try {
        if (method != LimitMethod::levy) {
            detail::check_petal(hz, petal);
            if (href) {
                detail::check_petal(*href, petal);
            }
        }
    } catch (const error &e) {
        setup_error = e;
    }

    detail::Orbit oz(hz, backward);
    std::optional<detail::Orbit> oref;
    if (href) {
        oref.emplace(*href, backward);
    }
    std::optional<error> sticky; // orbit failures persist for larger n
    for (long n : n_list) {
        ConvergenceRecord r;
        r.n = n;
        r.method = method;
        if (setup_error || sticky) {
            fail(r, setup_error ? *setup_error : *sticky);
            rows.push_back(std::move(r));
            continue;
        }
        try {
            detail::check_n(n + 1, cfg);
            if (method == LimitMethod::levy) {
                const ComplexMp a = oz.advance_to(n);
                const ComplexMp b = oref->advance_to(n);
                const ComplexMp b1 = oref->advance_to(n + 1);
                const LimitValue v = detail::levy_ratio(a, b, b1, bits);
                r.value = v.value;
                r.warning = v.warning;
            } else {
                ComplexMp v = detail::fatou_value(oz.advance_to(n), petal, n, bits);
                if (oref) {
                    v = v - detail::fatou_value(oref->advance_to(n), petal, n, bits) -
                        ComplexMp(MpReal(args.offset, bits), MpReal(0, bits));
                }
                r.value = v;
            }
        } catch (const overflow_error &e) {
            sticky = e;
            fail(r, e);
        } catch (const error &e) {
            fail(r, e);
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace tetra

#endif
