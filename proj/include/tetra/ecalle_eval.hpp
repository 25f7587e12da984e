#ifndef TETRA_ECALLE_EVAL_HPP
#define TETRA_ECALLE_EVAL_HPP

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <tetra/complex.hpp>
#include <tetra/error.hpp>
#include <tetra/limit_methods.hpp>
#include <tetra/mp_real.hpp>
#include <tetra/series_engine.hpp>

namespace tetra
{

// Truncation orders and region thresholds of the evaluators. The defaults
// give about 1e-16 relative accuracy in double precision; paper_settings()
// reproduces the coarser choices quoted in the literature.
struct EvalContext {
    PrecisionConfig precision{53, 10'000'000, 1000};
    long abel_tail_terms = 20;        // tail of A^(1)
    long abel2_tail_terms = 21;       // tail of A^(2)
    long superexp_terms = 15;         // number of log-polynomials M
    double abel_disk_radius = 0.3;    // |zeta| below which the expansion is used
    double superexp_re_threshold = 8; // |Re z| beyond which the asymptotic is used
    long max_recursion = 200;

    void validate() const
    {
        precision.validate();
        if (abel_tail_terms < 1 || abel2_tail_terms < 1 || superexp_terms < 1) {
            throw error(errc::domain, "truncation orders must be at least 1");
        }
        if (!(abel_disk_radius > 0) || !(superexp_re_threshold > 0)) {
            throw error(errc::domain, "region thresholds must be positive");
        }
        if (max_recursion < 1) {
            throw error(errc::domain, "max_recursion must be at least 1");
        }
    }

    // Settings sized for the given mantissa length; anything up to 53 bits
    // runs in hardware double.
    static EvalContext for_precision(long bits)
    {
        EvalContext c;
        c.precision.mantissa_bits = std::max(bits, 53L);
        if (bits <= 53) {
            return c;
        }
        struct Tier {
            long bits, abel_terms;
            double radius;
            long m;
            double threshold;
        };
        static constexpr Tier tiers[] = {
            {64, 24, 0.25, 16, 10},   {128, 40, 0.08, 30, 40},   {256, 60, 0.025, 50, 120},
            {512, 90, 0.006, 80, 400}, {1024, 140, 0.0012, 120, 1500},
        };
        const Tier *t = &tiers[std::size(tiers) - 1];
        for (const auto &tier : tiers) {
            if (bits <= tier.bits) {
                t = &tier;
                break;
            }
        }
        c.abel_tail_terms = t->abel_terms;
        c.abel2_tail_terms = t->abel_terms + 1;
        c.abel_disk_radius = t->radius;
        c.superexp_terms = t->m;
        c.superexp_re_threshold = t->threshold;
        c.max_recursion = std::max(200L, static_cast<long>(4 * t->threshold + 4 / t->radius));
        return c;
    }

    // N = 15 / 16 tail terms, radius 1/2, M = 9 polynomials, threshold 4.
    static EvalContext paper_settings()
    {
        EvalContext c;
        c.abel_tail_terms = 15;
        c.abel2_tail_terms = 16;
        c.superexp_terms = 9;
        c.abel_disk_radius = 0.5;
        c.superexp_re_threshold = 4;
        return c;
    }
};

// Which logarithm the asymptotic of the super-exponential uses:
// minus -> t = -log(z), the petal of F1 / A1 (Re z -> +inf);
// plus  -> t = -log(-z), the petal of F3 / A3 (Re z -> -inf).
enum class BranchSign { minus, plus };

// Side from which a real argument on a cut is approached: z + i0 or z - i0.
enum class CutSide { none, above, below };

struct CalibrationConstants {
    MpReal x1;
    MpReal x3;
    MpReal a1_norm; // A^(1)(1)
    MpReal a3_norm; // A^(2)(3)
    ComplexMp period_t1;
    long bits = 0;
    int steps_x1 = 0;
    int steps_x3 = 0;
};

namespace detail
{

inline std::shared_ptr<const SuperExpExpansion> cached_superexp(std::size_t M)
{
    static std::mutex mu;
    static std::map<std::size_t, std::shared_ptr<const SuperExpExpansion>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.lower_bound(M);
    if (it != cache.end()) {
        return it->second; // a longer expansion serves any shorter request
    }
    auto p = std::make_shared<const SuperExpExpansion>(superexp_polynomials(M));
    cache.emplace(M, p);
    return p;
}

inline std::shared_ptr<const AbelExpansion> cached_abel(std::size_t N)
{
    static std::mutex mu;
    static std::map<std::size_t, std::shared_ptr<const AbelExpansion>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.lower_bound(N);
    if (it != cache.end()) {
        return it->second;
    }
    auto p = std::make_shared<const AbelExpansion>(abel_expansion(exp_minus_one_series(N + 3), N));
    cache.emplace(N, p);
    return p;
}

inline CutSide flipped(CutSide s)
{
    return s == CutSide::above ? CutSide::below : (s == CutSide::below ? CutSide::above : CutSide::none);
}

} // namespace detail

// Double or MpReal evaluators sharing one implementation. Construction
// converts the exact coefficients once; evaluation is then pure and may run
// concurrently.
template <class R>
class Evaluator
{
public:
    using C = Complex<R>;
    using traits = real_traits<R>;

    Evaluator(const EvalContext &ctx, const CalibrationConstants &cc) : ctx_(ctx)
    {
        ctx_.validate();
        like_ = make_like();
        e_ = traits::e(like_);
        pi_ = traits::pi(like_);
        ln2_ = traits::ln2(like_);
        zero_ = traits::from_double(0.0, like_);
        one_ = traits::from_double(1.0, like_);

        const auto abel = detail::cached_abel(static_cast<std::size_t>(std::max(ctx_.abel_tail_terms,
                                                                                 ctx_.abel2_tail_terms)));
        auto load_tail = [&](long n) {
            std::vector<R> c;
            c.reserve(static_cast<std::size_t>(n));
            for (long k = 1; k <= n; ++k) {
                // c_k = (-1)^k v_k: the tail in zeta = -x.
                const Rational &v = abel->tail[static_cast<std::size_t>(k)];
                c.push_back(traits::from_rational(k % 2 == 0 ? v : Rational(-v), like_));
            }
            return c;
        };
        tail1_ = load_tail(ctx_.abel_tail_terms);
        tail2_ = load_tail(ctx_.abel2_tail_terms);
        pole_ = traits::from_rational(-abel->pole_coefficient, like_); // 2 / zeta
        log_ = traits::from_rational(abel->log_coefficient, like_);

        const auto sx = detail::cached_superexp(static_cast<std::size_t>(ctx_.superexp_terms));
        for (long m = 1; m <= ctx_.superexp_terms; ++m) {
            std::vector<R> p;
            for (const auto &q : sx->polynomials[static_cast<std::size_t>(m)].coefficients()) {
                p.push_back(traits::from_rational(q, like_));
            }
            poly_.push_back(std::move(p));
        }

        x1_ = convert(cc.x1);
        x3_ = convert(cc.x3);
        a1_ = convert(cc.a1_norm);
        a3_ = convert(cc.a3_norm);
    }

    [[nodiscard]] const EvalContext &context() const { return ctx_; }
    [[nodiscard]] C make(double re, double im = 0) const
    {
        return {traits::from_double(re, like_), traits::from_double(im, like_)};
    }
    [[nodiscard]] R e() const { return e_; }

    // e (1 - (2/z)(1 + sum_{m<=M} P_m(t) / (3z)^m)) without any recursion.
    [[nodiscard]] C superexp_asymptotic(const C &z, BranchSign branch) const
    {
        if (is_zero(z)) {
            throw error(errc::singularity, "asymptotic super-exponential is singular at 0");
        }
        const C t = -log(branch == BranchSign::minus ? z : -z);
        const C q = one_c() / (C(R(3 * one_)) * z);
        C acc = poly_at(poly_.size() - 1, t);
        for (std::size_t m = poly_.size() - 1; m-- > 0;) {
            acc = acc * q + poly_at(m, t);
        }
        const C bracket = one_c() + acc * q;
        return C(e_) * (one_c() - C(R(2 * one_)) * bracket / z);
    }

    // The asymptotic continued by the functional equation to all of the
    // respective domain: minus moves right and applies w -> e log w, plus
    // moves left and applies w -> exp(w / e).
    [[nodiscard]] C superexp_tilde(const C &z, BranchSign branch, CutSide side = CutSide::none) const
    {
        const double thr = ctx_.superexp_re_threshold;
        const double re = traits::to_double(z.re);
        if (!std::isfinite(re) || !std::isfinite(traits::to_double(z.im))) {
            throw error(errc::domain, "non-finite argument");
        }
        if (branch == BranchSign::minus) {
            const long k = steps_needed(thr - re);
            C w = superexp_asymptotic(z + C(R(k * one_)), branch);
            const bool real_input = is_real(z);
            for (long i = 0; i < k; ++i) {
                if (is_zero(w)) {
                    throw error(errc::singularity, "super-exponential has a logarithmic singularity here");
                }
                if (!real_input && is_real(w) && w.re < zero_) {
                    throw error(errc::branch, "recursion reached the negative real axis at step " + std::to_string(i));
                }
                w = C(e_) * log_side(w, side);
            }
            return w;
        }
        const long k = steps_needed(thr + re);
        C w = superexp_asymptotic(z - C(R(k * one_)), branch);
        for (long i = 0; i < k; ++i) {
            w = exp(w / C(e_));
            if (!is_finite(w)) {
                throw overflow_error(i + 1, "super-exponential overflowed after " + std::to_string(i + 1) +
                                                " exponentiations");
            }
        }
        return w;
    }

    // Tetrational: F1(0) = 1, cut on the real half-line z <= -2.
    [[nodiscard]] C F1(const C &z, CutSide side = CutSide::none) const
    {
        return superexp_tilde(z + C(x1_), BranchSign::minus, side);
    }

    // Entire super-exponential with F3(0) = 3.
    [[nodiscard]] C F3(const C &z) const { return superexp_tilde(z + C(x3_), BranchSign::plus); }

    // Regular Abel function of the attracting petal; cut on real z >= e.
    [[nodiscard]] C abel1(const C &z0, CutSide side = CutSide::none) const
    {
        const R r = traits::from_double(ctx_.abel_disk_radius, like_);
        C z = z0;
        if (is_real(z) && z.re >= e_) {
            if (z.re == e_) {
                throw error(errc::singularity, "Abel function is singular at the fixed point e");
            }
            if (side == CutSide::none) {
                throw error(errc::cut, "argument on the cut [e, +inf) of A1; choose a cut side");
            }
            // Along the cut the inverse step z -> e log z keeps the side and
            // walks down to e: A1(z) = A1(e log z) + 1.
            for (long k = 0;; ++k) {
                const C zeta = (C(e_) - z) / C(e_);
                if (abs(zeta) < r) {
                    // z + i0 gives zeta - i0.
                    return expansion(zeta, log_side(zeta, detail::flipped(side)), tail1_) + C(R(k * one_));
                }
                if (k >= ctx_.max_recursion) {
                    throw nonconvergence_error(traits::to_double(abs(zeta)),
                                               "A1 recursion along the cut did not reach the expansion disk");
                }
                using std::log;
                z = C(e_ * log(z.re), zero_);
            }
        }
        long k = 0;
        for (;; ++k) {
            const C zeta = (C(e_) - z) / C(e_);
            const R dist = abs(zeta);
            if (dist < r) {
                return expansion(zeta, log(zeta), tail1_) - C(R(k * one_));
            }
            if (k >= ctx_.max_recursion) {
                throw nonconvergence_error(traits::to_double(dist), "A1 recursion did not reach the expansion disk");
            }
            z = exp(z / C(e_));
            if (!is_finite(z)) {
                throw overflow_error(k + 1, "A1 recursion overflowed");
            }
        }
    }

    // Regular Abel function of the repelling petal; cut on real z <= e.
    [[nodiscard]] C abel2(const C &z0, CutSide side = CutSide::none) const
    {
        const R r = traits::from_double(ctx_.abel_disk_radius, like_);
        C z = z0;
        const bool on_cut = is_real(z) && z.re <= e_;
        if (on_cut) {
            if (z.re == e_) {
                throw error(errc::singularity, "Abel function is singular at the fixed point e");
            }
            if (side == CutSide::none) {
                throw error(errc::cut, "argument on the cut (-inf, e] of A3; choose a cut side");
            }
        }
        long k = 0;
        for (;; ++k) {
            const C zeta = (C(e_) - z) / C(e_);
            const R dist = abs(zeta);
            if (dist < r) {
                const C mz = -zeta;
                return expansion(zeta, log_side(mz, on_cut ? side : CutSide::none), tail2_) + C(R(k * one_));
            }
            if (k >= ctx_.max_recursion) {
                throw nonconvergence_error(traits::to_double(dist), "A3 recursion did not reach the expansion disk");
            }
            if (is_zero(z)) {
                throw error(errc::singularity, "A3 recursion hit log(0)");
            }
            z = C(e_) * log_side(z, on_cut ? side : CutSide::none);
        }
    }

    [[nodiscard]] C A1(const C &z, CutSide side = CutSide::none) const { return abel1(z, side) - C(a1_); }
    [[nodiscard]] C A3(const C &z, CutSide side = CutSide::none) const { return abel2(z, side) - C(a3_); }

    // exp_b(z) = exp(z / e).
    [[nodiscard]] C exp_b(const C &z) const { return exp(z / C(e_)); }

    // Principal log, except that an exactly real negative argument takes
    // the side given: above -> +i pi, below -> -i pi, none -> cut error.
    [[nodiscard]] C log_side(const C &w, CutSide side) const
    {
        if (is_real(w) && w.re < zero_) {
            using std::log;
            const R m = log(-w.re);
            switch (side) {
                case CutSide::above: return {m, pi_};
                case CutSide::below: return {m, -pi_};
                case CutSide::none: break;
            }
            throw error(errc::cut, "logarithm of a negative real number; choose a cut side");
        }
        return log(w);
    }

    [[nodiscard]] static bool is_real(const C &z) { return z.im == real_traits<R>::from_double(0.0, z.im); }

private:
    static bool is_zero(const C &z)
    {
        const R zero = real_traits<R>::from_double(0.0, z.re);
        return z.re == zero && z.im == zero;
    }

    R make_like() const
    {
        if constexpr (std::is_same_v<R, double>) {
            return 0.0;
        } else {
            return MpReal(0, ctx_.precision.mantissa_bits);
        }
    }

    R convert(const MpReal &x) const
    {
        if constexpr (std::is_same_v<R, double>) {
            return x.to_double();
        } else {
            return MpReal(x, ctx_.precision.mantissa_bits);
        }
    }

    C one_c() const { return C(one_); }

    long steps_needed(double gap) const
    {
        // smallest k >= 0 with k > gap
        long k = 0;
        if (gap >= 0) {
            const double f = std::floor(gap) + 1;
            if (f > static_cast<double>(ctx_.max_recursion)) {
                throw nonconvergence_error(gap, "super-exponential needs more than max_recursion steps");
            }
            k = static_cast<long>(f);
        }
        return k;
    }

    C poly_at(std::size_t m, const C &t) const
    {
        const auto &p = poly_[m];
        C acc(p.back());
        for (std::size_t i = p.size() - 1; i-- > 0;) {
            acc = acc * t + C(p[i]);
        }
        return acc;
    }

    C expansion(const C &zeta, const C &log_zeta, const std::vector<R> &tail) const
    {
        C acc(zero_);
        for (std::size_t n = tail.size(); n-- > 0;) {
            acc = (acc + C(tail[n])) * zeta;
        }
        return log_zeta * C(log_) + C(pole_) / zeta + acc;
    }

    EvalContext ctx_;
    R like_{};
    R e_{}, pi_{}, ln2_{}, zero_{}, one_{};
    R pole_{}, log_{};
    std::vector<R> tail1_, tail2_;
    std::vector<std::vector<R>> poly_; // poly_[m-1] = P_m, ascending powers of t
    R x1_{}, x3_{}, a1_{}, a3_{};
};

struct CalibrationSeeds {
    double x1 = 2.798248154231454;
    double x3 = -20.28740458994004;
};

namespace detail
{

// Secant iteration for Re F(x) = target started at seed, seed + 1e-3.
// Stops when |dx| drops below one ulp, or when the residual has reached the
// evaluation noise (tiny and no longer decreasing); leaving
// [seed - 1, seed + 1] or running 60 steps is a calibration failure.
template <class F>
MpReal secant(F &&f, double target, double seed, long bits, int &steps)
{
    const MpReal lo(seed - 1, bits);
    const MpReal hi(seed + 1, bits);
    MpReal a(seed, bits);
    MpReal b(seed + 1e-3, bits);
    MpReal fa = f(a) - target;
    MpReal fb = f(b) - target;
    const MpReal eps = real_traits<MpReal>::epsilon(a);
    const MpReal noise = sqrt(eps);
    for (steps = 1; steps <= 60; ++steps) {
        const MpReal den = fb - fa;
        if (den.is_zero()) {
            if (abs(fb) <= noise) {
                return b;
            }
            throw error(errc::calibration, "secant step degenerated");
        }
        const MpReal dx = fb * (b - a) / den;
        a = b;
        fa = fb;
        b = b - dx;
        if (b < lo || b > hi || !b.is_finite()) {
            throw error(errc::calibration, "secant iteration left the seed interval");
        }
        if (abs(dx) <= eps * abs(b)) {
            return b;
        }
        fb = f(b) - target;
        if (abs(fa) <= noise && abs(fb) >= abs(fa)) {
            return a;
        }
    }
    throw error(errc::calibration, "secant iteration did not converge in 60 steps");
}

} // namespace detail

// Calibration runs at max(bits, 128) and rounds the constants to bits.
inline CalibrationConstants calibrate(const EvalContext &ctx, CalibrationSeeds seeds = {})
{
    ctx.validate();
    const long bits = ctx.precision.mantissa_bits;
    const long work = std::max(bits, 128L);
    const EvalContext wctx = EvalContext::for_precision(work);
    precision_scope scope(work);

    CalibrationConstants boot;
    boot.x1 = boot.x3 = boot.a1_norm = boot.a3_norm = MpReal(0, work);
    const Evaluator<MpReal> ev(wctx, boot);

    auto real_part = [&](BranchSign b) {
        return [&ev, b, work](const MpReal &x) {
            try {
                return ev.superexp_tilde(ComplexMp(x, MpReal(0, work)), b).re;
            } catch (const error &e) {
                throw error(errc::calibration, std::string("calibration evaluation failed: ") + e.what());
            }
        };
    };

    CalibrationConstants out;
    out.x1 = detail::secant(real_part(BranchSign::minus), 1.0, seeds.x1, work, out.steps_x1);
    out.x3 = detail::secant(real_part(BranchSign::plus), 3.0, seeds.x3, work, out.steps_x3);
    out.a1_norm = ev.abel1(ComplexMp(MpReal(1, work), MpReal(0, work))).re;
    out.a3_norm = ev.abel2(ComplexMp(MpReal(3, work), MpReal(0, work))).re;

    out.x1 = MpReal(out.x1, bits);
    out.x3 = MpReal(out.x3, bits);
    out.a1_norm = MpReal(out.a1_norm, bits);
    out.a3_norm = MpReal(out.a3_norm, bits);
    out.period_t1 = ComplexMp(MpReal(0, bits), MpReal(2, bits) * MpReal::const_pi(bits) * MpReal::const_e(bits));
    out.bits = bits;
    return out;
}

// Constants calibrated once per process at 128 bits.
inline const CalibrationConstants &default_constants()
{
    static const CalibrationConstants cc = calibrate(EvalContext::for_precision(128));
    return cc;
}

// Convenience entry points at double precision with the default constants.
inline std::complex<double> abel1(std::complex<double> z, const EvalContext &ctx = {}, CutSide side = CutSide::none)
{
    const Evaluator<double> ev(ctx, default_constants());
    return to_std(ev.abel1(ComplexD(z.real(), z.imag()), side));
}

inline std::complex<double> abel2(std::complex<double> z, const EvalContext &ctx = {}, CutSide side = CutSide::none)
{
    const Evaluator<double> ev(ctx, default_constants());
    return to_std(ev.abel2(ComplexD(z.real(), z.imag()), side));
}

inline std::complex<double> F1(std::complex<double> z, const EvalContext &ctx = {}, CutSide side = CutSide::none)
{
    const Evaluator<double> ev(ctx, default_constants());
    return to_std(ev.F1(ComplexD(z.real(), z.imag()), side));
}

inline std::complex<double> F3(std::complex<double> z, const EvalContext &ctx = {})
{
    const Evaluator<double> ev(ctx, default_constants());
    return to_std(ev.F3(ComplexD(z.real(), z.imag())));
}

inline std::complex<double> A1(std::complex<double> z, const EvalContext &ctx = {}, CutSide side = CutSide::none)
{
    const Evaluator<double> ev(ctx, default_constants());
    return to_std(ev.A1(ComplexD(z.real(), z.imag()), side));
}

inline std::complex<double> A3(std::complex<double> z, const EvalContext &ctx = {}, CutSide side = CutSide::none)
{
    const Evaluator<double> ev(ctx, default_constants());
    return to_std(ev.A3(ComplexD(z.real(), z.imag()), side));
}

} // namespace tetra

#endif
