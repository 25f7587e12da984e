#ifndef TETRA_SERIES_ENGINE_HPP
#define TETRA_SERIES_ENGINE_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <tetra/error.hpp>
#include <tetra/polynomial.hpp>
#include <tetra/power_series.hpp>
#include <tetra/rational.hpp>

namespace tetra
{

// alpha(x) = pole/x + log_coefficient * log(+-x) + constant + tail(x).
// The sign inside the log is left to the evaluator that picks the petal.
struct AbelExpansion {
    Rational pole_coefficient;
    Rational log_coefficient;
    Rational constant;
    PowerSeries tail; // index k >= 1; tail[0] == 0
    std::size_t truncation_order = 0;

    // Coefficients of alpha'(x), index i <-> x^{i-2}, as obtained by termwise
    // differentiation of the stored pieces.
    [[nodiscard]] std::vector<Rational> derivative_laurent() const
    {
        std::vector<Rational> d(truncation_order + 2);
        d[0] = -pole_coefficient;
        d[1] = log_coefficient;
        for (std::size_t k = 1; k <= truncation_order; ++k) {
            d[k + 1] = tail[k] * static_cast<unsigned long>(k);
        }
        return d;
    }
};

// P_1..P_M of the superexponential asymptotics; polynomials[0] is the
// constant 1 that precedes the sum.
struct SuperExpExpansion {
    std::vector<Polynomial> polynomials;
    std::size_t order = 0;

    [[nodiscard]] const Polynomial &operator[](std::size_t m) const { return polynomials.at(m); }
};

namespace detail
{

// Index m >= 2 of the first nonlinear coefficient of a tangent-to-identity series.
inline std::size_t nonlinear_order(const PowerSeries &base)
{
    if (!base.is_tangent_to_identity()) {
        throw error(errc::contract, "series must have the form x + O(x^2) (fixed point 0, multiplier 1)");
    }
    for (std::size_t k = 2; k <= base.truncation(); ++k) {
        if (base[k] != 0) {
            return k;
        }
    }
    throw error(errc::contract, "series has no nonzero nonlinear coefficient within its truncation");
}

inline void require_order(std::size_t n, std::size_t m)
{
    if (n < m) {
        throw error(errc::invalid_order,
                    "truncation order " + std::to_string(n) + " is below the nonlinear order " + std::to_string(m));
    }
}

} // namespace detail

// Regular iterate h^[t] through x^N, determined by h^[t] o h = h o h^[t]
// together with {h^[t]}_m = t * h_m.
//
// Collecting x^{n+m-1} in the commutator, the unknown g_n enters as
// (n - m) h_m g_n and everything else involves g_2..g_{n-1} only, so the
// coefficients follow one at a time. g_n depends on h_2..h_n alone; the
// coefficients of h beyond its truncation are taken as zero.
inline PowerSeries regular_iterate_series(const PowerSeries &base, const Rational &t, std::size_t N)
{
    const std::size_t m = detail::nonlinear_order(base);
    detail::require_order(N, m);

    const std::size_t top = N + m - 1;
    const PowerSeries h = base.truncated(top);
    const auto h_pow = power_table(h, top);

    PowerSeries g(top);
    g[1] = 1;
    g[m] = t * h[m];
    for (std::size_t n = m + 1; n <= N; ++n) {
        const std::size_t q = n + m - 1;
        Rational lhs = 0; // [x^q] g o h
        for (std::size_t k = 1; k < n; ++k) {
            if (g[k] != 0) {
                lhs += g[k] * h_pow[k][q];
            }
        }
        const Rational rhs = compose(h, g, q)[q]; // [x^q] h o g
        g[n] = -(lhs - rhs) / (Rational(static_cast<long>(n - m)) * h[m]);
    }
    return g.truncated(N);
}

// Iterative logarithm j through x^N: the solution of j o h = h' * j with
// j_m = h_m. Same triangular structure as regular_iterate_series: j_n
// appears at x^{n+m-1} with factor (n - m) h_m.
inline PowerSeries iterative_logarithm(const PowerSeries &base, std::size_t N)
{
    const std::size_t m = detail::nonlinear_order(base);
    detail::require_order(N, m);

    const std::size_t top = N + m - 1;
    const PowerSeries h = base.truncated(top);
    const PowerSeries hp = derivative(h.truncated(top + 1));
    const auto h_pow = power_table(h, top);

    PowerSeries j(top);
    j[m] = h[m];
    for (std::size_t n = m + 1; n <= N; ++n) {
        const std::size_t q = n + m - 1;
        Rational residual = 0;
        for (std::size_t k = m; k < n; ++k) {
            residual += j[k] * h_pow[k][q];
        }
        for (std::size_t k = m; k < n; ++k) {
            residual -= hp.coeff_or_zero(q - k) * j[k];
        }
        j[n] = -residual / (Rational(static_cast<long>(n - m)) * h[m]);
    }
    return j.truncated(N);
}

// Laurent coefficients of alpha' = 1/j for j = j_2 x^2 + j_3 x^3 + ...;
// index i <-> x^{i-2}, i = 0..count-1. Needs j through x^{count+1}.
inline std::vector<Rational> reciprocal_laurent(const PowerSeries &j, std::size_t count)
{
    if (j.truncation() < count + 1) {
        throw error(errc::invalid_order, "iterative logarithm too short for the requested Laurent terms");
    }
    if (j[0] != 0 || j[1] != 0) {
        throw error(errc::contract, "iterative logarithm must start at x^2");
    }
    if (j[2] == 0) {
        throw error(errc::domain, "iterative logarithm has zero leading coefficient; 1/j is not a Laurent series");
    }
    std::vector<Rational> a(count);
    a[0] = 1 / j[2];
    for (std::size_t k = 1; k < count; ++k) {
        Rational s = 0;
        for (std::size_t i = 1; i <= k; ++i) {
            s += j[i + 2] * a[k - i];
        }
        a[k] = -s * a[0];
    }
    return a;
}

// Abel expansion of a multiplier-1 series with m = 2, tail through x^N.
// Integrating alpha' = a_0 x^-2 + a_1 x^-1 + a_2 + a_3 x + ... termwise
// gives pole -a_0, log coefficient a_1 and tail v_k = a_{k+1} / k.
inline AbelExpansion abel_expansion(const PowerSeries &base, std::size_t N)
{
    const std::size_t m = detail::nonlinear_order(base);
    if (m != 2) {
        throw error(errc::contract, "abel_expansion supports only series with a nonzero x^2 coefficient");
    }
    if (N < 1) {
        throw error(errc::invalid_order, "abel_expansion needs N >= 1");
    }
    const PowerSeries j = iterative_logarithm(base, N + 3);
    const auto a = reciprocal_laurent(j, N + 2);

    AbelExpansion out;
    out.pole_coefficient = -a[0];
    out.log_coefficient = a[1];
    out.constant = 0;
    out.tail = PowerSeries(N);
    for (std::size_t k = 1; k <= N; ++k) {
        out.tail[k] = a[k + 1] / static_cast<unsigned long>(k);
    }
    out.truncation_order = N;
    return out;
}

// Log-polynomials P_1..P_M of
//   F(z) = e (1 - (2/z) (1 + sum_m P_m(t) / (3z)^m)),  t = -log(+-z),
// from F(z+1) = exp(F(z)/e).
//
// Put g = F/e - 1 = sum_k Q_k(t) w^k with w = 1/z, Q_1 = -2 and
// Q_k = -2 P_{k-1} / 3^{k-1}. Then g(z+1) = exp(g(z)) - 1, where the shift
// acts as w -> w/(1+w) and t -> t - log(1+w). At w^{n+1} the unknown Q_n
// enters as (2-n) Q_n - Q_n'; for n = 2 only Q_2' is fixed and the constant
// is set to zero, which pins the translation freedom (P_1 = t).
inline SuperExpExpansion superexp_polynomials(std::size_t M)
{
    if (M < 1) {
        throw error(errc::invalid_order, "superexp_polynomials needs M >= 1");
    }
    using PolySeries = std::vector<Polynomial>;
    const std::size_t K = M + 2;

    // w/(1+w) and -log(1+w) through w^K.
    PowerSeries shift_w(K);
    PowerSeries neg_log(K);
    for (std::size_t k = 1; k <= K; ++k) {
        shift_w[k] = (k % 2 == 1) ? 1 : -1;
        neg_log[k] = make_rational((k % 2 == 1) ? -1 : 1, static_cast<long>(k));
    }
    const auto shift_pow = power_table(shift_w, K);
    const auto neg_log_pow = power_table(neg_log, K);

    std::vector<Polynomial> Q(K + 1);
    PolySeries lhs(K + 1); // accumulated g(z+1), terms k < n
    PolySeries expg(K + 1);
    expg[0] = Polynomial::constant(1);

    auto add_shifted = [&](std::size_t k) {
        // W^k * Q_k(t - log(1+w)) = W^k * sum_j Q_k^(j)(t) (-log(1+w))^j / j!
        PolySeries inner(K + 1);
        Polynomial d = Q[k];
        Rational fact = 1;
        for (std::size_t j = 0; !d.is_zero(); ++j) {
            if (j > 0) {
                fact *= static_cast<unsigned long>(j);
            }
            const Polynomial scaled = d * (1 / fact);
            for (std::size_t i = 0; i <= K; ++i) {
                if (neg_log_pow[j][i] != 0) {
                    inner[i] += scaled * neg_log_pow[j][i];
                }
            }
            d = derivative(d);
        }
        for (std::size_t a = k; a <= K; ++a) {
            if (shift_pow[k][a] == 0) {
                continue;
            }
            for (std::size_t b = 0; a + b <= K; ++b) {
                if (!inner[b].is_zero()) {
                    lhs[a + b] += inner[b] * shift_pow[k][a];
                }
            }
        }
    };

    // n E_n = sum_{k=1}^n k g_k E_{n-k} for E = exp(g).
    auto exp_coefficient = [&](std::size_t n) {
        Polynomial s;
        for (std::size_t k = 1; k <= n; ++k) {
            if (!Q[k].is_zero() && !expg[n - k].is_zero()) {
                s += (Q[k] * expg[n - k]) * Rational(static_cast<long>(k));
            }
        }
        expg[n] = s * make_rational(1, static_cast<long>(n));
    };

    Q[1] = Polynomial::constant(-2);
    add_shifted(1);
    exp_coefficient(1);

    SuperExpExpansion out;
    out.order = M;
    out.polynomials.reserve(M + 1);
    out.polynomials.push_back(Polynomial::constant(1));

    for (std::size_t n = 2; n <= M + 1; ++n) {
        for (std::size_t e = n - 1; e <= n + 1; ++e) {
            exp_coefficient(e);
        }
        const Polynomial residual = lhs[n + 1] - expg[n + 1];
        Polynomial qn;
        if (n == 2) {
            qn = antiderivative(residual);
        } else {
            // (2-n) Q - Q' = -R  =>  Q = sum_k D^k(-R) / (2-n)^{k+1}
            const Rational a(2 - static_cast<long>(n));
            Polynomial term = residual * Rational(-1);
            Rational scale = 1 / a;
            while (!term.is_zero()) {
                qn += term * scale;
                term = derivative(term);
                scale /= a;
            }
        }
        Q[n] = qn;
        add_shifted(n);

        Integer pow3 = 1;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            pow3 *= 3;
        }
        out.polynomials.push_back(qn * Rational(-pow3, 2));
    }
    return out;
}

} // namespace tetra

#endif
