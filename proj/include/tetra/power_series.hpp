#ifndef TETRA_POWER_SERIES_HPP
#define TETRA_POWER_SERIES_HPP

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <tetra/error.hpp>
#include <tetra/rational.hpp>

namespace tetra
{

// Truncated formal power series with exact rational coefficients.
// Index k holds the coefficient of x^k; the series is known through
// x^truncation(). Coefficients past the truncation are unknown, not zero.
class PowerSeries
{
public:
    PowerSeries() : coeffs_(1) {}

    explicit PowerSeries(std::size_t truncation) : coeffs_(truncation + 1) {}

    explicit PowerSeries(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs))
    {
        if (coeffs_.empty()) {
            throw error(errc::invalid_order, "power series needs at least one coefficient");
        }
    }

    [[nodiscard]] std::size_t truncation() const noexcept { return coeffs_.size() - 1; }
    [[nodiscard]] std::size_t size() const noexcept { return coeffs_.size(); }

    // Index of the first nonzero coefficient; size() if all known ones vanish.
    [[nodiscard]] std::size_t order() const noexcept
    {
        auto it = std::find_if(coeffs_.begin(), coeffs_.end(), [](const Rational &c) { return c != 0; });
        return static_cast<std::size_t>(it - coeffs_.begin());
    }

    [[nodiscard]] const Rational &operator[](std::size_t k) const { return coeffs_[k]; }
    Rational &operator[](std::size_t k) { return coeffs_[k]; }

    // Coefficient of x^k, zero past the truncation. Only meaningful where
    // the caller knows the tail is irrelevant (e.g. polynomial inputs).
    [[nodiscard]] Rational coeff_or_zero(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(0); }

    [[nodiscard]] const std::vector<Rational> &coefficients() const noexcept { return coeffs_; }

    [[nodiscard]] PowerSeries truncated(std::size_t n) const
    {
        std::vector<Rational> c(n + 1);
        for (std::size_t k = 0; k <= n && k < coeffs_.size(); ++k) {
            c[k] = coeffs_[k];
        }
        return PowerSeries(std::move(c));
    }

    // True for x + O(x^2): the multiplier-1 normalization at a fixed point 0.
    [[nodiscard]] bool is_tangent_to_identity() const
    {
        return coeffs_.size() >= 2 && coeffs_[0] == 0 && coeffs_[1] == 1;
    }

    friend bool operator==(const PowerSeries &a, const PowerSeries &b) { return a.coeffs_ == b.coeffs_; }

    PowerSeries &operator+=(const PowerSeries &o)
    {
        resize_min(o);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            coeffs_[k] += o.coeffs_[k];
        }
        return *this;
    }

    PowerSeries &operator-=(const PowerSeries &o)
    {
        resize_min(o);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            coeffs_[k] -= o.coeffs_[k];
        }
        return *this;
    }

    PowerSeries &operator*=(const Rational &s)
    {
        for (auto &c : coeffs_) {
            c *= s;
        }
        return *this;
    }

    friend PowerSeries operator+(PowerSeries a, const PowerSeries &b) { return a += b; }
    friend PowerSeries operator-(PowerSeries a, const PowerSeries &b) { return a -= b; }
    friend PowerSeries operator*(PowerSeries a, const Rational &s) { return a *= s; }

    friend PowerSeries operator*(const PowerSeries &a, const PowerSeries &b)
    {
        const std::size_t n = std::min(a.truncation(), b.truncation());
        PowerSeries r(n);
        for (std::size_t i = 0; i <= n; ++i) {
            if (a.coeffs_[i] == 0) {
                continue;
            }
            for (std::size_t j = 0; i + j <= n; ++j) {
                r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        return r;
    }

private:
    void resize_min(const PowerSeries &o)
    {
        if (o.coeffs_.size() < coeffs_.size()) {
            coeffs_.resize(o.coeffs_.size());
        }
    }

    std::vector<Rational> coeffs_;
};

// Formal derivative; the result is known one order less.
inline PowerSeries derivative(const PowerSeries &a)
{
    if (a.truncation() == 0) {
        return PowerSeries(std::vector<Rational>{Rational(0)});
    }
    PowerSeries r(a.truncation() - 1);
    for (std::size_t k = 1; k <= a.truncation(); ++k) {
        r[k - 1] = a[k] * static_cast<unsigned long>(k);
    }
    return r;
}

// outer(inner(x)) through x^n. Requires inner(0) = 0. Operands known to a
// lower order are padded with zeros, i.e. treated as polynomials.
inline PowerSeries compose(const PowerSeries &outer, const PowerSeries &inner, std::size_t n)
{
    if (inner[0] != 0) {
        throw error(errc::contract, "compose: inner series must vanish at 0");
    }
    // Horner in the series ring: ((a_n g + a_{n-1}) g + ...) g + a_0.
    const PowerSeries padded = inner.truncated(n);
    PowerSeries acc(n);
    const std::size_t top = std::min(n, outer.truncation());
    for (std::size_t k = top + 1; k-- > 0;) {
        acc = acc * padded;
        acc[0] += outer[k];
    }
    return acc;
}

inline PowerSeries compose(const PowerSeries &outer, const PowerSeries &inner)
{
    return compose(outer, inner, std::min(outer.truncation(), inner.truncation()));
}

// x through x^n.
inline PowerSeries identity_series(std::size_t n)
{
    PowerSeries r(n);
    if (n >= 1) {
        r[1] = 1;
    }
    return r;
}

// e^x - 1 through x^n.
inline PowerSeries exp_minus_one_series(std::size_t n)
{
    PowerSeries r(n);
    Rational c = 1;
    for (std::size_t k = 1; k <= n; ++k) {
        c /= static_cast<unsigned long>(k);
        r[k] = c;
    }
    return r;
}

// Rows k = 0..n of the powers outer^k, each through x^n. Row k starts at
// x^{k * order(base)}; reused by the recurrences that need many compositions.
inline std::vector<PowerSeries> power_table(const PowerSeries &base, std::size_t n)
{
    std::vector<PowerSeries> rows;
    rows.reserve(n + 1);
    PowerSeries p(n);
    p[0] = 1;
    const PowerSeries b = base.truncated(n);
    for (std::size_t k = 0; k <= n; ++k) {
        rows.push_back(p);
        p = p * b;
    }
    return rows;
}

} // namespace tetra

#endif
