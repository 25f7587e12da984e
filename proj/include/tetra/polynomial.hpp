#ifndef TETRA_POLYNOMIAL_HPP
#define TETRA_POLYNOMIAL_HPP

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include <tetra/rational.hpp>

namespace tetra
{

// Dense polynomial in one variable with rational coefficients; index k is
// the coefficient of t^k. Trailing zeros are trimmed so degree() is exact.
class Polynomial
{
public:
    Polynomial() = default;

    explicit Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    static Polynomial constant(const Rational &c) { return Polynomial(std::vector<Rational>{c}); }

    // -1 for the zero polynomial.
    [[nodiscard]] int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] bool is_zero() const noexcept { return coeffs_.empty(); }

    [[nodiscard]] Rational operator[](std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(0); }
    [[nodiscard]] Rational leading() const { return coeffs_.empty() ? Rational(0) : coeffs_.back(); }
    [[nodiscard]] const std::vector<Rational> &coefficients() const noexcept { return coeffs_; }

    friend bool operator==(const Polynomial &a, const Polynomial &b) { return a.coeffs_ == b.coeffs_; }

    Polynomial &operator+=(const Polynomial &o)
    {
        if (o.coeffs_.size() > coeffs_.size()) {
            coeffs_.resize(o.coeffs_.size());
        }
        for (std::size_t k = 0; k < o.coeffs_.size(); ++k) {
            coeffs_[k] += o.coeffs_[k];
        }
        trim();
        return *this;
    }

    Polynomial &operator-=(const Polynomial &o)
    {
        if (o.coeffs_.size() > coeffs_.size()) {
            coeffs_.resize(o.coeffs_.size());
        }
        for (std::size_t k = 0; k < o.coeffs_.size(); ++k) {
            coeffs_[k] -= o.coeffs_[k];
        }
        trim();
        return *this;
    }

    Polynomial &operator*=(const Rational &s)
    {
        if (s == 0) {
            coeffs_.clear();
            return *this;
        }
        for (auto &c : coeffs_) {
            c *= s;
        }
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial &b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial &b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Rational &s) { return a *= s; }

    friend Polynomial operator*(const Polynomial &a, const Polynomial &b)
    {
        if (a.is_zero() || b.is_zero()) {
            return {};
        }
        std::vector<Rational> r(a.coeffs_.size() + b.coeffs_.size() - 1);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
                r[i + j] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        return Polynomial(std::move(r));
    }

    // Horner evaluation in any field the coefficients convert into.
    template <class T, class Convert>
    [[nodiscard]] T evaluate(const T &t, Convert &&to_field) const
    {
        T acc = to_field(Rational(0));
        for (std::size_t k = coeffs_.size(); k-- > 0;) {
            acc = acc * t + to_field(coeffs_[k]);
        }
        return acc;
    }

private:
    void trim()
    {
        while (!coeffs_.empty() && coeffs_.back() == 0) {
            coeffs_.pop_back();
        }
    }

    std::vector<Rational> coeffs_;
};

inline Polynomial derivative(const Polynomial &p)
{
    if (p.degree() < 1) {
        return {};
    }
    std::vector<Rational> r(static_cast<std::size_t>(p.degree()));
    for (std::size_t k = 1; k <= static_cast<std::size_t>(p.degree()); ++k) {
        r[k - 1] = p[k] * static_cast<unsigned long>(k);
    }
    return Polynomial(std::move(r));
}

// Antiderivative with zero constant term.
inline Polynomial antiderivative(const Polynomial &p)
{
    if (p.is_zero()) {
        return {};
    }
    std::vector<Rational> r(p.coefficients().size() + 1);
    for (std::size_t k = 0; k < p.coefficients().size(); ++k) {
        r[k + 1] = p[k] / static_cast<unsigned long>(k + 1);
    }
    return Polynomial(std::move(r));
}

} // namespace tetra

#endif
