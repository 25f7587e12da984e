#ifndef TETRA_TESTS_ORACLES_HPP
#define TETRA_TESTS_ORACLES_HPP

// Independent reference computations used only by the tests. They share
// the rational and series primitives with the library but none of its
// recurrences.

#include <cstddef>
#include <vector>

#include <tetra/power_series.hpp>
#include <tetra/rational.hpp>

namespace oracle
{

using tetra::PowerSeries;
using tetra::Rational;

// h^[0..count-1] through x^N by repeated composition.
inline std::vector<PowerSeries> integer_iterates(const PowerSeries &h, std::size_t count, std::size_t N)
{
    std::vector<PowerSeries> it;
    it.push_back(tetra::identity_series(N));
    for (std::size_t k = 1; k < count; ++k) {
        it.push_back(tetra::compose(h, it.back(), N));
    }
    return it;
}

// Newton interpolation of the integer iterates:
//   {h^[t]}_N = sum_{n<N} C(t,n) sum_{k<=n} C(n,k) (-1)^{n-k} {h^[k]}_N
inline Rational newton_coefficient(const PowerSeries &h, const Rational &t, std::size_t N)
{
    const auto it = integer_iterates(h, N, N);
    Rational total = 0;
    for (std::size_t n = 0; n < N; ++n) {
        Rational inner = 0;
        for (std::size_t k = 0; k <= n; ++k) {
            Rational term = tetra::binomial(Rational(static_cast<long>(n)), k) * it[k][N];
            inner += ((n - k) % 2 == 0) ? term : Rational(-term);
        }
        total += tetra::binomial(t, n) * inner;
    }
    return total;
}

// Jabotinsky's single sum, with the free index of the second binomial read
// as the summation index:
//   {h^[t]}_N = sum_{k<N} (-1)^{N-1-k} C(t,k) C(t-1-k, N-1-k) {h^[k]}_N
inline Rational jabotinsky_coefficient(const PowerSeries &h, const Rational &t, std::size_t N)
{
    const auto it = integer_iterates(h, N, N);
    Rational total = 0;
    for (std::size_t k = 0; k < N; ++k) {
        Rational term = tetra::binomial(t, k) * tetra::binomial(t - 1 - static_cast<long>(k), N - 1 - k) * it[k][N];
        total += ((N - 1 - k) % 2 == 0) ? term : Rational(-term);
    }
    return total;
}

} // namespace oracle

#endif
