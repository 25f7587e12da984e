#include <catch_amalgamated.hpp>

#include <tetra/polynomial.hpp>
#include <tetra/power_series.hpp>
#include <tetra/rational.hpp>

using tetra::PowerSeries;
using tetra::Rational;
using tetra::make_rational;

TEST_CASE("exp_minus_one_series coefficients", "[series]")
{
    const auto h = tetra::exp_minus_one_series(5);
    REQUIRE(h.truncation() == 5);
    CHECK(h[0] == 0);
    CHECK(h[1] == 1);
    CHECK(h[2] == make_rational(1, 2));
    CHECK(h[5] == make_rational(1, 120));
    CHECK(h.is_tangent_to_identity());
}

TEST_CASE("compose exp(x)-1 with log(1+x) gives identity", "[series]")
{
    const std::size_t n = 10;
    PowerSeries log1p(n);
    for (std::size_t k = 1; k <= n; ++k) {
        log1p[k] = make_rational(k % 2 == 1 ? 1 : -1, static_cast<long>(k));
    }
    CHECK(tetra::compose(tetra::exp_minus_one_series(n), log1p) == tetra::identity_series(n));
    CHECK(tetra::compose(log1p, tetra::exp_minus_one_series(n)) == tetra::identity_series(n));
}

TEST_CASE("compose rejects inner series with constant term", "[series][error]")
{
    PowerSeries inner(3);
    inner[0] = 1;
    try {
        (void)tetra::compose(tetra::exp_minus_one_series(3), inner);
        FAIL("expected an error");
    } catch (const tetra::error &e) {
        CHECK(e.code() == tetra::errc::contract);
    }
}

TEST_CASE("power_table rows are successive powers", "[series]")
{
    const auto h = tetra::exp_minus_one_series(8);
    const auto rows = tetra::power_table(h, 8);
    REQUIRE(rows.size() == 9);
    CHECK(rows[0][0] == 1);
    CHECK(rows[2] == h * h);
    CHECK(rows[3].order() == 3);
}

TEST_CASE("truncated pads with zeros", "[series]")
{
    const auto h = tetra::exp_minus_one_series(2);
    const auto p = h.truncated(5);
    REQUIRE(p.truncation() == 5);
    CHECK(p[2] == make_rational(1, 2));
    CHECK(p[5] == 0);
}

TEST_CASE("rational helpers", "[rational]")
{
    CHECK(tetra::to_fraction_string(make_rational(-6, 4)) == "-3/2");
    CHECK(tetra::to_fraction_string(Rational(5)) == "5/1");
    CHECK(tetra::parse_rational("10/4") == make_rational(5, 2));
    CHECK(tetra::parse_rational("-7") == Rational(-7));
    CHECK_THROWS_AS(tetra::parse_rational("1/0"), tetra::error);
    CHECK_THROWS_AS(tetra::parse_rational("abc"), tetra::error);
    CHECK(tetra::binomial(make_rational(1, 2), 2) == make_rational(-1, 8));
    CHECK(tetra::binomial(Rational(5), 2) == 10);
}

TEST_CASE("polynomial arithmetic", "[polynomial]")
{
    const tetra::Polynomial p({Rational(1), Rational(2), Rational(3)});
    CHECK(p.degree() == 2);
    CHECK(tetra::derivative(p) == tetra::Polynomial({Rational(2), Rational(6)}));
    CHECK(tetra::antiderivative(tetra::derivative(p)) == p - tetra::Polynomial::constant(1));
    CHECK((p - p).is_zero());
    CHECK((p * p).degree() == 4);
    const double v = p.evaluate(2.0, [](const Rational &q) { return q.get_d(); });
    CHECK(v == 17.0);
}
