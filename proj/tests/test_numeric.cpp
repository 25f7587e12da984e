#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include <tetra/complex.hpp>
#include <tetra/format.hpp>
#include <tetra/mp_real.hpp>

using tetra::ComplexD;
using tetra::ComplexMp;
using tetra::MpReal;

TEST_CASE("MpReal keeps per-value precision", "[numeric]")
{
    const MpReal a(1, 200);
    const MpReal b(3, 100);
    CHECK((a / b).precision() == 200);
    CHECK(MpReal(a, 64).precision() == 64);
    tetra::precision_scope scope(300);
    CHECK(MpReal(2.5).precision() == 300);
    CHECK(MpReal::const_pi().precision() == 300);
}

TEST_CASE("MpReal elementary functions match double", "[numeric]")
{
    const double xs[] = {0.1, 0.5, 1.0, 2.5, 7.0};
    for (double x : xs) {
        const MpReal m(x, 128);
        CHECK(exp(m).to_double() == Catch::Approx(std::exp(x)).epsilon(1e-15));
        CHECK(log(m).to_double() == Catch::Approx(std::log(x)).epsilon(1e-15));
        CHECK(expm1(m).to_double() == Catch::Approx(std::expm1(x)).epsilon(1e-15));
        CHECK(log1p(m).to_double() == Catch::Approx(std::log1p(x)).epsilon(1e-15));
        CHECK(sin(m).to_double() == Catch::Approx(std::sin(x)).epsilon(1e-15));
    }
    CHECK(MpReal::const_e(128).to_double() == std::exp(1.0));
}

TEST_CASE("MpReal string round trip", "[numeric]")
{
    const MpReal x = MpReal::from_string("2.7982481542313876624525831854691003124337", 128);
    const MpReal y = MpReal::from_string(tetra::format_mp(x), 128);
    CHECK(x == y);
    CHECK_THROWS_AS(MpReal::from_string("2.x", 64), tetra::error);
}

TEST_CASE("complex helpers agree with std::complex", "[numeric]")
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int k = 0; k < 200; ++k) {
        const std::complex<double> z(u(rng), u(rng));
        const ComplexD w(z.real(), z.imag());
        const auto close = [](std::complex<double> a, std::complex<double> b) {
            return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(b));
        };
        CHECK(close(tetra::to_std(exp(w)), std::exp(z)));
        CHECK(close(tetra::to_std(log(w)), std::log(z)));
        CHECK(close(tetra::to_std(expm1(w)), std::exp(z) - 1.0));
        CHECK(close(tetra::to_std(log1p(w)), std::log(1.0 + z)));
        CHECK(close(tetra::to_std(w / ComplexD(0.3, -1.7)), z / std::complex<double>(0.3, -1.7)));
    }
}

TEST_CASE("expm1 and log1p keep relative accuracy near zero", "[numeric]")
{
    const ComplexMp z(MpReal(1e-30, 256), MpReal(2e-30, 256));
    const ComplexMp e = expm1(z);
    CHECK(std::abs(e.re.to_double() / 1e-30 - 1) < 1e-20);
    const ComplexMp l = log1p(z);
    CHECK(std::abs(l.im.to_double() / 2e-30 - 1) < 1e-20);
}

TEST_CASE("shortest double formatting round-trips", "[format]")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int k = 0; k < 1000; ++k) {
        const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        CHECK(std::stod(tetra::format_double(x)) == x);
    }
    CHECK(tetra::format_double(0.1) == "0.1");
    CHECK(tetra::format_double(-2) == "-2");
    CHECK(tetra::format_complex(std::complex<double>(1, -0.5)) == "1-0.5i");
}

TEST_CASE("printed digits follow the published tables", "[format]")
{
    using tetra::LimitMethod;
    const MpReal x = MpReal::from_string("-1.42235507550961613138", 128);
    CHECK(tetra::printed_value(LimitMethod::levy, 100, x) == "-1.4224");
    CHECK(tetra::printed_value(LimitMethod::levy, 1000, x) == "-1.422355");
    CHECK(tetra::printed_value(LimitMethod::levy, 10000, x) == "-1.4223551");
    CHECK(tetra::printed_value(LimitMethod::levy, 100000, x) == "-1.42235508");
    // The Fatou table is cut, not rounded.
    CHECK(tetra::printed_value(LimitMethod::fatou1, 1000, x) == "-1.4223550");
    CHECK(tetra::printed_value(LimitMethod::fatou1, 10000, x) == "-1.422355075");
    CHECK(tetra::printed_value(LimitMethod::fatou1, 100000, x) == "-1.42235507550");
    CHECK(tetra::printed_value(LimitMethod::newton, 1000, x) == "-1.4224");
}
