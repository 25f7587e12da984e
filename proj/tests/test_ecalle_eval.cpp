#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <functional>

#include <tetra/ecalle_eval.hpp>
#include <tetra/limit_methods.hpp>

using tetra::BranchSign;
using tetra::ComplexD;
using tetra::ComplexMp;
using tetra::CutSide;
using tetra::EvalContext;
using tetra::Evaluator;
using tetra::MpReal;
using cd = std::complex<double>;

namespace
{

const Evaluator<double> &dev()
{
    static const Evaluator<double> ev(EvalContext{}, tetra::default_constants());
    return ev;
}

const double E = std::exp(1.0);

ComplexD cz(cd z) { return {z.real(), z.imag()}; }
cd sd(const ComplexD &z) { return tetra::to_std(z); }

// Points of an nx x ny grid on [x0, x1] x [y0, y1] that pass keep().
std::vector<cd> grid(double x0, double x1, double y0, double y1, int nx, int ny,
                     const std::function<bool(cd)> &keep = [](cd) { return true; })
{
    std::vector<cd> pts;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const cd z(x0 + (x1 - x0) * i / (nx - 1), y0 + (y1 - y0) * j / (ny - 1));
            if (keep(z)) {
                pts.push_back(z);
            }
        }
    }
    return pts;
}

cd expb(cd z) { return std::exp(z / E); }

} // namespace

TEST_CASE("Abel functions at the reference points", "[ecalle_eval]")
{
    const auto &ev = dev();
    CHECK(std::abs(ev.abel1(ComplexD(1.0)).re - 3.029297214418) < 1e-11);
    CHECK(std::abs(ev.abel2(ComplexD(3.0)).re - -20.0563555297533789) < 1e-12);
    CHECK(std::abs(ev.abel1(ComplexD(-1.0)).re - ev.abel1(ComplexD(1.0)).re - -1.4223536677333) < 1e-12);
    CHECK(std::abs(sd(ev.A1(ComplexD(1.0)))) < 1e-13);
    CHECK(std::abs(sd(ev.A3(ComplexD(3.0)))) < 1e-13);
    const cd z(-1, 0);
    CHECK(std::abs(sd(ev.abel1(cz(expb(z))) - ev.abel1(cz(z))) - 1.0) < 1e-12);
    const cd w(5, 0);
    CHECK(std::abs(sd(ev.abel2(cz(expb(w))) - ev.abel2(cz(w))) - 1.0) < 1e-12);
}

TEST_CASE("A1 is periodic with period 2 pi e i", "[ecalle_eval]")
{
    const auto &ev = dev();
    const cd t1(0, 2 * M_PI * E);
    const cd z(-1, 0.5);
    CHECK(std::abs(sd(ev.A1(cz(z + t1))) - sd(ev.A1(cz(z)))) < 1e-11);
    CHECK(std::abs(tetra::default_constants().period_t1.im.to_double() - t1.imag()) < 1e-14);
    int n = 0;
    for (cd p : grid(-1.5, 2, -3, 3, 10, 10)) {
        CHECK(std::abs(sd(ev.A1(cz(p + t1))) - sd(ev.A1(cz(p)))) < 1e-11);
        ++n;
    }
    CHECK(n >= 100);
}

TEST_CASE("super-exponentials at the reference points", "[ecalle_eval]")
{
    const auto &ev = dev();
    const auto &cc = tetra::default_constants();
    CHECK(std::abs(sd(ev.superexp_tilde(ComplexD(cc.x1.to_double()), BranchSign::minus)) - 1.0) < 1e-13);
    CHECK(std::abs(sd(ev.superexp_tilde(ComplexD(cc.x3.to_double()), BranchSign::plus)) - 3.0) < 1e-12);
    CHECK(std::abs(sd(ev.F1(ComplexD(0.0))) - 1.0) < 1e-13);
    CHECK(std::abs(sd(ev.F1(ComplexD(1.0))) - std::exp(1 / E)) < 1e-13);
    CHECK(std::abs(sd(ev.F3(ComplexD(0.0))) - 3.0) < 1e-12);
    CHECK(std::abs(sd(ev.F3(ComplexD(1.0))) - std::exp(3 / E)) < 1e-12);
    // Leading term of the asymptotic: F3(z) - e ~ -2e / (z + x3).
    const double lead = 2 * E / std::abs(-40.0 + cc.x3.to_double());
    CHECK(std::abs(std::abs(sd(ev.F3(ComplexD(-40.0))) - E) / lead - 1) < 0.05);
    const cd z(2, 1);
    CHECK(std::abs(sd(ev.F1(ev.A1(cz(z)))) - z) < 1e-12);
}

TEST_CASE("asymptotic expansion has the leading 2e/z behaviour", "[ecalle_eval]")
{
    const auto &ev = dev();
    const double z = 1e6;
    const double d = std::abs(sd(ev.superexp_tilde(ComplexD(z), BranchSign::minus)) - E);
    CHECK(std::abs(d / (2 * E / z) - 1) < 0.01);
    CHECK_THROWS_AS(ev.superexp_asymptotic(ComplexD(0.0), BranchSign::minus), tetra::error);
}

TEST_CASE("F1 and F3 satisfy the functional equation", "[ecalle_eval][property]")
{
    const auto &ev = dev();
    const auto pts = grid(-1, 9, -10, 10, 41, 41);
    REQUIRE(pts.size() >= 100);
    for (cd z : pts) {
        const cd a = sd(ev.F1(cz(z + 1.0)));
        const cd b = expb(sd(ev.F1(cz(z))));
        INFO("z = " << z);
        CHECK(std::abs(a - b) <= 1e-12 * (1 + std::abs(a)));
    }
    int evaluated = 0;
    for (cd z : grid(-8, 1, -4, 4, 19, 17)) {
        try {
            const cd a = sd(ev.F3(cz(z + 1.0)));
            const cd b = expb(sd(ev.F3(cz(z))));
            INFO("z = " << z);
            CHECK(std::abs(a - b) <= 1e-12 * (1 + std::abs(a)));
            ++evaluated;
        } catch (const tetra::error &e) {
            CHECK(e.code() == tetra::errc::overflow);
        }
    }
    CHECK(evaluated >= 100);
}

TEST_CASE("A1 and A3 satisfy the Abel equation", "[ecalle_eval][property]")
{
    const auto &ev = dev();
    const auto off_axis = [](cd z) { return z.imag() != 0; };
    const auto left = grid(-2, 2.5, -3, 3, 12, 12, off_axis);
    REQUIRE(left.size() >= 100);
    for (cd z : left) {
        INFO("z = " << z);
        CHECK(std::abs(sd(ev.A1(cz(expb(z))) - ev.A1(cz(z))) - 1.0) <= 1e-12);
    }
    const auto right = grid(3, 8, -3, 3, 11, 11);
    REQUIRE(right.size() >= 100);
    for (cd z : right) {
        INFO("z = " << z);
        CHECK(std::abs(sd(ev.A3(cz(expb(z))) - ev.A3(cz(z))) - 1.0) <= 1e-12);
    }
}

TEST_CASE("F1 and A1 invert each other in the central region", "[ecalle_eval][property]")
{
    const auto &ev = dev();
    const auto pts = grid(-1, 3, -2, 2, 11, 11, [](cd z) { return z.imag() != 0 || z.real() < 2.5; });
    REQUIRE(pts.size() >= 100);
    for (cd z : pts) {
        INFO("z = " << z);
        CHECK(std::abs(sd(ev.A1(ev.F1(cz(z)))) - z) <= 1e-12);
        CHECK(std::abs(sd(ev.F1(ev.A1(cz(z)))) - z) <= 1e-12);
    }
}

TEST_CASE("F3 and A3 invert each other", "[ecalle_eval][property]")
{
    const auto &ev = dev();
    const auto pts = grid(-3, 1, -1, 1, 11, 11, [](cd z) { return z.imag() != 0; });
    REQUIRE(pts.size() >= 100);
    for (cd z : pts) {
        INFO("z = " << z);
        CHECK(std::abs(sd(ev.A3(ev.F3(cz(z)))) - z) <= 1e-11);
    }
}

TEST_CASE("evaluators are symmetric under conjugation", "[ecalle_eval][property]")
{
    const auto &ev = dev();
    const auto pts = grid(-1.5, 5, -4, 4, 11, 10);
    REQUIRE(pts.size() >= 100);
    for (cd z : pts) {
        const cd c = std::conj(z);
        INFO("z = " << z);
        CHECK(std::abs(sd(ev.F1(cz(c))) - std::conj(sd(ev.F1(cz(z))))) <= 1e-14 * std::abs(sd(ev.F1(cz(z)))));
        CHECK(std::abs(sd(ev.F3(cz(c - 6.0))) - std::conj(sd(ev.F3(cz(z - 6.0))))) <= 1e-14 * 30);
    }
    CHECK(sd(ev.F1(ComplexD(-3.0), CutSide::above)) == std::conj(sd(ev.F1(ComplexD(-3.0), CutSide::below))));
    CHECK(sd(ev.A1(ComplexD(4.0), CutSide::above)) == std::conj(sd(ev.A1(ComplexD(4.0), CutSide::below))));
}

TEST_CASE("A1 on its cut is the limit from the chosen side", "[ecalle_eval]")
{
    const auto &ev = dev();
    // Off the axis the forward recursion escapes, so compare inside the disk.
    for (double x : {2.8, 3.2, 3.5}) {
        const cd above = sd(ev.A1(ComplexD(x), CutSide::above));
        const cd near = sd(ev.A1(ComplexD(x, 1e-12)));
        INFO("x = " << x);
        CHECK(std::abs(above - near) < 1e-8);
    }
    // Abel equation along the cut, mixing the expansion and the recursion.
    for (double x : {2.9, 3.5, 4.0, 9.0}) {
        const cd a = sd(ev.A1(ComplexD(x), CutSide::above));
        const cd b = sd(ev.A1(ComplexD(std::exp(x / E)), CutSide::above));
        INFO("x = " << x);
        CHECK(std::abs(b - a - 1.0) < 1e-12);
    }
}

TEST_CASE("cuts require a side", "[ecalle_eval]")
{
    const auto &ev = dev();
    const auto code_of = [](auto &&f) {
        try {
            f();
        } catch (const tetra::error &e) {
            return e.code();
        }
        return tetra::errc::io;
    };
    CHECK(code_of([&] { return ev.A1(ComplexD(4.0)); }) == tetra::errc::cut);
    CHECK(code_of([&] { return ev.A3(ComplexD(2.0)); }) == tetra::errc::cut);
    CHECK(code_of([&] { return ev.abel1(ComplexD(E)); }) == tetra::errc::singularity);
    CHECK(code_of([&] { return ev.A3(ComplexD(1.0), CutSide::above); }) == tetra::errc::singularity);
    CHECK(code_of([&] { return ev.F1(ComplexD(-3.0)); }) == tetra::errc::cut);
    CHECK(code_of([&] { return ev.F3(ComplexD(25.0)); }) == tetra::errc::overflow);
    // Above and below the cut the values differ.
    const cd a = sd(ev.A3(ComplexD(2.0), CutSide::above));
    const cd b = sd(ev.A3(ComplexD(2.0), CutSide::below));
    CHECK(std::abs(a - std::conj(b)) < 1e-13);
    CHECK(std::abs(a.imag()) > 0.1);
}

TEST_CASE("overflow reports the failing step", "[ecalle_eval]")
{
    try {
        (void)dev().F3(ComplexD(25.0));
        FAIL("expected overflow");
    } catch (const tetra::overflow_error &e) {
        CHECK(e.step() >= 1);
    }
}

TEST_CASE("recursion cap is enforced", "[ecalle_eval]")
{
    EvalContext ctx;
    ctx.max_recursion = 3;
    const Evaluator<double> ev(ctx, tetra::default_constants());
    try {
        (void)ev.F1(ComplexD(-20.0, 1.0));
        FAIL("expected non-convergence");
    } catch (const tetra::error &e) {
        CHECK(e.code() == tetra::errc::nonconvergence);
    }
    EvalContext bad;
    bad.abel_disk_radius = 0;
    CHECK_THROWS_AS(bad.validate(), tetra::error);
}

TEST_CASE("double evaluator agrees with the 128-bit evaluator", "[ecalle_eval]")
{
    tetra::precision_scope scope(128);
    const Evaluator<MpReal> mp(EvalContext::for_precision(128), tetra::default_constants());
    const auto &ev = dev();
    for (cd z : {cd(0.5, 0.5), cd(-1, 2), cd(3, -1), cd(2, 0)}) {
        const ComplexMp zm(MpReal(z.real()), MpReal(z.imag()));
        CHECK(std::abs(tetra::to_std(mp.F1(zm)) - sd(ev.F1(cz(z)))) < 2e-14 * std::abs(sd(ev.F1(cz(z)))));
        CHECK(std::abs(tetra::to_std(mp.A1(zm)) - sd(ev.A1(cz(z)))) < 1e-13);
        CHECK(std::abs(tetra::to_std(mp.F3(zm - ComplexMp(MpReal(3)))) - sd(ev.F3(cz(z - 3.0)))) < 1e-13);
    }
    // At 128 bits the residual of the functional equation is far below double.
    const ComplexMp z(MpReal(0.3), MpReal(0.7));
    const ComplexMp r = mp.F1(z + ComplexMp(MpReal(1))) - mp.exp_b(mp.F1(z));
    CHECK(abs(r).to_double() < 1e-30);
}

TEST_CASE("calibration constants", "[ecalle_eval][calibration]")
{
    const auto &cc = tetra::default_constants();
    CHECK(cc.bits == 128);
    // The printed x1 is off in its last two digits.
    CHECK(std::abs(cc.x1.to_double() - 2.798248154231454) < 1e-13);
    CHECK(std::abs(cc.x3.to_double() - -20.28740458994004) < 1e-12);
    CHECK(std::abs(cc.a1_norm.to_double() - 3.029297214418) < 1e-11);
    CHECK(std::abs(cc.a3_norm.to_double() - -20.0563555297533789) < 1e-12);

    // The asymptotic series inverts the Abel expansion up to ln(2)/3, so
    // x = A(F(x)) - ln(2)/3 ties the root finder to the Abel evaluator.
    const MpReal third_ln2 = MpReal::const_log2(128) / 3;
    CHECK(abs(cc.x1 - (cc.a1_norm - third_ln2)).to_double() < 1e-30);
    CHECK(abs(cc.x3 - (cc.a3_norm - third_ln2)).to_double() < 1e-30);
}

TEST_CASE("calibration is robust to perturbed seeds", "[ecalle_eval][calibration]")
{
    const auto &ref = tetra::default_constants();
    for (double dx : {-0.1, 0.1}) {
        tetra::CalibrationSeeds seeds;
        seeds.x1 += dx;
        seeds.x3 -= dx;
        const auto cc = tetra::calibrate(EvalContext::for_precision(128), seeds);
        CHECK(abs(cc.x1 - ref.x1).to_double() < 1e-35);
        CHECK(abs(cc.x3 - ref.x3).to_double() < 1e-33);
    }
    const auto d = tetra::calibrate(EvalContext{});
    CHECK(d.bits == 53);
    CHECK(d.x1.to_double() == ref.x1.to_double());

    tetra::CalibrationSeeds broken;
    broken.x1 = 100;
    try {
        (void)tetra::calibrate(EvalContext{}, broken);
        FAIL("expected calibration failure");
    } catch (const tetra::error &e) {
        CHECK(e.code() == tetra::errc::calibration);
    }
}

TEST_CASE("A3 agrees with the backward Fatou limit up to its 1/n error", "[ecalle_eval][oracle]")
{
    const auto &ev = dev();
    tetra::PrecisionConfig pc;
    pc.mantissa_bits = 128;
    const auto fatou = [&](double x, long n) {
        const ComplexMp h = tetra::tau_inverse(ComplexMp(MpReal(x, 128), MpReal(0, 128)));
        return tetra::fatou_abel(h, 2, n, pc).re.to_double();
    };
    const double da = ev.abel2(ComplexD(10.0)).re - ev.abel2(ComplexD(3.0)).re;
    for (long n : {1000L, 10000L}) {
        const double df = fatou(10, n) - fatou(3, n);
        // alpha_n(z) = alpha(z) - alpha(z) / (3n) + O(log n / n^2)
        const double predicted = -da / (3.0 * static_cast<double>(n));
        INFO("n = " << n);
        CHECK(std::abs((df - da) - predicted) < 0.02 * std::abs(predicted));
    }
}

TEST_CASE("A1 minus the Fatou limit is constant", "[ecalle_eval][oracle]")
{
    const auto &ev = dev();
    tetra::PrecisionConfig pc;
    pc.mantissa_bits = 128;
    const long n = 100000;
    std::vector<double> diffs;
    std::vector<double> tails;
    for (double x : {-1.8, -1.5, -1.2, -1.0, -0.7, -0.4, 0.0, 0.5, 1.0, 1.5}) {
        const ComplexMp h = tetra::tau_inverse(ComplexMp(MpReal(x, 128), MpReal(0, 128)));
        const double a = tetra::fatou_abel(h, 1, n, pc).re.to_double();
        const double a_half = tetra::fatou_abel(h, 1, n / 2, pc).re.to_double();
        diffs.push_back(a - ev.abel1(ComplexD(x)).re);
        tails.push_back(std::abs(a - a_half));
    }
    const auto [lo, hi] = std::minmax_element(diffs.begin(), diffs.end());
    const double tail = *std::max_element(tails.begin(), tails.end());
    CHECK(*hi - *lo < 10 * tail);
    CHECK(std::abs(*lo + std::log(2.0) / 3) < 1e-4);
}
