#ifndef TETRA_ITERATION_API_HPP
#define TETRA_ITERATION_API_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <tetra/ecalle_eval.hpp>

namespace tetra
{

// lower: F1 / A1 (attracting petal), upper: F3 / A3 (repelling petal).
// automatic picks lower for Re z < e and upper for Re z > e.
enum class IterBranch { automatic, lower, upper };

struct IterateRequest {
    std::complex<double> c{0, 0};
    std::complex<double> z{0, 0};
    IterBranch branch = IterBranch::automatic;
    CutSide cut_side = CutSide::none;
};

template <class R>
IterBranch resolve_branch(const Evaluator<R> &ev, const Complex<R> &z, IterBranch b)
{
    if (b != IterBranch::automatic) {
        return b;
    }
    if (z.re < ev.e()) {
        return IterBranch::lower;
    }
    if (z.re > ev.e()) {
        return IterBranch::upper;
    }
    throw error(errc::domain, "Re z = e: the iterate branch must be given explicitly");
}

// exp_b^[c](z) = F(c + A(z)) for the chosen pair (F, A). The fixed point e
// is fixed by every iterate.
template <class R>
Complex<R> exp_iterate(const Evaluator<R> &ev, const Complex<R> &c, const Complex<R> &z, IterBranch branch,
                       CutSide side = CutSide::none)
{
    using C = Complex<R>;
    if (Evaluator<R>::is_real(z) && z.re == ev.e()) {
        return z;
    }
    const IterBranch b = resolve_branch(ev, z, branch);
    if (b == IterBranch::lower) {
        const C w = c + ev.A1(z, side);
        if (Evaluator<R>::is_real(w) && w.re <= real_traits<R>::from_double(-2.0, w.re) && side == CutSide::none) {
            throw error(errc::branch, "c + A1(z) falls on the cut of F1");
        }
        return ev.F1(w, side);
    }
    return ev.F3(c + ev.A3(z, side));
}

inline std::complex<double> exp_iterate(const IterateRequest &req, const Evaluator<double> &ev)
{
    return to_std(exp_iterate(ev, ComplexD(req.c.real(), req.c.imag()), ComplexD(req.z.real(), req.z.imag()),
                              req.branch, req.cut_side));
}

// exp_{b,1}^[1/2](x + i0) - exp_{b,3}^[1/2](x + i0).
template <class R>
Complex<R> dq13(const Evaluator<R> &ev, const R &x)
{
    const Complex<R> half(real_traits<R>::from_double(0.5, x), real_traits<R>::from_double(0.0, x));
    const Complex<R> z(x, real_traits<R>::from_double(0.0, x));
    return exp_iterate(ev, half, z, IterBranch::lower, CutSide::above) -
           exp_iterate(ev, half, z, IterBranch::upper, CutSide::above);
}

enum class AgreementKind { d1af, d1fa, d3af, d3fa, dq1, dq3 };

inline std::string_view to_string(AgreementKind k)
{
    switch (k) {
        case AgreementKind::d1af: return "d1af";
        case AgreementKind::d1fa: return "d1fa";
        case AgreementKind::d3af: return "d3af";
        case AgreementKind::d3fa: return "d3fa";
        case AgreementKind::dq1: return "dq1";
        case AgreementKind::dq3: return "dq3";
    }
    return "unknown";
}

// value is empty when a constituent evaluation failed.
struct AgreementResult {
    std::optional<double> value;
    errc error_code = errc::domain;
};

// lg |(X + Y) / (X - Y)| for the pair (X, Y) selected by kind, clipped at ceiling.
inline double agreement_value(const ComplexD &x, const ComplexD &y, double ceiling)
{
    const double num = abs(x + y);
    const double den = abs(x - y);
    if (den == 0) {
        return ceiling;
    }
    return std::min(std::log10(num / den), ceiling);
}

inline AgreementResult agreement(AgreementKind kind, std::complex<double> zs, const Evaluator<double> &ev,
                                 double ceiling = 16, CutSide side = CutSide::above)
{
    const ComplexD z(zs.real(), zs.imag());
    const ComplexD half(0.5, 0.0);
    try {
        ComplexD x;
        ComplexD y = z;
        switch (kind) {
            case AgreementKind::d1af: x = ev.A1(ev.F1(z, side), side); break;
            case AgreementKind::d1fa: x = ev.F1(ev.A1(z, side), side); break;
            case AgreementKind::d3af: x = ev.A3(ev.F3(z), side); break;
            case AgreementKind::d3fa: x = ev.F3(ev.A3(z, side)); break;
            case AgreementKind::dq1:
            case AgreementKind::dq3: {
                const IterBranch b = kind == AgreementKind::dq1 ? IterBranch::lower : IterBranch::upper;
                x = exp_iterate(ev, half, exp_iterate(ev, half, z, b, side), b, side);
                y = ev.exp_b(z);
                break;
            }
        }
        if (!is_finite(x)) {
            return {std::nullopt, errc::overflow};
        }
        return {agreement_value(x, y, ceiling), errc::domain};
    } catch (const error &e) {
        return {std::nullopt, e.code()};
    }
}

struct GridSpec {
    double x_min = -1, x_max = 1, y_min = -1, y_max = 1;
    long nx = 2, ny = 2;
    CutSide cut_side = CutSide::above;

    void validate() const
    {
        if (!(x_min < x_max) || !(y_min < y_max)) {
            throw error(errc::domain, "grid bounds must satisfy min < max");
        }
        if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) || !std::isfinite(y_max)) {
            throw error(errc::domain, "grid bounds must be finite");
        }
        if (nx < 2 || ny < 2) {
            throw error(errc::domain, "grid resolution must be at least 2 x 2");
        }
    }

    [[nodiscard]] double x(long i) const { return x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(nx - 1); }
    [[nodiscard]] double y(long j) const { return y_min + (y_max - y_min) * static_cast<double>(j) / static_cast<double>(ny - 1); }
};

enum class GridFunction { F1, F3, A1, A3, expc };

// Category written to the err column; empty for a valid sample.
inline std::string_view grid_error_label(errc e)
{
    switch (e) {
        case errc::cut:
        case errc::branch: return "cut";
        case errc::overflow:
        case errc::singularity: return "overflow";
        default: return "nonconv";
    }
}

struct GridCell {
    double x = 0;
    double y = 0;
    std::complex<double> value{0, 0};
    std::optional<errc> err;
};

struct GridOptions {
    std::complex<double> c{0.5, 0};
    IterBranch branch = IterBranch::automatic;
    unsigned threads = 0; // 0: hardware concurrency
};

namespace detail
{

// Runs body(index) for index in [0, count) on a few threads; each index is
// written by exactly one worker, so the output order never depends on
// scheduling.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body &&body)
{
    unsigned n = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
    n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(count, 1)));
    if (n <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                body(i);
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
}

} // namespace detail

// Row-major samples: y from y_min to y_max, x fastest.
inline std::vector<GridCell> map_grid(GridFunction fn, const GridSpec &grid, const Evaluator<double> &ev,
                                      const GridOptions &opt = {})
{
    grid.validate();
    const auto total = static_cast<std::size_t>(grid.nx * grid.ny);
    std::vector<GridCell> cells(total);
    const ComplexD c(opt.c.real(), opt.c.imag());
    detail::parallel_for(total, opt.threads, [&](std::size_t k) {
        GridCell &cell = cells[k];
        cell.x = grid.x(static_cast<long>(k % static_cast<std::size_t>(grid.nx)));
        cell.y = grid.y(static_cast<long>(k / static_cast<std::size_t>(grid.nx)));
        const ComplexD z(cell.x, cell.y);
        try {
            ComplexD v;
            switch (fn) {
                case GridFunction::F1: v = ev.F1(z, grid.cut_side); break;
                case GridFunction::F3: v = ev.F3(z); break;
                case GridFunction::A1: v = ev.A1(z, CutSide::none); break;
                case GridFunction::A3: v = ev.A3(z, CutSide::none); break;
                case GridFunction::expc: v = exp_iterate(ev, c, z, opt.branch, grid.cut_side); break;
            }
            if (!is_finite(v)) {
                cell.err = errc::overflow;
            } else {
                cell.value = to_std(v);
            }
        } catch (const error &e) {
            cell.err = e.code();
        }
    });
    return cells;
}

struct CheckSummary {
    std::size_t cells = 0;
    std::size_t finite = 0;
    std::size_t unavailable = 0;
    double min = 0;
    double median = 0;
    double fraction_ge_14 = 0; // among finite cells
    double fraction_ge_12 = 0;
    std::size_t below_1 = 0;
};

struct CheckCell {
    double x = 0;
    double y = 0;
    AgreementResult d;
};

inline std::vector<CheckCell> check_grid(AgreementKind kind, const GridSpec &grid, const Evaluator<double> &ev,
                                         double ceiling = 16, unsigned threads = 0)
{
    grid.validate();
    const auto total = static_cast<std::size_t>(grid.nx * grid.ny);
    std::vector<CheckCell> cells(total);
    detail::parallel_for(total, threads, [&](std::size_t k) {
        CheckCell &cell = cells[k];
        cell.x = grid.x(static_cast<long>(k % static_cast<std::size_t>(grid.nx)));
        cell.y = grid.y(static_cast<long>(k / static_cast<std::size_t>(grid.nx)));
        cell.d = agreement(kind, {cell.x, cell.y}, ev, ceiling, grid.cut_side);
    });
    return cells;
}

inline CheckSummary summarize(const std::vector<CheckCell> &cells)
{
    CheckSummary s;
    s.cells = cells.size();
    std::vector<double> v;
    for (const auto &c : cells) {
        if (c.d.value) {
            v.push_back(*c.d.value);
        } else {
            ++s.unavailable;
        }
    }
    s.finite = v.size();
    if (v.empty()) {
        return s;
    }
    std::sort(v.begin(), v.end());
    s.min = v.front();
    s.median = v.size() % 2 == 1 ? v[v.size() / 2] : (v[v.size() / 2 - 1] + v[v.size() / 2]) / 2;
    const auto count_ge = [&](double t) {
        return static_cast<double>(v.end() - std::lower_bound(v.begin(), v.end(), t)) / static_cast<double>(v.size());
    };
    s.fraction_ge_14 = count_ge(14);
    s.fraction_ge_12 = count_ge(12);
    s.below_1 = static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), 1.0) - v.begin());
    return s;
}

} // namespace tetra

#endif
