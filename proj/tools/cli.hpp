#ifndef TETRA_TOOLS_CLI_HPP
#define TETRA_TOOLS_CLI_HPP

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <tetra/serialize.hpp>
#include <tetra/tetra.hpp>

namespace tetra::cli
{

enum exit_code : int { ok = 0, eval_failure = 1, calibration_failure = 2, io_failure = 3 };

struct CliConfig {
    long precision_bits = 53;
    bool precision_given = false;
    std::string format; // empty: the command's default
    std::string out;    // empty: standard output
    std::string cut_side;
    std::string branch;
    std::string c;
    bool no_cache = false;
    bool paper_settings = false;
    std::optional<long> abel_terms;
    std::optional<long> superexp_terms;
    std::optional<double> disk_radius;
    std::optional<double> re_threshold;
    std::optional<long> max_recursion;
    unsigned threads = 0;
};

inline int exit_for(errc e)
{
    switch (e) {
        case errc::calibration: return calibration_failure;
        case errc::io: return io_failure;
        default: return eval_failure;
    }
}

inline std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        parts.push_back(cur);
    }
    if (!s.empty() && s.back() == sep) {
        parts.emplace_back();
    }
    return parts;
}

inline double parse_double(const std::string &s)
{
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception &) {
        throw error(errc::domain, "not a number: '" + s + "'");
    }
    if (used != s.size()) {
        throw error(errc::domain, "not a number: '" + s + "'");
    }
    return v;
}

inline long parse_long(const std::string &s)
{
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(s, &used);
    } catch (const std::exception &) {
        throw error(errc::domain, "not an integer: '" + s + "'");
    }
    if (used != s.size()) {
        throw error(errc::domain, "not an integer: '" + s + "'");
    }
    return v;
}

// "re" or "re,im".
inline ComplexMp parse_complex_mp(const std::string &s, long bits)
{
    const auto parts = split(s, ',');
    if (parts.empty() || parts.size() > 2) {
        throw error(errc::domain, "expected re[,im], got '" + s + "'");
    }
    auto rd = [&](const std::string &p) {
        parse_double(p); // syntax check
        return MpReal::from_string(p, bits);
    };
    return {rd(parts[0]), parts.size() == 2 ? rd(parts[1]) : MpReal(0, bits)};
}

inline std::complex<double> parse_complex(const std::string &s)
{
    const auto parts = split(s, ',');
    if (parts.empty() || parts.size() > 2) {
        throw error(errc::domain, "expected re[,im], got '" + s + "'");
    }
    return {parse_double(parts[0]), parts.size() == 2 ? parse_double(parts[1]) : 0.0};
}

// Comma separated entries, each "n" or an inclusive range "a:b".
inline std::vector<long> parse_n_list(const std::string &s)
{
    std::vector<long> out;
    if (s.empty()) {
        return out;
    }
    for (const auto &item : split(s, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            out.push_back(parse_long(item));
            continue;
        }
        const long a = parse_long(item.substr(0, colon));
        const long b = parse_long(item.substr(colon + 1));
        if (b < a) {
            throw error(errc::domain, "empty range '" + item + "'");
        }
        for (long n = a; n <= b; ++n) {
            out.push_back(n);
        }
    }
    return out;
}

inline std::pair<double, double> parse_range(const std::string &s)
{
    const auto colon = s.find(':');
    if (colon == std::string::npos) {
        throw error(errc::domain, "expected a:b, got '" + s + "'");
    }
    return {parse_double(s.substr(0, colon)), parse_double(s.substr(colon + 1))};
}

inline CutSide parse_cut_side(const std::string &s, CutSide fallback)
{
    if (s.empty()) {
        return fallback;
    }
    return s == "above" ? CutSide::above : CutSide::below;
}

inline IterBranch parse_branch(const std::string &s)
{
    if (s == "lower") {
        return IterBranch::lower;
    }
    if (s == "upper") {
        return IterBranch::upper;
    }
    return IterBranch::automatic;
}

inline EvalContext make_context(const CliConfig &cfg)
{
    EvalContext ctx = cfg.paper_settings ? EvalContext::paper_settings() : EvalContext::for_precision(cfg.precision_bits);
    ctx.precision.mantissa_bits = cfg.precision_bits;
    if (cfg.abel_terms) {
        ctx.abel_tail_terms = *cfg.abel_terms;
        ctx.abel2_tail_terms = *cfg.abel_terms + 1;
    }
    if (cfg.superexp_terms) {
        ctx.superexp_terms = *cfg.superexp_terms;
    }
    if (cfg.disk_radius) {
        ctx.abel_disk_radius = *cfg.disk_radius;
    }
    if (cfg.re_threshold) {
        ctx.superexp_re_threshold = *cfg.re_threshold;
    }
    if (cfg.max_recursion) {
        ctx.max_recursion = *cfg.max_recursion;
    }
    ctx.validate();
    return ctx;
}

// TETRA_CACHE_DIR, else $XDG_CACHE_HOME/tetra, else ~/.cache/tetra.
inline std::optional<std::filesystem::path> cache_dir()
{
    if (const char *d = std::getenv("TETRA_CACHE_DIR"); d != nullptr && *d != '\0') {
        return std::filesystem::path(d);
    }
    if (const char *d = std::getenv("XDG_CACHE_HOME"); d != nullptr && *d != '\0') {
        return std::filesystem::path(d) / "tetra";
    }
    if (const char *d = std::getenv("HOME"); d != nullptr && *d != '\0') {
        return std::filesystem::path(d) / ".cache" / "tetra";
    }
    return std::nullopt;
}

inline std::optional<std::filesystem::path> cache_file(long bits)
{
    auto dir = cache_dir();
    if (!dir) {
        return std::nullopt;
    }
    return *dir / ("calibration-" + std::to_string(bits) + ".json");
}

// Cached constants for bits, calibrating (and caching) on a miss. A broken
// or unwritable cache only costs a recalibration.
inline CalibrationConstants obtain_constants(long bits, bool use_cache)
{
    const auto file = cache_file(bits);
    if (use_cache && file) {
        std::ifstream in(*file);
        if (in) {
            try {
                CalibrationConstants cc = constants_from_json(nlohmann::json::parse(in));
                if (cc.bits == bits) {
                    return cc;
                }
            } catch (const std::exception &) {
            }
        }
    }
    CalibrationConstants cc = calibrate(EvalContext::for_precision(bits));
    if (file) {
        std::error_code ec;
        std::filesystem::create_directories(file->parent_path(), ec);
        const auto tmp = file->string() + ".tmp";
        std::ofstream out(tmp);
        if (out << to_json(cc).dump(2) << '\n') {
            out.close();
            std::filesystem::rename(tmp, *file, ec);
        }
    }
    return cc;
}

// Destination chosen by --out. Opening happens before any work so that an
// unwritable path fails fast.
class Sink
{
public:
    Sink(const std::string &path, std::ostream &fallback) : path_(path), fallback_(fallback)
    {
        if (!path.empty()) {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) {
                throw error(errc::io, "cannot open '" + path + "' for writing");
            }
        }
    }

    std::ostream &stream() { return path_.empty() ? fallback_ : file_; }
    [[nodiscard]] bool to_file() const { return !path_.empty(); }

    void finish()
    {
        if (path_.empty()) {
            fallback_.flush();
            return;
        }
        file_.close();
        if (!file_) {
            throw error(errc::io, "failed writing '" + path_ + "'");
        }
    }

private:
    std::string path_;
    std::ostream &fallback_;
    std::ofstream file_;
};

inline void write_constants(std::ostream &out, const CalibrationConstants &cc, const std::string &format,
                            const std::optional<nlohmann::json> &series)
{
    if (format == "json") {
        nlohmann::json j = to_json(cc);
        j["steps_x1"] = cc.steps_x1;
        j["steps_x3"] = cc.steps_x3;
        if (series) {
            j["series"] = *series;
        }
        out << j.dump(2) << '\n';
        return;
    }
    const std::vector<std::pair<std::string, std::string>> rows = {
        {"precision_bits", std::to_string(cc.bits)}, {"x1", format_mp(cc.x1)},
        {"x3", format_mp(cc.x3)},                    {"a1_norm", format_mp(cc.a1_norm)},
        {"a3_norm", format_mp(cc.a3_norm)},          {"period_t1_im", format_mp(cc.period_t1.im)},
    };
    if (format == "csv") {
        out << "name,value\n";
        for (const auto &[k, v] : rows) {
            out << k << ',' << v << '\n';
        }
    } else {
        for (const auto &[k, v] : rows) {
            out << k << ' ' << v << '\n';
        }
    }
    if (series) {
        out << series->dump() << '\n';
    }
}

inline nlohmann::json series_dump(const EvalContext &ctx)
{
    const auto n = static_cast<std::size_t>(std::max(ctx.abel_tail_terms, ctx.abel2_tail_terms));
    const PowerSeries base = exp_minus_one_series(n + 4);
    return {
        {"iterative_logarithm", to_json(iterative_logarithm(base, n + 3))},
        {"abel", to_json(abel_expansion(base, n))},
        {"superexp", to_json(superexp_polynomials(static_cast<std::size_t>(ctx.superexp_terms)))},
    };
}

struct EvalArgs {
    std::string fn;
    std::string re = "0";
    std::string im = "0";
};

template <class R>
Complex<R> eval_point(const Evaluator<R> &ev, const EvalArgs &a, const Complex<R> &z, const CliConfig &cfg)
{
    const CutSide side = parse_cut_side(cfg.cut_side, CutSide::none);
    if (a.fn == "F1") {
        return ev.F1(z, side);
    }
    if (a.fn == "F3") {
        return ev.F3(z);
    }
    if (a.fn == "A1") {
        return ev.A1(z, side);
    }
    if (a.fn == "A3") {
        return ev.A3(z, side);
    }
    if (cfg.c.empty()) {
        throw error(errc::domain, "expc needs --c");
    }
    const ComplexMp c = parse_complex_mp(cfg.c, std::max(cfg.precision_bits, 64L));
    Complex<R> cr;
    if constexpr (std::is_same_v<R, double>) {
        cr = ComplexD(c.re.to_double(), c.im.to_double());
    } else {
        cr = ComplexMp(MpReal(c.re, cfg.precision_bits), MpReal(c.im, cfg.precision_bits));
    }
    return exp_iterate(ev, cr, z, parse_branch(cfg.branch), side);
}

inline int cmd_eval(const EvalArgs &a, const CliConfig &cfg, std::ostream &out, std::ostream &err)
{
    const std::string format = cfg.format.empty() ? "text" : cfg.format;
    Sink sink(cfg.out, out);
    std::string re;
    std::string im;
    std::optional<error> failure;
    try {
        parse_double(a.re);
        parse_double(a.im);
        const EvalContext ctx = make_context(cfg);
        const CalibrationConstants cc = obtain_constants(cfg.precision_bits, !cfg.no_cache);
        if (cfg.precision_bits <= 53) {
            const Evaluator<double> ev(ctx, cc);
            const ComplexD v = eval_point(ev, a, ComplexD(parse_double(a.re), parse_double(a.im)), cfg);
            re = format_double(v.re);
            im = format_double(v.im);
        } else {
            precision_scope scope(cfg.precision_bits);
            const Evaluator<MpReal> ev(ctx, cc);
            const ComplexMp z(MpReal::from_string(a.re, cfg.precision_bits), MpReal::from_string(a.im, cfg.precision_bits));
            const ComplexMp v = eval_point(ev, a, z, cfg);
            re = format_mp(v.re);
            im = format_mp(v.im);
        }
    } catch (const error &e) {
        if (e.code() == errc::calibration || e.code() == errc::io) {
            throw;
        }
        failure = e;
    }

    std::ostream &o = sink.stream();
    const std::string code = failure ? std::string(to_string(failure->code())) : "";
    if (format == "json") {
        nlohmann::json j = {{"fn", a.fn}, {"z", {a.re, a.im}}};
        j["re"] = failure ? nlohmann::json() : nlohmann::json(re);
        j["im"] = failure ? nlohmann::json() : nlohmann::json(im);
        j["err"] = failure ? nlohmann::json(code) : nlohmann::json();
        o << j.dump(2) << '\n';
    } else if (format == "csv") {
        o << "re,im,err\n" << re << ',' << im << ',' << code << '\n';
    } else if (failure) {
        o << "err=" << code << '\n';
    } else {
        o << re << ' ' << im << '\n';
    }
    sink.finish();
    if (failure) {
        err << "error (" << code << "): " << failure->what() << '\n';
        return eval_failure;
    }
    return ok;
}

struct CalibrateArgs {
    std::optional<double> seed_x1;
    std::optional<double> seed_x3;
    bool dump_series = false;
};

inline int cmd_calibrate(const CalibrateArgs &a, const CliConfig &cfg, std::ostream &out, std::ostream &)
{
    const std::string format = cfg.format.empty() ? "text" : cfg.format;
    Sink sink(cfg.out, out);
    const EvalContext ctx = make_context(cfg);
    CalibrationConstants cc;
    if (a.seed_x1 || a.seed_x3) {
        CalibrationSeeds seeds;
        seeds.x1 = a.seed_x1.value_or(seeds.x1);
        seeds.x3 = a.seed_x3.value_or(seeds.x3);
        cc = calibrate(ctx, seeds);
    } else {
        cc = obtain_constants(cfg.precision_bits, !cfg.no_cache);
    }
    std::optional<nlohmann::json> series;
    if (a.dump_series) {
        series = series_dump(ctx);
    }
    write_constants(sink.stream(), cc, format, series);
    sink.finish();
    return ok;
}

struct TableCliArgs {
    std::string method;
    std::string n;
    std::optional<std::string> z;
    std::optional<std::string> u;
    std::optional<std::string> reference;
    std::optional<std::string> offset;
    std::optional<long> max_iterations;
};

inline int cmd_table(const TableCliArgs &a, const CliConfig &cfg, std::ostream &out, std::ostream &err)
{
    const std::string format = cfg.format.empty() ? "csv" : cfg.format;
    const long bits = cfg.precision_given ? cfg.precision_bits : 256;
    const std::vector<long> ns = parse_n_list(a.n);
    Sink sink(cfg.out, out);

    LimitMethod method = LimitMethod::levy;
    std::string z = "-1";
    std::string u = "1";
    std::optional<std::string> reference;
    std::string offset = "0";
    if (a.method == "fatou") {
        method = LimitMethod::fatou1;
        reference = "0";
        offset = "1";
    } else if (a.method == "fatou1") {
        method = LimitMethod::fatou1;
    } else if (a.method == "fatou2") {
        method = LimitMethod::fatou2;
        z = "10";
    } else if (a.method == "newton") {
        method = LimitMethod::newton;
        z = "1";
        u = "-1.4223536677333";
    }
    TableArgs targs;
    targs.z = parse_complex_mp(a.z.value_or(z), bits);
    targs.u = parse_complex_mp(a.u.value_or(u), bits);
    if (a.reference || reference) {
        targs.reference = parse_complex_mp(a.reference ? *a.reference : *reference, bits);
    }
    targs.offset = parse_complex_mp(a.offset.value_or(offset), bits).re;

    PrecisionConfig pc;
    pc.mantissa_bits = bits;
    if (a.max_iterations) {
        pc.max_iterations = *a.max_iterations;
    }
    if (!ns.empty()) {
        pc.series_terms = std::max(pc.series_terms, ns.back());
    }
    precision_scope scope(bits);
    const auto rows = convergence_table(method, targs, ns, pc);

    auto printed = [&](const ConvergenceRecord &r) {
        std::string p = printed_value(method, r.n, r.value.re);
        if (!r.value.im.is_zero()) {
            const std::string ip = printed_value(method, r.n, abs(r.value.im));
            p += (r.value.im.sign() < 0 ? "-" : "+") + ip + "i";
        }
        return p;
    };

    std::ostream &o = sink.stream();
    bool any_failed = false;
    if (format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto &r : rows) {
            nlohmann::json j = {{"method", a.method}, {"n", r.n}, {"warning", r.warning}};
            j["value"] = r.failed ? nlohmann::json() : nlohmann::json(format_complex(r.value));
            j["printed"] = r.failed ? nlohmann::json() : nlohmann::json(printed(r));
            j["err"] = r.failed ? nlohmann::json(std::string(to_string(r.error_code))) : nlohmann::json();
            arr.push_back(j);
        }
        o << arr.dump(2) << '\n';
    } else if (format == "csv") {
        o << "method,n,value,printed\n";
        for (const auto &r : rows) {
            o << a.method << ',' << r.n << ',';
            if (r.failed) {
                o << ",err:" << to_string(r.error_code) << '\n';
            } else {
                o << format_complex(r.value) << ',' << printed(r) << '\n';
            }
        }
    } else {
        for (const auto &r : rows) {
            o << r.n << ' ' << (r.failed ? "err:" + std::string(to_string(r.error_code)) : printed(r)) << '\n';
        }
    }
    for (const auto &r : rows) {
        if (r.failed) {
            any_failed = true;
            err << "n=" << r.n << ": " << r.message << '\n';
        } else if (r.warning) {
            err << "n=" << r.n << ": warning: digits lost to cancellation\n";
        }
    }
    sink.finish();
    return any_failed ? eval_failure : ok;
}

struct GridCliArgs {
    std::string target;
    std::string x = "-2:6";
    std::string y = "-6:6";
    long nx = 101;
    long ny = 101;
    double ceiling = 16;
};

inline GridSpec make_grid(const GridCliArgs &a, const CliConfig &cfg)
{
    GridSpec g;
    std::tie(g.x_min, g.x_max) = parse_range(a.x);
    std::tie(g.y_min, g.y_max) = parse_range(a.y);
    g.nx = a.nx;
    g.ny = a.ny;
    g.cut_side = parse_cut_side(cfg.cut_side, CutSide::above);
    g.validate();
    return g;
}

// Grids are always sampled in double precision.
inline int cmd_map(const GridCliArgs &a, const CliConfig &cfg, std::ostream &out, std::ostream &)
{
    const std::string format = cfg.format.empty() ? "csv" : cfg.format;
    const GridSpec grid = make_grid(a, cfg);
    GridFunction fn = GridFunction::F1;
    if (a.target == "F3") {
        fn = GridFunction::F3;
    } else if (a.target == "A1") {
        fn = GridFunction::A1;
    } else if (a.target == "A3") {
        fn = GridFunction::A3;
    } else if (a.target == "expc") {
        fn = GridFunction::expc;
        if (cfg.c.empty()) {
            throw error(errc::domain, "expc needs --c");
        }
    }
    Sink sink(cfg.out, out);
    CliConfig dcfg = cfg;
    dcfg.precision_bits = 53;
    const Evaluator<double> ev(make_context(dcfg), obtain_constants(53, !cfg.no_cache));
    GridOptions opt;
    if (!cfg.c.empty()) {
        opt.c = parse_complex(cfg.c);
    }
    opt.branch = parse_branch(cfg.branch);
    opt.threads = cfg.threads;
    const auto cells = map_grid(fn, grid, ev, opt);

    std::ostream &o = sink.stream();
    if (format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto &c : cells) {
            nlohmann::json j = {{"x", c.x}, {"y", c.y}};
            j["re"] = c.err ? nlohmann::json() : nlohmann::json(c.value.real());
            j["im"] = c.err ? nlohmann::json() : nlohmann::json(c.value.imag());
            j["err"] = c.err ? nlohmann::json(std::string(grid_error_label(*c.err))) : nlohmann::json();
            arr.push_back(j);
        }
        o << nlohmann::json{{"function", a.target}, {"nx", grid.nx}, {"ny", grid.ny}, {"cells", arr}}.dump() << '\n';
    } else {
        o << "x,y,re,im,err\n";
        for (const auto &c : cells) {
            o << format_double(c.x) << ',' << format_double(c.y) << ',';
            if (c.err) {
                o << ",," << grid_error_label(*c.err) << '\n';
            } else {
                o << format_double(c.value.real()) << ',' << format_double(c.value.imag()) << ",\n";
            }
        }
    }
    sink.finish();
    return ok;
}

inline nlohmann::json summary_json(const CheckSummary &s)
{
    return {
        {"cells", s.cells},
        {"finite", s.finite},
        {"unavailable", s.unavailable},
        {"min", s.min},
        {"median", s.median},
        {"fraction_ge_14", s.fraction_ge_14},
        {"fraction_ge_12", s.fraction_ge_12},
        {"below_1", s.below_1},
    };
}

inline void write_summary_text(std::ostream &o, const CheckSummary &s)
{
    o << "cells " << s.cells << '\n'
      << "finite " << s.finite << '\n'
      << "unavailable " << s.unavailable << '\n'
      << "min " << format_double(s.min) << '\n'
      << "median " << format_double(s.median) << '\n'
      << "fraction_ge_14 " << format_double(s.fraction_ge_14) << '\n'
      << "fraction_ge_12 " << format_double(s.fraction_ge_12) << '\n'
      << "below_1 " << s.below_1 << '\n';
}

// csv: grid to --out (or stdout) and the summary to stdout (or stderr when
// the grid already went to stdout). text: summary only.
inline int cmd_check(const GridCliArgs &a, const CliConfig &cfg, std::ostream &out, std::ostream &err)
{
    const std::string format = cfg.format.empty() ? "csv" : cfg.format;
    AgreementKind kind = AgreementKind::d1fa;
    const std::pair<const char *, AgreementKind> kinds[] = {
        {"d1af", AgreementKind::d1af}, {"d1fa", AgreementKind::d1fa}, {"d3af", AgreementKind::d3af},
        {"d3fa", AgreementKind::d3fa}, {"dq1", AgreementKind::dq1},   {"dq3", AgreementKind::dq3},
    };
    for (const auto &[name, k] : kinds) {
        if (a.target == name) {
            kind = k;
        }
    }
    const GridSpec grid = make_grid(a, cfg);
    Sink sink(cfg.out, out);
    CliConfig dcfg = cfg;
    dcfg.precision_bits = 53;
    const Evaluator<double> ev(make_context(dcfg), obtain_constants(53, !cfg.no_cache));
    const auto cells = check_grid(kind, grid, ev, a.ceiling, cfg.threads);
    const CheckSummary s = summarize(cells);

    std::ostream &o = sink.stream();
    if (format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto &c : cells) {
            nlohmann::json j = {{"x", c.x}, {"y", c.y}};
            j["d"] = c.d.value ? nlohmann::json(*c.d.value) : nlohmann::json();
            j["err"] = c.d.value ? nlohmann::json() : nlohmann::json(std::string(grid_error_label(c.d.error_code)));
            arr.push_back(j);
        }
        o << nlohmann::json{{"kind", a.target}, {"cells", arr}, {"summary", summary_json(s)}}.dump() << '\n';
    } else if (format == "csv") {
        o << "x,y,d,err\n";
        for (const auto &c : cells) {
            o << format_double(c.x) << ',' << format_double(c.y) << ',';
            if (c.d.value) {
                o << format_double(*c.d.value) << ",\n";
            } else {
                o << ',' << grid_error_label(c.d.error_code) << '\n';
            }
        }
        write_summary_text(sink.to_file() ? out : err, s);
    } else {
        write_summary_text(o, s);
    }
    sink.finish();
    return ok;
}

// Entry point shared by main() and the tests.
inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Iterates and super-exponentials of exp(z/e)", "tetra"};
    app.require_subcommand(1);
    CliConfig cfg;

    auto common = [&](CLI::App *sub) {
        sub->add_option("--precision-bits", cfg.precision_bits, "mantissa bits (>= 53)")
            ->check(CLI::Range(53L, 1L << 20))
            ->each([&](const std::string &) { cfg.precision_given = true; });
        sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"csv", "json", "text"}));
        sub->add_option("--out", cfg.out, "output file (default: standard output)");
        sub->add_option("--cut-side", cfg.cut_side, "side of a cut to approach from")
            ->check(CLI::IsMember({"above", "below"}));
        sub->add_option("--branch", cfg.branch, "iterate branch")->check(CLI::IsMember({"lower", "upper"}));
        sub->add_option("--c", cfg.c, "iteration count re[,im]");
        sub->add_flag("--no-cache", cfg.no_cache, "recompute calibration constants");
        sub->add_flag("--paper-settings", cfg.paper_settings, "N = 15, M = 9, radius 1/2, threshold 4");
        sub->add_option("--abel-terms", cfg.abel_terms, "tail terms of the Abel expansion")->check(CLI::PositiveNumber);
        sub->add_option("--superexp-terms", cfg.superexp_terms, "log-polynomials of the asymptotic")
            ->check(CLI::PositiveNumber);
        sub->add_option("--disk-radius", cfg.disk_radius, "radius around e where the Abel expansion is used")
            ->check(CLI::PositiveNumber);
        sub->add_option("--re-threshold", cfg.re_threshold, "|Re z| beyond which the asymptotic is used")
            ->check(CLI::PositiveNumber);
        sub->add_option("--max-recursion", cfg.max_recursion, "recursion cap per evaluation")
            ->check(CLI::PositiveNumber);
        sub->add_option("--threads", cfg.threads, "worker threads for grids (0: all cores)");
    };

    std::function<int()> action;

    CalibrateArgs cal;
    auto *c_cal = app.add_subcommand("calibrate", "compute x1, x3 and the Abel normalizations");
    common(c_cal);
    c_cal->add_option("--seed-x1", cal.seed_x1, "secant seed for x1");
    c_cal->add_option("--seed-x3", cal.seed_x3, "secant seed for x3");
    c_cal->add_flag("--dump-series", cal.dump_series, "include the exact series coefficients");
    c_cal->callback([&] { action = [&] { return cmd_calibrate(cal, cfg, out, err); }; });

    EvalArgs ev;
    auto *c_eval = app.add_subcommand("eval", "evaluate one function at one point");
    common(c_eval);
    c_eval->add_option("fn", ev.fn, "F1, F3, A1, A3 or expc")
        ->required()
        ->check(CLI::IsMember({"F1", "F3", "A1", "A3", "expc"}));
    c_eval->add_option("re", ev.re, "real part")->required();
    c_eval->add_option("im", ev.im, "imaginary part");
    c_eval->callback([&] { action = [&] { return cmd_eval(ev, cfg, out, err); }; });

    TableCliArgs tab;
    auto *c_tab = app.add_subcommand("table", "convergence table of a limit formula (default 256 bits)");
    common(c_tab);
    c_tab->add_option("method", tab.method, "levy, fatou, fatou1, fatou2 or newton")
        ->required()
        ->check(CLI::IsMember({"levy", "fatou", "fatou1", "fatou2", "newton"}));
    c_tab->add_option("--n", tab.n, "n values: a:b ranges and single values, comma separated")->required();
    c_tab->add_option("--z", tab.z, "start point re[,im]");
    c_tab->add_option("--u", tab.u, "levy: second point; newton: t");
    c_tab->add_option("--reference", tab.reference, "fatou: point whose value is subtracted");
    c_tab->add_option("--offset", tab.offset, "fatou: constant subtracted as well");
    c_tab->add_option("--max-iterations", tab.max_iterations, "longest orbit allowed")->check(CLI::PositiveNumber);
    c_tab->callback([&] { action = [&] { return cmd_table(tab, cfg, out, err); }; });

    GridCliArgs grid;
    auto grid_flags = [&](CLI::App *sub) {
        sub->add_option("--x", grid.x, "real range a:b");
        sub->add_option("--y", grid.y, "imaginary range a:b");
        sub->add_option("--nx", grid.nx, "samples along x");
        sub->add_option("--ny", grid.ny, "samples along y");
    };
    auto *c_map = app.add_subcommand("map", "sample a function on a grid (double precision)");
    common(c_map);
    grid_flags(c_map);
    c_map->add_option("fn", grid.target, "F1, F3, A1, A3 or expc")
        ->required()
        ->check(CLI::IsMember({"F1", "F3", "A1", "A3", "expc"}));
    c_map->callback([&] { action = [&] { return cmd_map(grid, cfg, out, err); }; });

    auto *c_check = app.add_subcommand("check", "agreement diagnostic D on a grid (double precision)");
    common(c_check);
    grid_flags(c_check);
    c_check->add_option("kind", grid.target, "d1af, d1fa, d3af, d3fa, dq1 or dq3")
        ->required()
        ->check(CLI::IsMember({"d1af", "d1fa", "d3af", "d3fa", "dq1", "dq3"}));
    c_check->add_option("--ceiling", grid.ceiling, "clip D at this value");
    c_check->callback([&] { action = [&] { return cmd_check(grid, cfg, out, err); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError &e) {
        err << e.what() << '\n';
        for (auto *sub : app.get_subcommands()) {
            err << sub->help();
        }
        return eval_failure;
    }

    try {
        return action();
    } catch (const error &e) {
        err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
        return exit_for(e.code());
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return eval_failure;
    }
}

} // namespace tetra::cli

#endif
