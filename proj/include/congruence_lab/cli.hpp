#pragma once

/// Command-line front end: parses flags and an optional key=value config
/// file into a RunConfig, dispatches to the library and writes a CSV or JSON
/// report. Exit codes: 0 success, 2 invalid input, 1 internal error.

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "congruence_lab/arith.hpp"
#include "congruence_lab/averaged.hpp"
#include "congruence_lab/congruence.hpp"
#include "congruence_lab/dp6.hpp"
#include "congruence_lab/gauss_sum.hpp"
#include "congruence_lab/report.hpp"
#include "congruence_lab/sawtooth.hpp"

namespace congruence_lab {

struct ParamSpec {
    std::string name;
    std::string fallback;  // empty: required
    std::string help;
};

/// Parameters accepted by each command, in flag order.
inline const std::map<std::string, std::vector<ParamSpec>>& command_params() {
    static const std::map<std::string, std::vector<ParamSpec>> table = {
        {"gauss", {{"s", "", "coefficient s"}, {"t", "", "linear coefficient t"}, {"u", "", "modulus u"}}},
        {"count",
         {{"a", "", "coefficient of x"},
          {"b", "", "coefficient of y^f"},
          {"q", "", "modulus"},
          {"X", "", "x range"},
          {"Y", "", "y range"},
          {"e", "1", "exponent of x"},
          {"f", "2", "exponent of y"}}},
        {"thm1-scan",
         {{"q-min", "2", "smallest modulus"},
          {"q-max", "100", "largest modulus"},
          {"moduli", "primes", "primes or all"},
          {"a", "1", "coefficient of x"},
          {"b", "1", "coefficient of y^2"},
          {"X-scale", "1", "X = X-scale * q^X-pow"},
          {"X-pow", "1", "exponent in the X rule"},
          {"Y-scale", "1", "Y = Y-scale * q^Y-pow"},
          {"Y-pow", "1", "exponent in the Y rule"}}},
        {"vaaler",
         {{"H", "", "polynomial degree"},
          {"points", "100000", "random points in [0, 1)"},
          {"x", "none", "evaluate a single point instead"}}},
        {"avg-scan",
         {{"l", "1", "exponent of u"},
          {"m", "1", "exponent of v"},
          {"r", "1", "coefficient r"},
          {"s", "1", "coefficient s"},
          {"t", "1", "modulus factor t"},
          {"U", "1", "u in (U, 2U]"},
          {"V", "1", "v in (V, 2V]"},
          {"W", "1", "w in (W, 2W]"},
          {"y0", "0", "J = (y0, y0 + Y]"},
          {"Y", "10", "length of J"},
          {"X", "1", "interval width f+ - f-"},
          {"slope-u", "0", "du slope shared by both boundaries"},
          {"slope-v", "0", "dv slope shared by both boundaries"},
          {"slope-y", "0", "dy slope shared by both boundaries"},
          {"scheme", "all-ones", "all-ones, factorized or joint"},
          {"H", "auto", "truncation parameter (auto: (tW)^{1+eps}/X)"},
          {"epsilon", "0.1", "epsilon in the error budget"},
          {"random", "0", "if positive, that many seeded random families instead"}}},
        {"dp6-enumerate", {{"B", "", "height budget"}, {"t", "12", "prime-factor bound"}}},
        {"dp6-sieve",
         {{"B", "", "height budget"},
          {"q", "auto", "prime in (B^{1/3}/2, B^{1/3}] (auto: the smallest)"},
          {"tau", "0.4", "level of distribution"},
          {"c2", "1", "log power in the level"},
          {"c3", "2", "constant in the remainder bound"},
          {"mu", "4", "support exponent"},
          {"z-max", "10000", "largest prime in the dimension check"},
          {"rho-max", "30", "tabulate rho(d) for square-free d up to this"}}},
        {"dp6-growth", {{"B", "", "comma-separated ascending budgets"}, {"t", "12", "prime-factor bound"}}},
        {"bilinear",
         {{"M", "64", "length of a"},
          {"N", "64", "length of b"},
          {"epsilon", "0.05", "epsilon in the bound"},
          {"seeds", "1", "number of consecutive seeds"}}},
    };
    return table;
}

struct RunConfig {
    std::string command;
    std::map<std::string, std::string> parameters;
    u64 seed = 1;
    unsigned threads = 1;
    std::string out;  // empty: standard output
    std::string format = "csv";
    bool timing = false;
};

/// Typed access to a command's parameters with the defaults filled in.
class Params {
public:
    Params(const std::string& command, const std::map<std::string, std::string>& given) : command_(command) {
        auto it = command_params().find(command);
        require(it != command_params().end(), "unknown command '" + command + "'");
        for (const auto& spec : it->second) values_[spec.name] = spec.fallback;
        for (const auto& [k, v] : given) {
            require(values_.count(k) == 1, "command " + command + " has no parameter --" + k);
            values_[k] = v;
        }
        for (const auto& [k, v] : values_) require(!v.empty(), "parameter --" + k + " is required for " + command);
    }

    const std::string& str(const std::string& name) const { return values_.at(name); }

    i64 integer(const std::string& name) const {
        const std::string& s = str(name);
        i64 v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc() && p == s.data() + s.size()) return v;
        double d = real(name);
        require(std::floor(d) == d && std::abs(d) < 9.2e18, "parameter --" + name + ": expected an integer, got '" + s + "'");
        return static_cast<i64>(d);
    }

    u64 natural(const std::string& name) const {
        i64 v = integer(name);
        require(v >= 0, "parameter --" + name + ": expected a non-negative integer, got '" + str(name) + "'");
        return static_cast<u64>(v);
    }

    double real(const std::string& name) const {
        const std::string& s = str(name);
        double v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        require(ec == std::errc() && p == s.data() + s.size() && std::isfinite(v),
                "parameter --" + name + ": expected a number, got '" + s + "'");
        return v;
    }

    Rational rational(const std::string& name) const {
        const std::string& s = str(name);
        auto slash = s.find('/');
        if (slash == std::string::npos) {
            i64 v = 0;
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            require(ec == std::errc() && p == s.data() + s.size(),
                    "parameter --" + name + ": expected an integer or fraction p/q, got '" + s + "'");
            return Rational(v);
        }
        i64 n = 0, d = 0;
        auto r1 = std::from_chars(s.data(), s.data() + slash, n);
        auto r2 = std::from_chars(s.data() + slash + 1, s.data() + s.size(), d);
        require(r1.ec == std::errc() && r1.ptr == s.data() + slash && r2.ec == std::errc() &&
                    r2.ptr == s.data() + s.size() && d != 0,
                "parameter --" + name + ": expected an integer or fraction p/q, got '" + s + "'");
        return Rational(n, d);
    }

    std::vector<u64> naturals(const std::string& name) const {
        std::vector<u64> out;
        std::stringstream ss(str(name));
        std::string item;
        while (std::getline(ss, item, ',')) {
            Params one("dp6-enumerate", {{"B", item}});
            out.push_back(one.natural("B"));
        }
        require(!out.empty(), "parameter --" + name + ": expected a comma-separated list");
        return out;
    }

private:
    std::string command_;
    std::map<std::string, std::string> values_;
};

namespace detail {

inline std::string describe_cell(const std::complex<double>& z) {
    return format_double(z.real()) + (z.imag() < 0 ? "" : "+") + format_double(z.imag()) + "i";
}

inline const std::vector<std::string>& count_columns() {
    static const std::vector<std::string> cols = {"a", "b", "q", "e", "f", "X", "Y", "exact", "main_term", "envelope", "ratio", "seconds"};
    return cols;
}

inline std::vector<Field> count_row(const CountReport& r) {
    const auto& i = r.instance;
    return {i.a, i.b, i.q, static_cast<i64>(i.e), static_cast<i64>(i.f), i.X, i.Y, r.exact, r.main_term, r.envelope, r.ratio, r.seconds};
}

inline Table run_gauss(const Params& p) {
    i64 s = p.integer("s"), t = p.integer("t");
    u64 u = p.natural("u");
    require(u >= 1, "gauss: u must be positive");
    Table table{"quadratic Gauss sum G(s,t;u) = sum_{n mod u} e((s n^2 + t n)/u): closed form against direct summation",
                {"s", "t", "u", "case", "closed_form", "closed_re", "closed_im", "brute_re", "brute_im", "abs_diff", "match"},
                {}};
    auto closed = gauss_closed(s, t, u);
    auto brute = gauss_brute(s, t, u);
    double diff = std::abs(closed.numeric - brute);
    table.add({s, t, u, std::string(to_string(closed.structure->kind)), closed.structure->describe(), closed.numeric.real(),
               closed.numeric.imag(), brute.real(), brute.imag(), diff, diff <= kGaussTolerance * std::sqrt(static_cast<double>(u))});
    return table;
}

inline Table run_count(const Params& p, const RunConfig& cfg) {
    CongruenceInstance inst{p.integer("a"), p.integer("b"), p.natural("q"), static_cast<int>(p.integer("e")),
                            static_cast<int>(p.integer("f")), p.real("X"), p.real("Y")};
    Table table{"exact count of a x^e + b y^f = 0 (mod q), 0 < x <= X, 0 < y <= Y, gcd(xy, q) = 1; for (e, f) = (1, 2) "
                "main term phi(q) X Y / q^2 and envelope X tau(q)/q + L(q) sigma_{-1/2}(q) (Y tau(q)/sqrt(q) + sqrt(q) L(q))",
                count_columns(),
                {}};
    if (inst.e == 1 && inst.f == 2) {
        table.add(count_row(thm1_report(inst, cfg.timing)));
    } else {
        auto start = std::chrono::steady_clock::now();
        u64 exact = count_exact(inst);
        double seconds = cfg.timing ? std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() : 0.0;
        table.add({inst.a, inst.b, inst.q, static_cast<i64>(inst.e), static_cast<i64>(inst.f), inst.X, inst.Y, exact,
                   std::monostate{}, std::monostate{}, std::monostate{}, seconds});
    }
    return table;
}

inline Table run_thm1_scan(const Params& p, const RunConfig& cfg, std::ostream& err) {
    u64 lo = p.natural("q-min"), hi = p.natural("q-max");
    require(lo >= 1 && lo <= hi, "thm1-scan: requires 1 <= q-min <= q-max");
    const std::string& moduli = p.str("moduli");
    require(moduli == "primes" || moduli == "all", "thm1-scan: moduli must be 'primes' or 'all'");
    std::vector<u64> qs;
    if (moduli == "primes") {
        qs = primes_in(lo, hi);
    } else {
        for (u64 q = lo; q <= hi; ++q) qs.push_back(q);
    }
    double xs = p.real("X-scale"), xp = p.real("X-pow"), ys = p.real("Y-scale"), yp = p.real("Y-pow");
    i64 a = p.integer("a"), b = p.integer("b");
    std::vector<std::string> skipped;
    ScanOptions options{cfg.threads, cfg.timing, &skipped};
    auto reports = scan_thm1(
        qs, [&](u64 q) { return xs * std::pow(static_cast<double>(q), xp); },
        [&](u64 q) { return ys * std::pow(static_cast<double>(q), yp); }, [&](u64) { return a; }, [&](u64) { return b; }, options);
    for (const auto& line : skipped) err << "skipped " << line << "\n";
    Table table{"scan of the exact count of a x + b y^2 = 0 (mod q) against main term phi(q) X Y / q^2 and its envelope",
                count_columns(),
                {}};
    for (const auto& r : reports) table.add(count_row(r));
    return table;
}

inline Table run_vaaler(const Params& p, const RunConfig& cfg) {
    i64 H = p.integer("H");
    require(H >= 1 && H <= 1'000'000, "vaaler: H must lie in [1, 10^6]");
    auto poly = vaaler_coeffs(static_cast<int>(H));
    if (p.str("x") != "none") {
        double x = p.real("x");
        auto check = vaaler_residual(poly, x);
        Table table{"Vaaler trigonometric approximation of psi(x) = {x} - 1/2 with Fejer majorant",
                    {"x", "H", "psi", "approximation", "error", "majorant", "holds"},
                    {}};
        table.add({x, H, psi(x), poly.evaluate(x), check.error, check.majorant, check.holds});
        return table;
    }
    u64 points = p.natural("points");
    std::mt19937_64 rng(cfg.seed);
    u64 violations = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (u64 k = 0; k < points; ++k) {
        double x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        auto check = vaaler_residual(poly, x);
        if (!check.holds) ++violations;
        worst = std::max(worst, check.error - check.majorant);
    }
    Table table{"Vaaler inequality |psi(x) - sum a_h e(hx)| <= Fejer majorant at seeded uniform points",
                {"H", "points", "seed", "violations", "worst_excess"},
                {}};
    table.add({H, points, cfg.seed, violations, points ? Field{worst} : Field{std::monostate{}}});
    return table;
}

inline Table run_avg_scan(const Params& p, const RunConfig& cfg) {
    double eps = p.real("epsilon");
    u64 random = p.natural("random");
    std::vector<AveragedFamily> families;
    if (random > 0) {
        for (u64 i = 0; i < random; ++i) families.push_back(seeded_family(cfg.seed + i));
    } else {
        AveragedFamily f;
        f.l = static_cast<int>(p.integer("l"));
        f.m = static_cast<int>(p.integer("m"));
        f.r = p.integer("r");
        f.s = p.integer("s");
        i64 t = p.integer("t");
        require(t >= 1, "avg-scan: t must be positive");
        f.t = static_cast<u64>(t);
        f.U = p.real("U");
        f.V = p.real("V");
        f.W = p.real("W");
        f.J = Interval{p.rational("y0"), p.rational("Y")};
        f.scheme = parse_scheme(p.str("scheme"));
        f.seed = cfg.seed;
        f.lower = {0, p.rational("slope-u"), p.rational("slope-v"), 0, p.rational("slope-y")};
        f.upper = f.lower;
        f.upper.c0 = p.rational("X");
        families.push_back(f);
    }
    Table table{"averaged count over (r u^l, s v^m, t w) with weights d_{u,v} e_w: exact sum S, main term M, "
                "first error term UVWY/H and envelope T; ratio = |S - M| / (UVWY/H + T)",
                {"l", "m", "r", "s", "t", "U", "V", "W", "Y", "scheme", "seed", "H", "epsilon", "S_re", "S_im", "M_re", "M_im",
                 "first_O", "T_envelope", "ratio"},
                {}};
    for (const auto& f : families) {
        f.validate();
        double H = p.str("H") == "auto" ? suggest_H(f, eps) : p.real("H");
        auto r = averaged_report(f, H, eps, cfg.threads);
        table.add({static_cast<i64>(f.l), static_cast<i64>(f.m), f.r, f.s, f.t, f.U, f.V, f.W, f.Y(), to_string(f.scheme),
                   f.seed, H, eps, r.S.real(), r.S.imag(), r.M.real(), r.M.imag(), r.budget.first_O, r.budget.T, r.ratio});
    }
    return table;
}

inline Table run_dp6_enumerate(const Params& p, const RunConfig& cfg) {
    u64 B = p.natural("B");
    i64 t = p.integer("t");
    auto e = enumerate_lower_bound_points(B, static_cast<int>(t), {cfg.threads, true});
    Table table{"special torsor points (eta = (1,1,1,q)) with Omega(|a1 a2 a3|) <= t and their images x0..x6",
                {"q", "a1", "a2", "a3", "x0", "x1", "x2", "x3", "x4", "x5", "x6", "Omega"},
                {}};
    for (const auto& pt : e.points) {
        auto x = pi_map(special_to_torsor(pt.special)).x;
        const auto& a = pt.special.alpha;
        table.add({pt.special.q, a[0], a[1], a[2], x[0], x[1], x[2], x[3], x[4], x[5], x[6], static_cast<i64>(pt.omega)});
    }
    return table;
}

inline Table run_dp6_sieve(const Params& p) {
    u64 B = p.natural("B");
    require(B >= 8, "dp6-sieve: B must be at least 8");
    u64 q = 0;
    if (p.str("q") == "auto") {
        auto qs = detail::window_primes(B);
        require(!qs.empty(), "dp6-sieve: no prime in (B^{1/3}/2, B^{1/3}]");
        q = qs.front();
    } else {
        q = p.natural("q");
    }
    SieveOptions opt;
    opt.tau = p.real("tau");
    opt.c2 = p.real("c2");
    opt.c3 = p.real("c3");
    opt.mu = p.real("mu");
    opt.z_max = p.natural("z-max");
    u64 rho_max = p.natural("rho-max");
    auto r = sieve_condition_report(B, q, opt);
    auto seq = build_sieve_sequence(B, q);
    Table table{"sieve data for the special family at prime q: rho(d), dimension and level conditions, and the "
                "almost-prime threshold mu - 1 + (mu - kappa)(1 - 1/beta) + (kappa + 1) log beta",
                {"section", "key", "value", "exact"},
                {}};
    auto row = [&](const std::string& section, const std::string& key, Field value, std::string exact = "") {
        table.add({section, key, std::move(value), std::move(exact)});
    };
    row("parameters", "B", B);
    row("parameters", "q", q);
    row("parameters", "tau", r.tau);
    row("parameters", "c2", r.c2);
    row("parameters", "c3", r.c3);
    row("parameters", "kappa", r.kappa);
    row("parameters", "mu", r.mu);
    row("parameters", "beta", r.beta);
    row("sequence", "total", seq.total());
    row("sequence", "X", seq.X_approx.to_double(), seq.X_approx.str());
    for (u64 d = 1; d <= rho_max; ++d) {
        if (!factorize(d).square_free()) continue;
        Rational v = rho(d, q);
        row("rho", std::to_string(d), v.to_double(), v.str());
    }
    std::string violations;
    for (u64 v : r.W0_violations) violations += (violations.empty() ? "" : " ") + std::to_string(v);
    row("W0", "violations", static_cast<u64>(r.W0_violations.size()), violations);
    for (const auto& w1 : r.W1) {
        std::string key = std::to_string(w1.w) + ".." + std::to_string(w1.z);
        row("W1_product", key, w1.product);
        row("W1_power", key, w1.power);
    }
    row("W1", "c1_min", r.c1_min);
    row("W2", "level", r.level);
    row("W2", "sum", r.W2_sum);
    row("W2", "bound", r.W2_bound);
    row("W2", "holds", r.W2_holds);
    row("threshold", "value", r.threshold);
    row("threshold", "t_min", static_cast<i64>(r.t_min));
    row("threshold", "t12_qualifies", r.t12_qualifies);
    return table;
}

inline Table run_dp6_growth(const Params& p, const RunConfig& cfg) {
    auto budgets = p.naturals("B");
    for (u64 B : budgets) require(B >= 8, "dp6-growth: every budget must be at least 8");
    auto rows = m_t_growth(budgets, static_cast<int>(p.integer("t")), cfg.threads);
    Table table{"lower-bound count of almost-prime points with normalized = count log^5 B / B", {"B", "t", "count", "normalized"}, {}};
    for (const auto& r : rows) table.add({r.B, static_cast<i64>(r.t), r.count, r.normalized});
    return table;
}

inline Table run_bilinear(const Params& p, const RunConfig& cfg) {
    u64 M = p.natural("M"), N = p.natural("N"), seeds = p.natural("seeds");
    require(M >= 1 && N >= 1, "bilinear: M and N must be positive");
    require(M * N <= 100'000'000, "bilinear: M N must not exceed 10^8");
    double eps = p.real("epsilon");
    Table table{"bilinear Jacobi-symbol sum over odd m <= M, n <= N with seeded +-1 coefficients against "
                "(MN)^eps (M N^{1/2} + M^{1/2} N)",
                {"M", "N", "seed", "epsilon", "sum_re", "sum_im", "abs_sum", "bound", "ratio"},
                {}};
    for (u64 k = 0; k < seeds; ++k) {
        std::mt19937_64 rng(cfg.seed + k);
        std::vector<std::complex<double>> a(M), b(N);
        for (auto& z : a) z = (rng() & 1) ? 1.0 : -1.0;
        for (auto& z : b) z = (rng() & 1) ? 1.0 : -1.0;
        auto r = bilinear_jacobi(a, b, eps);
        table.add({M, N, cfg.seed + k, eps, r.sum.real(), r.sum.imag(), std::abs(r.sum), r.bound, std::abs(r.sum) / r.bound});
    }
    return table;
}

}  // namespace detail

/// Runs one command and writes its report to `out` (or to cfg.out).
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        require(cfg.format == "csv" || cfg.format == "json", "format must be csv or json");
        require(cfg.threads >= 1, "threads must be positive");
        Params p(cfg.command, cfg.parameters);
        Table table;
        const std::string& c = cfg.command;
        if (c == "gauss") table = detail::run_gauss(p);
        else if (c == "count") table = detail::run_count(p, cfg);
        else if (c == "thm1-scan") table = detail::run_thm1_scan(p, cfg, err);
        else if (c == "vaaler") table = detail::run_vaaler(p, cfg);
        else if (c == "avg-scan") table = detail::run_avg_scan(p, cfg);
        else if (c == "dp6-enumerate") table = detail::run_dp6_enumerate(p, cfg);
        else if (c == "dp6-sieve") table = detail::run_dp6_sieve(p);
        else if (c == "dp6-growth") table = detail::run_dp6_growth(p, cfg);
        else if (c == "bilinear") table = detail::run_bilinear(p, cfg);

        std::ofstream file;
        std::ostream* sink = &out;
        if (!cfg.out.empty()) {
            file.open(cfg.out);
            require(file.good(), "cannot open output file '" + cfg.out + "'");
            sink = &file;
        }
        if (cfg.format == "csv") write_csv(*sink, table);
        else write_json(*sink, table);
        return 0;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

namespace detail {

/// Flat key=value lines; '#' starts a comment.
inline std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot read config file '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    int number = 0;
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++number;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        auto eq = line.find('=');
        require(eq != std::string::npos, "config line " + std::to_string(number) + ": expected key=value");
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

inline unsigned parse_threads(const std::string& text, const std::string& origin) {
    Params p("dp6-enumerate", {{"B", text}});
    u64 v = 0;
    try {
        v = p.natural("B");
    } catch (const precondition_error&) {
        throw precondition_error(origin + ": expected a positive integer, got '" + text + "'");
    }
    require(v >= 1 && v <= 1024, origin + ": must lie in [1, 1024]");
    return static_cast<unsigned>(v);
}

}  // namespace detail

/// Parses argv into a RunConfig and runs it. Flags take precedence over the
/// config file; CONGRUENCE_LAB_THREADS supplies the default thread count.
inline int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"congruence_lab: counting, Gauss sums and almost-prime experiments"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path, threads_text, seed_text, out_path, format;
    bool timing = false;
    app.add_option("--config", config_path, "flat key=value file; flags take precedence");
    app.add_option("--threads", threads_text, "worker threads (default: $CONGRUENCE_LAB_THREADS or 1)");
    app.add_option("--seed", seed_text, "64-bit seed for random inputs (default 1)");
    app.add_option("--out", out_path, "write the report to this file");
    app.add_option("--format", format, "csv or json (default csv)");
    app.add_flag("--timing", timing, "record wall-clock seconds (makes output non-reproducible)");

    std::map<std::string, std::map<std::string, std::string>> given;
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, specs] : command_params()) {
        auto* sub = app.add_subcommand(name);
        subs[name] = sub;
        for (const auto& spec : specs) {
            std::string help = spec.help + (spec.fallback.empty() ? " (required)" : " (default " + spec.fallback + ")");
            sub->add_option("--" + spec.name, given[name][spec.name], help);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    RunConfig cfg;
    try {
        for (const auto& [name, sub] : subs)
            if (sub->parsed()) cfg.command = name;
        for (const auto& spec : command_params().at(cfg.command))
            if (subs[cfg.command]->count("--" + spec.name) > 0) cfg.parameters[spec.name] = given[cfg.command][spec.name];

        std::map<std::string, std::string> file_values;
        if (!config_path.empty()) file_values = detail::read_config_file(config_path);
        auto pick = [&](const std::string& key, const std::string& flag_value, bool flag_given) -> std::optional<std::string> {
            if (flag_given) return flag_value;
            if (auto it = file_values.find(key); it != file_values.end()) return it->second;
            return std::nullopt;
        };
        for (const auto& [k, v] : file_values) {
            static const std::vector<std::string> globals = {"threads", "seed", "out", "format", "timing"};
            if (std::find(globals.begin(), globals.end(), k) != globals.end()) continue;
            cfg.parameters.emplace(k, v);  // keeps flag values
        }

        if (const char* env = std::getenv("CONGRUENCE_LAB_THREADS"); env && *env)
            cfg.threads = detail::parse_threads(env, "CONGRUENCE_LAB_THREADS");
        if (auto v = pick("threads", threads_text, app.count("--threads") > 0)) cfg.threads = detail::parse_threads(*v, "--threads");
        if (auto v = pick("seed", seed_text, app.count("--seed") > 0)) {
            u64 seed = 0;
            auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), seed);
            require(ec == std::errc() && p == v->data() + v->size(), "--seed: expected a 64-bit unsigned integer, got '" + *v + "'");
            cfg.seed = seed;
        }
        if (auto v = pick("out", out_path, app.count("--out") > 0)) cfg.out = *v;
        if (auto v = pick("format", format, app.count("--format") > 0)) cfg.format = *v;
        if (timing) cfg.timing = true;
        else if (auto it = file_values.find("timing"); it != file_values.end()) cfg.timing = it->second == "true" || it->second == "1";
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return run(cfg, out, err);
}

}  // namespace congruence_lab
