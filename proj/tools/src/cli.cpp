#include "arlkit_cli/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "arlkit/arlkit.hpp"

namespace arlkit::cli {

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x == 0.0 ? 0.0 : x);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

namespace {

struct SchemeArgs {
    std::string preset = "custom";
    std::size_t k = 0;
    std::vector<double> weights;
    std::optional<double> delta;
    std::optional<double> q1;
};

struct NumericArgs {
    std::uint64_t seed = 0x5eed5eedULL;
    double eps = 2e-5;
    double rel_eps = 1e-3;
    std::uint64_t budget = std::uint64_t{1} << 22;
    std::size_t qmc_replicates = 12;
    std::uint64_t reps = 100'000;
    unsigned threads = 0;
    std::string noise = "gaussian";
    double tol = 1e-3;
    std::size_t window = 0;
    std::size_t n_cap = 0;
    bool timing = false;
};

void add_scheme_options(CLI::App& cmd, SchemeArgs& s) {
    cmd.add_option("--preset", s.preset, "Weight preset")
        ->check(CLI::IsMember({"ma", "fd", "custom"}))
        ->capture_default_str();
    cmd.add_option("-k,--span", s.k, "Span for the ma/fd presets");
    cmd.add_option("--weights", s.weights, "Comma-separated weights c_0,...,c_{k-1} (custom preset)")
        ->delimiter(',');
    auto* delta = cmd.add_option("--delta", s.delta, "Standardized threshold");
    auto* q1 = cmd.add_option("--q1", s.q1, "Threshold given as q_1 = P(Y < h); maps to delta = Phi^{-1}(q1)");
    delta->excludes(q1);
    q1->excludes(delta);
}

void add_numeric_options(CLI::App& cmd, NumericArgs& a) {
    cmd.add_option("--seed", a.seed, "Seed for lattice shifts and simulation streams")
        ->envname("ARLKIT_SEED")
        ->capture_default_str();
    cmd.add_option("--eps", a.eps, "Target standard error of each survival probability")
        ->envname("ARLKIT_EPS")
        ->capture_default_str();
    cmd.add_option("--rel-eps", a.rel_eps, "Target relative standard error of each p_n")
        ->envname("ARLKIT_REL_EPS")
        ->capture_default_str();
    cmd.add_option("--budget", a.budget, "Maximum integrand evaluations per survival sequence")
        ->envname("ARLKIT_BUDGET")
        ->capture_default_str();
    cmd.add_option("--qmc-replicates", a.qmc_replicates, "Random shifts of the lattice rule")
        ->envname("ARLKIT_QMC_REPLICATES")
        ->check(CLI::Range(2, 1000))
        ->capture_default_str();
    cmd.add_option("--reps", a.reps, "Monte Carlo replications")->envname("ARLKIT_REPS")->capture_default_str();
    cmd.add_option("--threads", a.threads, "Simulation threads (0 = all cores)")
        ->envname("ARLKIT_THREADS")
        ->capture_default_str();
    cmd.add_option("--noise", a.noise, "Simulation noise family")
        ->envname("ARLKIT_NOISE")
        ->check(CLI::IsMember({"gaussian", "uniform", "laplace"}))
        ->capture_default_str();
    cmd.add_option("--tol", a.tol, "Convergence tolerance on r_n")->envname("ARLKIT_TOL")->capture_default_str();
    cmd.add_option("--window", a.window, "Convergence window (0 = span k)")
        ->envname("ARLKIT_WINDOW")
        ->capture_default_str();
    cmd.add_option("--n-cap", a.n_cap, "Maximum series order (0 = max(ceil(k/2), 4))")
        ->envname("ARLKIT_N_CAP")
        ->capture_default_str();
    cmd.add_flag("--timing", a.timing, "Fill the wall_ms column");
}

WeightVector build_weights(const SchemeArgs& s) {
    if (s.preset == "custom") {
        if (s.weights.empty()) throw InvalidArgument("--weights is required with --preset custom");
        if (s.k != 0 && s.k != s.weights.size()) throw InvalidArgument("-k does not match the number of weights");
        return WeightVector(s.weights);
    }
    if (!s.weights.empty()) throw InvalidArgument("--weights cannot be combined with --preset " + s.preset);
    if (s.k == 0) throw InvalidArgument("-k is required with --preset " + s.preset);
    return s.preset == "ma" ? make_ma_weights(s.k) : make_fd_weights(s.k);
}

double build_delta(const SchemeArgs& s) {
    if (s.delta) {
        if (!std::isfinite(*s.delta)) throw InvalidArgument("--delta must be finite");
        return *s.delta;
    }
    if (s.q1) {
        if (!(*s.q1 > 0.0 && *s.q1 < 1.0)) throw InvalidArgument("--q1 must lie in (0, 1)");
        return normal_quantile(*s.q1);
    }
    throw InvalidArgument("one of --delta or --q1 is required");
}

NoiseFamily parse_family(const std::string& name) {
    if (name == "uniform") return NoiseFamily::uniform;
    if (name == "laplace") return NoiseFamily::laplace;
    return NoiseFamily::gaussian;
}

MvnAccuracy build_accuracy(const NumericArgs& a) {
    MvnAccuracy acc;
    acc.abs_error = a.eps;
    acc.rel_drop_error = a.rel_eps;
    acc.max_points = a.budget;
    acc.replicates = a.qmc_replicates;
    acc.seed = a.seed;
    return acc;
}

SeriesConfig build_series_config(const NumericArgs& a) {
    SeriesConfig cfg;
    cfg.tol = a.tol;
    cfg.window = a.window;
    cfg.n_cap = a.n_cap;
    cfg.accuracy = build_accuracy(a);
    return cfg;
}

McConfig build_mc_config(const NumericArgs& a) {
    McConfig cfg;
    cfg.replications = a.reps;
    cfg.seed = a.seed;
    cfg.noise.family = parse_family(a.noise);
    cfg.threads = a.threads;
    return cfg;
}

std::string join_weights(const WeightVector& w) {
    std::string s;
    for (std::size_t t = 0; t < w.size(); ++t) {
        if (t) s += ';';
        s += format_number(w[t]);
    }
    return s;
}

class Stopwatch {
public:
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// One re-runnable output row of the arl command.
struct RunRecord {
    std::string weights;
    std::size_t k = 0;
    double delta = 0.0;
    ArlEstimate estimate;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> reps;
    std::optional<double> wall_ms;
};

constexpr const char* kRunHeader = "weights,k,delta,method,order,value,uncertainty,seed,reps,wall_ms";

void write_record(std::ostream& out, const RunRecord& r) {
    out << r.weights << ',' << r.k << ',' << format_number(r.delta) << ',' << to_string(r.estimate.method) << ',';
    if (r.estimate.order) out << *r.estimate.order;
    out << ',' << format_number(r.estimate.value) << ',' << format_number(r.estimate.uncertainty) << ',' << r.seed
        << ',';
    if (r.reps) out << *r.reps;
    out << ',';
    if (r.wall_ms) out << format_number(*r.wall_ms);
    out << '\n';
}

// Closed forms exist for weights proportional to [1, 1] or [1, -1] at delta = 0.
std::optional<ArlEstimate> exact_estimate(const WeightVector& w, double delta) {
    if (w.size() != 2 || delta != 0.0 || std::abs(w[0]) != std::abs(w[1])) return std::nullopt;
    ArlEstimate est;
    est.method = ArlMethod::exact;
    est.value = (w[0] * w[1] > 0.0) ? exact::arl_zigzag() : exact::arl_ordered();
    return est;
}

int cmd_arl(const SchemeArgs& scheme, const NumericArgs& num, const std::string& method,
            std::optional<std::size_t> order, std::ostream& out, std::ostream& err) {
    const WeightVector w = build_weights(scheme);
    const double delta = build_delta(scheme);
    const MosumSpec spec(w, delta);

    RunRecord base;
    base.weights = join_weights(w);
    base.k = w.size();
    base.delta = delta;
    base.seed = num.seed;

    std::vector<RunRecord> rows;
    auto push = [&](const ArlEstimate& est, const Stopwatch& sw, std::optional<std::uint64_t> reps = {}) {
        RunRecord r = base;
        r.estimate = est;
        r.reps = reps;
        if (num.timing) r.wall_ms = sw.elapsed_ms();
        rows.push_back(r);
    };
    const bool all = method == "all";

    if (method == "exact" || all) {
        Stopwatch sw;
        const auto est = exact_estimate(w, delta);
        if (est) {
            push(*est, sw);
        } else if (!all) {
            throw InvalidArgument("no closed form for these weights; exact needs k = 2, |c_0| = |c_1| and delta = 0");
        }
    }
    if (method == "series" || all) {
        Stopwatch sw;
        ArlEstimate est;
        if (order) {
            if (*order < 1) throw InvalidArgument("--order must be >= 1");
            est = arl_approx(survival_sequence(spec, *order, build_accuracy(num)), *order);
        } else {
            est = arl_estimate(spec, build_series_config(num));
            if (est.capped) err << "note: series stopped at order cap " << *est.order << " before r_n converged\n";
        }
        push(est, sw);
    }
    if (method == "bounds" || all) {
        if (w.all_nonnegative()) {
            Stopwatch sw;
            const Bounds b = lbh_bounds(spec, build_accuracy(num));
            ArlEstimate lo, hi;
            lo.method = ArlMethod::bound_lower;
            lo.value = b.lower;
            hi.method = ArlMethod::bound_upper;
            hi.value = b.upper;
            lo.order = hi.order = w.size();
            push(lo, sw);
            push(hi, sw);
        } else if (!all) {
            throw NegativeWeightsError("bounds need nonnegative weights");
        }
    }
    if (method == "mc" || all) {
        Stopwatch sw;
        push(estimate_arl(spec, build_mc_config(num)), sw, num.reps);
    }

    out << kRunHeader << '\n';
    for (const auto& r : rows) write_record(out, r);
    return kExitOk;
}

struct TableArgs {
    std::string which = "1a";
    std::vector<std::size_t> ks;
    std::vector<double> deltas;
    bool no_mc = false;
};

int cmd_table(const TableArgs& t, const NumericArgs& num, std::ostream& out, std::ostream& err) {
    const bool ma = t.which == "1a";
    std::vector<std::size_t> ks = t.ks;
    if (ks.empty()) {
        ks = ma ? std::vector<std::size_t>{3, 4, 5, 6, 8, 10, 13, 16}
                : std::vector<std::size_t>{4, 6, 8, 10, 12, 14, 16};
    }
    const std::vector<double> deltas = t.deltas.empty() ? std::vector<double>{2.0, 2.5, 3.0} : t.deltas;

    // Validate the whole grid before doing any work.
    for (const auto k : ks) (void)(ma ? make_ma_weights(k) : make_fd_weights(k));

    out << "k,delta,order,L_mc,L_mc_halfwidth,L_halfk,L_halfk_uncertainty,rel_err" << (num.timing ? ",wall_ms" : "")
        << '\n';
    for (const auto k : ks) {
        for (const double delta : deltas) {
            Stopwatch sw;
            const MosumSpec spec(ma ? make_ma_weights(k) : make_fd_weights(k), delta);
            const std::size_t order = (k + 1) / 2;
            const ArlEstimate series = arl_approx(survival_sequence(spec, order, build_accuracy(num)), order);
            out << k << ',' << format_number(delta) << ',' << order << ',';
            if (t.no_mc) {
                out << ",," << format_number(series.value) << ',' << format_number(series.uncertainty) << ',';
            } else {
                const ArlEstimate mc = estimate_arl(spec, build_mc_config(num));
                out << format_number(mc.value) << ',' << format_number(mc.uncertainty) << ','
                    << format_number(series.value) << ',' << format_number(series.uncertainty) << ','
                    << format_number((series.value - mc.value) / mc.value);
            }
            if (num.timing) out << ',' << format_number(sw.elapsed_ms());
            out << '\n';
            err << "table " << t.which << ": k=" << k << " delta=" << format_number(delta) << " done\n";
        }
    }
    return kExitOk;
}

int cmd_converge(const SchemeArgs& scheme, const NumericArgs& num, std::size_t n_max, std::ostream& out,
                 std::ostream& err) {
    const WeightVector w = build_weights(scheme);
    const double delta = build_delta(scheme);
    const MosumSpec spec(w, delta);
    const std::size_t k = w.size();
    if (n_max == 0) n_max = 2 * k;

    const bool bounds_apply = w.all_nonnegative();
    const std::size_t n_series = bounds_apply ? std::max(n_max, k) : n_max;
    const SurvivalSeries series = survival_sequence(spec, n_series, build_accuracy(num));
    if (series.budget_exhausted) err << "warning: integration budget exhausted before the accuracy target\n";

    std::optional<Bounds> bounds;
    if (bounds_apply) {
        try {
            bounds = lbh_bounds(series);
        } catch (const UnstableDenominatorError& e) {
            err << "warning: " << e.what() << "; bounds omitted\n";
        }
    }

    out << "n,q_n,r_n,L_n,L_l,L_u\n";
    for (std::size_t n = 1; n <= n_max; ++n) {
        out << n << ',' << format_number(series.q(n)) << ',' << format_number(series.r(n)) << ',';
        try {
            out << format_number(arl_approx(series, n).value);
        } catch (const DegenerateGeometricError&) {
        }
        out << ',';
        if (bounds) out << format_number(bounds->lower) << ',' << format_number(bounds->upper);
        else out << ',';
        out << '\n';
    }
    return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Average run length of moving-sum change detectors"};
    app.require_subcommand(1);

    SchemeArgs arl_scheme, conv_scheme;
    NumericArgs arl_num, table_num, conv_num;
    std::string method = "series";
    std::optional<std::size_t> order;
    TableArgs table;
    std::size_t n_max = 0;

    auto* arl = app.add_subcommand("arl", "Estimate the ARL of one scheme");
    add_scheme_options(*arl, arl_scheme);
    add_numeric_options(*arl, arl_num);
    arl->add_option("--method", method, "Estimator")
        ->check(CLI::IsMember({"series", "exact", "mc", "bounds", "all"}))
        ->capture_default_str();
    arl->add_option("--order", order, "Use L_n at this order instead of the convergence-driven estimator");

    auto* tbl = app.add_subcommand("table", "Reproduce the MA (1a) or FD (1b) ARL table");
    add_numeric_options(*tbl, table_num);
    tbl->add_option("--which", table.which, "Table")->check(CLI::IsMember({"1a", "1b"}))->capture_default_str();
    tbl->add_option("--ks", table.ks, "Subset of spans")->delimiter(',');
    tbl->add_option("--deltas", table.deltas, "Subset of thresholds")->delimiter(',');
    tbl->add_flag("--no-mc", table.no_mc, "Skip the Monte Carlo column");

    auto* conv = app.add_subcommand("converge", "Emit q_n, r_n, L_n and the bounds for n = 1..n_max");
    add_scheme_options(*conv, conv_scheme);
    add_numeric_options(*conv, conv_num);
    conv->add_option("--n-max", n_max, "Largest order (0 = 2k)")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (arl->parsed()) return cmd_arl(arl_scheme, arl_num, method, order, out, err);
        if (tbl->parsed()) return cmd_table(table, table_num, out, err);
        return cmd_converge(conv_scheme, conv_num, n_max, out, err);
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace arlkit::cli
