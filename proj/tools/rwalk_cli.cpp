// Command-line front end: one subcommand per library operation, CSV or
// JSON-lines output with a full parameter echo, deterministic seeding.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rwalk/combinatorics.hpp"
#include "rwalk/heat_kernel.hpp"
#include "rwalk/io.hpp"
#include "rwalk/lattice.hpp"
#include "rwalk/monte_carlo.hpp"
#include "rwalk/parallel.hpp"
#include "rwalk/spanning.hpp"

namespace {

using nlohmann::json;
using namespace rwalk;

constexpr std::uint64_t kDefaultSeed = 20240801;  // fixed default, never wall clock

enum ExitCode {
    kOk = 0,
    kDomainError = 2,
    kBudgetError = 3,
    kEmptyRegionError = 4,
};

struct CommonOpts {
    int d = 2;
    double lambda = 0.5;
    std::uint64_t seed = kDefaultSeed;
    std::string output = "csv";
    std::string output_path;
    int workers = 0;
};

// Echo key/value pairs ahead of the data so every file is self-describing.
struct Sink {
    std::string format;
    std::string path;
    std::vector<std::pair<std::string, std::string>> params;
    std::ostringstream body;

    void param(const std::string& k, const std::string& v) { params.emplace_back(k, v); }
    void param(const std::string& k, double v) { params.emplace_back(k, format_double(v)); }
    void param(const std::string& k, long long v) { params.emplace_back(k, std::to_string(v)); }
    void param(const std::string& k, std::uint64_t v) { params.emplace_back(k, std::to_string(v)); }
    void param(const std::string& k, int v) { params.emplace_back(k, std::to_string(v)); }

    bool json_mode() const { return format == "json"; }

    void flush() {
        std::ostringstream out;
        if (json_mode()) {
            json config;
            for (const auto& [k, v] : params) config[k] = v;
            out << json{{"config", config}}.dump() << "\n" << body.str();
        } else {
            std::ostringstream head;
            CsvWriter w(head);
            for (const auto& [k, v] : params) w.echo(k, v);
            out << head.str() << body.str();
        }
        if (path.empty()) {
            std::cout << out.str();
        } else {
            std::ofstream f(path, std::ios::binary);
            if (!f) throw std::runtime_error("cannot open output path " + path);
            f << out.str();
        }
    }
};

std::vector<std::string> to_row(std::initializer_list<std::string> fields) { return fields; }

void emit_table(Sink& sink, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
    if (sink.json_mode()) {
        for (const auto& r : rows) {
            json obj;
            for (std::size_t i = 0; i < header.size(); ++i) obj[header[i]] = r[i];
            sink.body << obj.dump() << "\n";
        }
    } else {
        CsvWriter w(sink.body);
        w.row(header);
        for (const auto& r : rows) w.row(r);
    }
}

LatticePoint parse_point(const std::string& text, int d) {
    LatticePoint p = origin(d);
    std::istringstream is(text);
    std::string tok;
    int i = 0;
    while (std::getline(is, tok, ',')) {
        if (i >= d) throw DomainError("point '" + text + "' has more than " + std::to_string(d) + " coordinates");
        p[i++] = static_cast<std::int32_t>(std::stol(tok));
    }
    if (i != d) throw DomainError("point '" + text + "' has fewer than " + std::to_string(d) + " coordinates");
    return p;
}

std::vector<LatticePoint> parse_points(const std::string& text, int d) {
    std::vector<LatticePoint> pts;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ';')) pts.push_back(parse_point(tok, d));
    return pts;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool lambda_open_interval) {
    cmd->add_option("--d", o.d, "lattice dimension")->check(CLI::Range(1, 16));
    auto* lam = cmd->add_option("--lambda", o.lambda, "bias parameter");
    if (lambda_open_interval) {
        lam->check(CLI::Range(std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0)));
    } else {
        lam->check(CLI::Range(std::nextafter(0.0, 1.0), 1.0));
    }
    cmd->add_option("--seed", o.seed, "master seed (fixed default, never wall clock)");
    cmd->add_option("--output", o.output, "output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--output-path", o.output_path, "write to this file instead of stdout");
    cmd->add_option("--workers", o.workers, "worker threads (0 = default); results do not depend on it");
}

Sink make_sink(const CommonOpts& o, const std::string& command) {
    Sink s;
    s.format = o.output;
    s.path = o.output_path;
    s.param("command", command);
    s.param("seed", o.seed);
    return s;
}

std::string fmt(double v) { return format_double(v); }

int dispatch(int argc, char** argv) {
    CLI::App app{"biased random walks on Z^d: exact kernels, Monte Carlo estimators, spanning forests"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file (flags override it)");
    app.get_config_formatter_base()->comment('#');

    // ---- rho-diag ----------------------------------------------------
    CommonOpts rho_o;
    int rho_nmax = 40;
    std::size_t rho_budget = DpBudget{}.max_states;
    auto* rho_cmd = app.add_subcommand("rho-diag", "return-probability decay table");
    add_common(rho_cmd, rho_o, false);
    rho_cmd->add_option("--n-max", rho_nmax, "largest n in the table (rows use 2n steps)");
    rho_cmd->add_option("--max-dp-states", rho_budget, "dense DP state budget");

    // ---- speed -------------------------------------------------------
    CommonOpts speed_o;
    long speed_steps = 100000, speed_trials = 200;
    auto* speed_cmd = app.add_subcommand("speed", "law-of-large-numbers speed estimate");
    add_common(speed_cmd, speed_o, false);
    speed_cmd->add_option("--n,--steps", speed_steps, "steps per trial");
    speed_cmd->add_option("--trials", speed_trials, "number of trials");

    // ---- axial-visits --------------------------------------------------
    CommonOpts ax_o;
    long ax_horizon = 100000, ax_trials = 1000;
    auto* ax_cmd = app.add_subcommand("axial-visits", "visit counts to the axial set");
    add_common(ax_cmd, ax_o, false);
    ax_cmd->add_option("--horizon", ax_horizon, "steps per trial");
    ax_cmd->add_option("--trials", ax_trials, "number of trials");

    // ---- intersections -------------------------------------------------
    CommonOpts is_o;
    long is_horizon = 10000, is_trials = 201;
    std::string is_kind = "drifted", is_start_a, is_start_b, is_count = "points";
    bool is_per_trial = false;
    auto* is_cmd = app.add_subcommand("intersections", "range intersections of two walks");
    add_common(is_cmd, is_o, false);
    is_cmd->add_option("--horizon", is_horizon, "steps per walk");
    is_cmd->add_option("--trials", is_trials, "number of trials");
    is_cmd->add_option("--kind", is_kind)->check(CLI::IsMember({"biased", "drifted", "reflected"}));
    is_cmd->add_option("--start-a", is_start_a, "first start, comma-separated coordinates");
    is_cmd->add_option("--start-b", is_start_b, "second start");
    is_cmd->add_option("--count-mode", is_count)->check(CLI::IsMember({"points", "pairs"}));
    is_cmd->add_flag("--per-trial", is_per_trial, "stream raw per-trial counts");

    // ---- expected-intersections ----------------------------------------
    CommonOpts ei_o;
    int ei_m = 50, ei_n = 50, ei_diag = 0;
    auto* ei_cmd = app.add_subcommand("expected-intersections", "exact partial sums of the intersection series");
    add_common(ei_cmd, ei_o, true);
    ei_cmd->add_option("--m", ei_m, "first index bound M");
    ei_cmd->add_option("--n", ei_n, "second index bound N");
    ei_cmd->add_option("--diag-table", ei_diag, "also emit diagonal partial sums up to this bound");

    // ---- llt-diag -------------------------------------------------------
    CommonOpts llt_o;
    int llt_n = 32;
    double llt_sigma = 1.0, llt_eps = 0.5;
    auto* llt_cmd = app.add_subcommand("llt-diag", "local-limit shape diagnostics of the drifted kernel");
    add_common(llt_cmd, llt_o, true);
    llt_cmd->add_option("--n", llt_n, "number of steps");
    llt_cmd->add_option("--sigma", llt_sigma, "CLT window half-width in units of sqrt(n)");
    llt_cmd->add_option("--eps", llt_eps, "concentration-box exponent parameter");

    // ---- catalan ---------------------------------------------------------
    CommonOpts cat_o;
    int cat_n = 20;
    auto* cat_cmd = app.add_subcommand("catalan", "Catalan numbers and the normalized tail sum");
    add_common(cat_cmd, cat_o, false);
    cat_cmd->add_option("--n", cat_n, "largest index");

    // ---- bnk --------------------------------------------------------------
    CommonOpts bnk_o;
    int bnk_n = 9, bnk_k = -1, bnk_brute_budget = 11;
    std::string bnk_mode = "excursion";
    auto* bnk_cmd = app.add_subcommand("bnk", "bridge counts by number of returns to zero");
    add_common(bnk_cmd, bnk_o, false);
    bnk_cmd->add_option("--n", bnk_n, "half-length of the bridge");
    bnk_cmd->add_option("--k", bnk_k, "returns to zero (all k if omitted)");
    bnk_cmd->add_option("--mode", bnk_mode)->check(CLI::IsMember({"brute", "excursion", "bound"}));
    bnk_cmd->add_option("--max-brute-n", bnk_brute_budget, "largest n the brute mode accepts");

    // ---- path-prob ---------------------------------------------------------
    CommonOpts pp_o;
    std::string pp_path;
    auto* pp_cmd = app.add_subcommand("path-prob", "walk probability of a concrete path");
    add_common(pp_cmd, pp_o, false);
    pp_cmd->add_option("--path", pp_path, "semicolon-separated points, e.g. \"0,0;1,0;0,0\"")->required();

    // ---- alpha ---------------------------------------------------------------
    CommonOpts al_o;
    int al_k = 4;
    long al_horizon = 10000, al_trials = 10000, al_distance = -1;
    std::string al_starts;
    auto* al_cmd = app.add_subcommand("alpha", "no-pairwise-intersection probability of k walks");
    add_common(al_cmd, al_o, false);
    al_cmd->add_option("--k", al_k, "number of walks");
    al_cmd->add_option("--horizon", al_horizon, "steps per walk");
    al_cmd->add_option("--trials", al_trials, "number of trials");
    al_cmd->add_option("--starts", al_starts, "semicolon-separated start points");
    al_cmd->add_option("--distance", al_distance, "orthant-center distance when --starts is omitted");

    // ---- tree-count -------------------------------------------------------------
    CommonOpts tc_o;
    long tc_horizon = 10000, tc_trials = 2000;
    auto* tc_cmd = app.add_subcommand("tree-count", "forest tree-count scan via alpha estimates");
    add_common(tc_cmd, tc_o, false);
    tc_cmd->add_option("--horizon", tc_horizon, "steps per walk");
    tc_cmd->add_option("--trials", tc_trials, "trials per k");

    // ---- box -----------------------------------------------------------------------
    CommonOpts box_o;
    int box_n = 3;
    std::string box_boundary = "wired";
    auto* box_cmd = app.add_subcommand("box", "emit a conductance box graph");
    add_common(box_cmd, box_o, false);
    box_cmd->add_option("--n", box_n, "box radius");
    box_cmd->add_option("--boundary", box_boundary)->check(CLI::IsMember({"free", "wired"}));

    // ---- ust ------------------------------------------------------------------------
    CommonOpts ust_o;
    int ust_n = 3;
    long ust_trials = 1;
    std::string ust_boundary = "wired";
    bool ust_stats = false;
    auto* ust_cmd = app.add_subcommand("ust", "sample spanning trees of a box");
    add_common(ust_cmd, ust_o, false);
    ust_cmd->add_option("--n", ust_n, "box radius");
    ust_cmd->add_option("--boundary", ust_boundary)->check(CLI::IsMember({"free", "wired"}));
    ust_cmd->add_option("--trials", ust_trials, "number of samples");
    ust_cmd->add_flag("--stats", ust_stats, "emit component statistics instead of tag lists");

    // ---- wsf-z1 ------------------------------------------------------------------------
    CommonOpts wsf_o;
    int wsf_n = 30;
    long wsf_trials = 100000;
    auto* wsf_cmd = app.add_subcommand("wsf-z1", "cut law of the wired one-dimensional forest");
    add_common(wsf_cmd, wsf_o, true);
    wsf_cmd->add_option("--n", wsf_n, "box radius");
    wsf_cmd->add_option("--trials", wsf_trials, "number of samples");

    // ---- empirical-return ------------------------------------------------------------
    CommonOpts er_o;
    long er_n = 2, er_trials = 100000;
    auto* er_cmd = app.add_subcommand("empirical-return", "Monte Carlo return probability");
    add_common(er_cmd, er_o, false);
    er_cmd->add_option("--n", er_n, "number of steps (even)");
    er_cmd->add_option("--trials", er_trials, "number of trials");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << json{{"error", DomainError::code()}, {"message", e.what()}}.dump() << "\n";
        return kDomainError;
    }

    if (rho_cmd->parsed()) {
        set_workers(rho_o.workers);
        Sink sink = make_sink(rho_o, "rho-diag");
        sink.param("d", rho_o.d);
        sink.param("lambda", rho_o.lambda);
        sink.param("n_max", rho_nmax);
        DpBudget budget;
        budget.max_states = rho_budget;
        auto rows = rho_diagnostics(rho_o.d, rho_o.lambda, rho_nmax, budget);
        std::vector<std::vector<std::string>> body;
        for (const auto& r : rows) {
            body.push_back(to_row({std::to_string(r.n), fmt(r.p2n), fmt(r.root_estimate),
                                   fmt(r.corrected_ratio), fmt(r.hk_ratio)}));
        }
        emit_table(sink, {"n", "p2n", "root_estimate", "corrected_ratio", "hk_ratio"}, body);
        sink.flush();
        return kOk;
    }

    if (speed_cmd->parsed()) {
        set_workers(speed_o.workers);
        Sink sink = make_sink(speed_o, "speed");
        sink.param("d", speed_o.d);
        sink.param("lambda", speed_o.lambda);
        sink.param("steps", static_cast<long long>(speed_steps));
        sink.param("trials", static_cast<long long>(speed_trials));
        Lattice lat(speed_o.d);
        auto rep = speed_estimate(lat, speed_o.lambda, speed_steps, speed_trials, speed_o.seed);
        const double target = (1.0 - speed_o.lambda) / (1.0 + speed_o.lambda);
        std::vector<std::vector<std::string>> body;
        body.push_back(to_row({"scalar", fmt(rep.estimate), fmt(rep.std_error), fmt(target)}));
        for (std::size_t i = 0; i < rep.coord_estimate.size(); ++i) {
            body.push_back(to_row({"coord" + std::to_string(i + 1), fmt(rep.coord_estimate[i]),
                                   fmt(rep.coord_std_error[i]), fmt(target / speed_o.d)}));
        }
        emit_table(sink, {"component", "estimate", "std_error", "target"}, body);
        sink.flush();
        return kOk;
    }

    if (ax_cmd->parsed()) {
        set_workers(ax_o.workers);
        Sink sink = make_sink(ax_o, "axial-visits");
        sink.param("d", ax_o.d);
        sink.param("lambda", ax_o.lambda);
        sink.param("horizon", static_cast<long long>(ax_horizon));
        sink.param("trials", static_cast<long long>(ax_trials));
        Lattice lat(ax_o.d);
        auto v = axial_visit_stats(lat, ax_o.lambda, ax_horizon, ax_trials, ax_o.seed);
        sink.param("saturation", v.saturation);
        std::vector<std::vector<std::string>> body;
        for (const auto& [count, freq] : v.histogram) {
            body.push_back(to_row({std::to_string(count), std::to_string(freq),
                                   fmt(static_cast<double>(freq) / static_cast<double>(v.trials))}));
        }
        emit_table(sink, {"visits", "trials", "frequency"}, body);
        sink.flush();
        return kOk;
    }

    if (is_cmd->parsed()) {
        set_workers(is_o.workers);
        Sink sink = make_sink(is_o, "intersections");
        const WalkKind kind = parse_walk_kind(is_kind);
        Lattice lat(is_o.d);
        const LatticePoint a = is_start_a.empty() ? origin(is_o.d) : parse_point(is_start_a, is_o.d);
        const LatticePoint b = is_start_b.empty() ? origin(is_o.d) : parse_point(is_start_b, is_o.d);
        sink.param("d", is_o.d);
        sink.param("lambda", is_o.lambda);
        sink.param("kind", is_kind);
        sink.param("horizon", static_cast<long long>(is_horizon));
        sink.param("trials", static_cast<long long>(is_trials));
        sink.param("start_a", a.to_string());
        sink.param("start_b", b.to_string());
        sink.param("count_mode", is_count);
        auto s = intersection_stats(kind, lat, is_o.lambda, is_horizon, is_trials, {a, b}, is_o.seed,
                                    is_count == "pairs" ? IntersectionCount::coincidence_pairs
                                                        : IntersectionCount::shared_points);
        sink.param("median", s.median);
        std::vector<std::vector<std::string>> body;
        if (is_per_trial) {
            for (std::size_t i = 0; i < s.per_trial.size(); ++i) {
                body.push_back(to_row({std::to_string(i), std::to_string(s.per_trial[i])}));
            }
            emit_table(sink, {"rank", "count"}, body);
        } else {
            auto quant = [&](double q) {
                const std::size_t i = static_cast<std::size_t>(q * (s.per_trial.size() - 1));
                return std::to_string(s.per_trial[i]);
            };
            body.push_back(to_row({quant(0.0), quant(0.25), quant(0.5), quant(0.75), quant(1.0)}));
            emit_table(sink, {"min", "q25", "median", "q75", "max"}, body);
        }
        sink.flush();
        return kOk;
    }

    if (ei_cmd->parsed()) {
        set_workers(ei_o.workers);
        Sink sink = make_sink(ei_o, "expected-intersections");
        sink.param("d", ei_o.d);
        sink.param("lambda", ei_o.lambda);
        sink.param("m", ei_m);
        sink.param("n", ei_n);
        const int t_max = std::max({ei_m, ei_n, ei_diag});
        IntersectionSeries series(ei_o.d, ei_o.lambda, t_max);
        std::vector<std::vector<std::string>> body;
        body.push_back(to_row({std::to_string(ei_m), std::to_string(ei_n),
                               fmt(series.partial_sum(ei_m, ei_n))}));
        if (ei_diag > 0) {
            for (int t = 1; t <= ei_diag; t *= 2) {
                body.push_back(to_row({std::to_string(t), std::to_string(t), fmt(series.partial_sum(t, t))}));
            }
        }
        emit_table(sink, {"M", "N", "partial_sum"}, body);
        sink.flush();
        return kOk;
    }

    if (llt_cmd->parsed()) {
        set_workers(llt_o.workers);
        Sink sink = make_sink(llt_o, "llt-diag");
        sink.param("d", llt_o.d);
        sink.param("lambda", llt_o.lambda);
        sink.param("n", llt_n);
        sink.param("sigma", llt_sigma);
        sink.param("eps", llt_eps);
        auto diag = llt_diagnostics(llt_o.d, llt_o.lambda, llt_n, llt_sigma, llt_eps);
        emit_table(sink, {"sup_scaled", "box_min_scaled", "tail_mass"},
                   {to_row({fmt(diag.sup_scaled), fmt(diag.box_min_scaled), fmt(diag.tail_mass)})});
        sink.flush();
        return kOk;
    }

    if (cat_cmd->parsed()) {
        Sink sink = make_sink(cat_o, "catalan");
        sink.param("n", cat_n);
        std::vector<std::vector<std::string>> body;
        for (int l = 0; l <= cat_n; ++l) {
            body.push_back(to_row({std::to_string(l), catalan(l).str(), fmt(catalan_tail(l))}));
        }
        emit_table(sink, {"l", "catalan", "tail_partial_sum"}, body);
        sink.flush();
        return kOk;
    }

    if (bnk_cmd->parsed()) {
        set_workers(bnk_o.workers);
        Sink sink = make_sink(bnk_o, "bnk");
        sink.param("n", bnk_n);
        sink.param("mode", bnk_mode);
        std::vector<std::vector<std::string>> body;
        if (bnk_mode == "bound") {
            body.push_back(to_row({std::to_string(bnk_n), fmt(bnk_bound_constant(bnk_n))}));
            emit_table(sink, {"n_max", "c_min"}, body);
        } else {
            const BridgeCountMode mode =
                bnk_mode == "brute" ? BridgeCountMode::brute : BridgeCountMode::excursion;
            const int klo = bnk_k < 0 ? 0 : bnk_k;
            const int khi = bnk_k < 0 ? bnk_n : bnk_k;
            for (int k = klo; k <= khi; ++k) {
                body.push_back(to_row({std::to_string(bnk_n), std::to_string(k),
                                       count_bridges(bnk_n, k, mode, bnk_brute_budget).str()}));
            }
            emit_table(sink, {"n", "k", "count"}, body);
        }
        sink.flush();
        return kOk;
    }

    if (pp_cmd->parsed()) {
        Sink sink = make_sink(pp_o, "path-prob");
        sink.param("d", pp_o.d);
        sink.param("lambda", pp_o.lambda);
        sink.param("path", pp_path);
        Lattice lat(pp_o.d);
        auto pts = parse_points(pp_path, pp_o.d);
        auto res = path_probability(lat, pts, pp_o.lambda);
        std::ostringstream hits;
        for (std::size_t i = 0; i < res.projected_hits.size(); ++i) {
            if (i) hits << ' ';
            hits << res.projected_hits[i];
        }
        emit_table(sink, {"probability", "axial_hits", "projected_hits"},
                   {to_row({fmt(res.probability), std::to_string(res.axial_hits), hits.str()})});
        sink.flush();
        return kOk;
    }

    if (al_cmd->parsed()) {
        set_workers(al_o.workers);
        Sink sink = make_sink(al_o, "alpha");
        Lattice lat(al_o.d);
        const long dist = al_distance > 0
                              ? al_distance
                              : static_cast<long>(std::ceil(std::sqrt(static_cast<double>(al_horizon))));
        const auto starts = al_starts.empty() ? default_alpha_starts(al_o.d, al_k, dist)
                                              : parse_points(al_starts, al_o.d);
        sink.param("d", al_o.d);
        sink.param("lambda", al_o.lambda);
        sink.param("k", al_k);
        sink.param("horizon", static_cast<long long>(al_horizon));
        sink.param("trials", static_cast<long long>(al_trials));
        std::ostringstream ss;
        for (std::size_t i = 0; i < starts.size(); ++i) {
            if (i) ss << ';';
            ss << starts[i].to_string();
        }
        sink.param("starts", ss.str());
        auto rep = alpha_estimate(lat, al_o.lambda, al_k, al_horizon, al_trials, starts, al_o.seed);
        emit_table(sink, {"estimate", "std_error", "trials", "horizon"},
                   {to_row({fmt(rep.estimate), fmt(rep.std_error), std::to_string(rep.trials),
                            std::to_string(rep.horizon)})});
        sink.flush();
        return kOk;
    }

    if (tc_cmd->parsed()) {
        set_workers(tc_o.workers);
        Sink sink = make_sink(tc_o, "tree-count");
        sink.param("d", tc_o.d);
        sink.param("lambda", tc_o.lambda);
        sink.param("horizon", static_cast<long long>(tc_horizon));
        sink.param("trials", static_cast<long long>(tc_trials));
        auto rep = tree_count_estimate(tc_o.d, tc_o.lambda, tc_horizon, tc_trials, tc_o.seed);
        sink.param("lower_bound_k", rep.lower_bound_k);
        std::vector<std::vector<std::string>> body;
        for (const auto& [k, r] : rep.alpha_table) {
            body.push_back(to_row({std::to_string(k), fmt(r.estimate), fmt(r.std_error)}));
        }
        emit_table(sink, {"k", "alpha_estimate", "std_error"}, body);
        sink.flush();
        return kOk;
    }

    if (box_cmd->parsed()) {
        Sink sink = make_sink(box_o, "box");
        auto box = build_box(box_o.d, box_n, box_o.lambda, parse_boundary(box_boundary));
        std::ostringstream body;
        write_graph(body, box);
        // the graph format is fixed; bypass the table machinery
        if (box_o.output_path.empty()) {
            std::cout << body.str();
        } else {
            std::ofstream f(box_o.output_path, std::ios::binary);
            if (!f) throw std::runtime_error("cannot open output path " + box_o.output_path);
            f << body.str();
        }
        return kOk;
    }

    if (ust_cmd->parsed()) {
        set_workers(ust_o.workers);
        auto box = build_box(ust_o.d, ust_n, ust_o.lambda, parse_boundary(ust_boundary));
        const int root = box.root >= 0 ? box.root : 0;
        if (ust_stats) {
            Sink sink = make_sink(ust_o, "ust");
            sink.param("d", ust_o.d);
            sink.param("n", ust_n);
            sink.param("lambda", ust_o.lambda);
            sink.param("boundary", ust_boundary);
            sink.param("trials", static_cast<long long>(ust_trials));
            std::vector<std::vector<std::string>> body;
            for (long t = 0; t < ust_trials; ++t) {
                auto f = wilson_ust(box.graph, root, derive_stream_key(ust_o.seed, static_cast<std::uint64_t>(t)));
                auto st = forest_stats(box.graph, f);
                body.push_back(to_row({std::to_string(t), std::to_string(st.component_count)}));
            }
            emit_table(sink, {"trial", "components"}, body);
            sink.flush();
            return kOk;
        }
        std::ostringstream body;
        for (long t = 0; t < ust_trials; ++t) {
            auto f = wilson_ust(box.graph, root, derive_stream_key(ust_o.seed, static_cast<std::uint64_t>(t)));
            write_forest(body, f);
        }
        if (ust_o.output_path.empty()) {
            std::cout << body.str();
        } else {
            std::ofstream f(ust_o.output_path, std::ios::binary);
            if (!f) throw std::runtime_error("cannot open output path " + ust_o.output_path);
            f << body.str();
        }
        return kOk;
    }

    if (wsf_cmd->parsed()) {
        set_workers(wsf_o.workers);
        Sink sink = make_sink(wsf_o, "wsf-z1");
        sink.param("lambda", wsf_o.lambda);
        sink.param("n", wsf_n);
        sink.param("trials", static_cast<long long>(wsf_trials));
        auto dist = wsf_z1_sample(wsf_o.lambda, wsf_n, wsf_trials, wsf_o.seed);
        std::vector<std::vector<std::string>> body;
        for (const auto& row : dist.rows) {
            body.push_back(to_row({row.outcome, std::to_string(row.count), fmt(row.frequency), fmt(row.exact)}));
        }
        emit_table(sink, {"outcome", "count", "frequency", "exact_value_if_known"}, body);
        sink.flush();
        return kOk;
    }

    if (er_cmd->parsed()) {
        set_workers(er_o.workers);
        Sink sink = make_sink(er_o, "empirical-return");
        sink.param("d", er_o.d);
        sink.param("lambda", er_o.lambda);
        sink.param("n", static_cast<long long>(er_n));
        sink.param("trials", static_cast<long long>(er_trials));
        Lattice lat(er_o.d);
        auto rep = empirical_return(lat, er_o.lambda, er_n, er_trials, er_o.seed);
        emit_table(sink, {"estimate", "std_error", "trials"},
                   {to_row({fmt(rep.estimate), fmt(rep.std_error), std::to_string(rep.trials)})});
        sink.flush();
        return kOk;
    }

    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const DomainError& e) {
        std::cerr << json{{"error", DomainError::code()}, {"message", e.what()}}.dump() << "\n";
        return kDomainError;
    } catch (const BudgetError& e) {
        std::cerr << json{{"error", BudgetError::code()}, {"message", e.what()}}.dump() << "\n";
        return kBudgetError;
    } catch (const EmptyRegionError& e) {
        std::cerr << json{{"error", EmptyRegionError::code()}, {"message", e.what()}}.dump() << "\n";
        return kEmptyRegionError;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
}
