// Command-line front end: reads a line-oriented config, runs one experiment,
// and emits deterministic CSV/JSON reports into the output directory.
//
// Exit codes: 0 success; 2 valid-but-negative result (uncertified product,
// audit violation, failed bound check); 1 any error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wanderlab/wanderlab.hpp"

namespace fs = std::filesystem;
using namespace wanderlab;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<int> horizon;
};

// Run-wide settings: command-line flags win over the [run] section, which is
// consumed up front so strict key checking never trips on it.
struct RunSettings {
    std::uint64_t seed = 1;
    std::optional<int> horizon;

    int horizon_or(int fallback) const { return horizon ? *horizon : fallback; }
};

RunSettings resolve_run(const Config& cfg, const CommonArgs& args) {
    RunSettings run;
    const int cfg_seed = cfg.get_int("run", "seed", 1);
    const int cfg_horizon = cfg.get_int("run", "horizon", 0);
    if (cfg_seed < 0) throw config_error("[run] seed must be non-negative");
    if (cfg_horizon < 0) throw config_error("[run] horizon must be positive");
    run.seed = args.seed ? *args.seed : std::uint64_t(cfg_seed);
    if (args.horizon) run.horizon = *args.horizon;
    else if (cfg_horizon > 0) run.horizon = cfg_horizon;
    return run;
}

std::string kind_name(TrichotomyKind k) { return to_string(k); }

// --------------------------------------------------------------------------

int cmd_classify(const Config& cfg, const CommonArgs& args, const RunSettings& run) {
    const std::uint64_t seed = run.seed;
    const int N = run.horizon_or(200);
    const ChainModel model = make_chain_model(cfg, seed);
    const ClassifyParams params = make_classify_params(cfg);
    const int pairs = cfg.get_int("classify", "pairs", 20);
    const double pair_radius = cfg.get_double("classify", "pair_radius", 0.3);
    const double pair_min_radius = cfg.get_double("classify", "pair_min_radius", 0.05);
    const std::string metric = cfg.get_string("classify", "metric", "exact");
    if (pairs < 1) throw config_error("[classify] pairs must be >= 1");
    if (!(pair_min_radius > 0.0 && pair_min_radius < pair_radius && pair_radius < 1.0))
        throw config_error("[classify] need 0 < pair_min_radius < pair_radius < 1");
    MetricMode mode;
    if (metric == "exact") mode = MetricMode::exact_disc_model;
    else if (metric == "bracketed") mode = MetricMode::bracketed;
    else throw config_error("[classify] metric must be 'exact' or 'bracketed'");
    cfg.finish();

    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    CsvWriter traces(fs::path(args.out_dir) / "traces.csv",
                     {"pair", "n", "u_lower", "u_exact", "u_upper"});
    ordered_json pair_records = ordered_json::array();
    std::map<std::string, int> kind_counts;
    for (int p = 0; p < pairs; ++p) {
        const double rad = pair_min_radius + (pair_radius - pair_min_radius) * unit(eng);
        const double ang = 2.0 * M_PI * unit(eng);
        const Complex w = std::polar(rad, ang);
        const OrbitPairTrace tr = pair_trace(model, Complex(0.0, 0.0), w, N, mode);
        const TrichotomyVerdict verdict = classify(tr, params);

        const std::size_t len = tr.series().size();
        for (std::size_t n = 0; n < len; ++n) {
            std::string lo, ex, up;
            if (mode == MetricMode::exact_disc_model) {
                ex = g17(tr.exact[n]);
            } else {
                lo = g17(tr.lower[n]);
                if (!std::isnan(tr.upper[n])) up = g17(tr.upper[n]);
            }
            traces.row({cell(p), cell(int(n)), lo, ex, up});
        }

        ordered_json rec;
        rec["pair"] = p;
        rec["w_re"] = w.real();
        rec["w_im"] = w.imag();
        rec["kind"] = kind_name(verdict.kind);
        rec["limit_estimate"] = verdict.limit_estimate;
        if (verdict.isometry_onset >= 0) rec["isometry_onset"] = verdict.isometry_onset;
        else rec["isometry_onset"] = nullptr;
        rec["collision_index"] = tr.collision_index;
        rec["escape_index"] = tr.escape_index;
        rec["final_u"] = tr.series().back();
        rec["diagnostics"] = verdict.diagnostics;
        pair_records.push_back(rec);
        kind_counts[kind_name(verdict.kind)] += 1;
    }

    ordered_json summary;
    std::string overall = "mixed";
    if (kind_counts.size() == 1) overall = kind_counts.begin()->first;
    summary["kind"] = overall;
    summary["limit_estimate"] = pair_records[0]["limit_estimate"];
    summary["isometry_onset"] = pair_records[0]["isometry_onset"];
    summary["horizon"] = N;
    summary["eps_contract"] = params.eps_contract;
    summary["eps_flat"] = params.eps_flat;
    summary["window"] = params.window;
    summary["metric"] = metric;
    summary["kind_counts"] = kind_counts;
    summary["pairs"] = pair_records;
    write_json(fs::path(args.out_dir) / "verdicts.json", summary);
    return 0;
}

// --------------------------------------------------------------------------

int cmd_ufield(const Config& cfg, const CommonArgs& args, const RunSettings& run) {
    const int N = run.horizon_or(60);
    const ChainModel model = make_chain_model(cfg, run.seed);
    const int side = cfg.get_int("ufield", "grid", 20);
    const double radius = cfg.get_double("ufield", "radius", 0.6);
    const int tail_window = cfg.get_int("ufield", "tail_window", 20);
    if (side < 2) throw config_error("[ufield] grid must be >= 2");
    if (!(radius > 0.0 && radius < 1.0)) throw config_error("[ufield] radius must lie in (0,1)");
    cfg.finish();

    std::vector<Complex> grid;
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) {
            const double x = -radius + 2.0 * radius * (i + 0.5) / side;
            const double y = -radius + 2.0 * radius * (j + 0.5) / side;
            if (std::hypot(x, y) <= radius) grid.emplace_back(x, y);
        }

    const UFieldReport rep = u_field(model, Complex(0.0, 0.0), grid, N, tail_window);

    CsvWriter field(fs::path(args.out_dir) / "ufield.csv", {"x", "y", "u"});
    double min_u = std::numeric_limits<double>::infinity(), max_u = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        field.row({cell(grid[i].real()), cell(grid[i].imag()), cell(rep.u_final[i])});
        min_u = std::min(min_u, rep.u_final[i]);
        max_u = std::max(max_u, rep.u_final[i]);
    }
    CsvWriter gaps(fs::path(args.out_dir) / "gaps.csv", {"n", "sup_gap"});
    int violations = 0;
    for (std::size_t i = 0; i < rep.sup_gaps.size(); ++i) {
        gaps.row({cell(rep.gap_start + int(i)), cell(rep.sup_gaps[i])});
        if (i > 0 && rep.sup_gaps[i] > rep.sup_gaps[i - 1] + 1e-12) ++violations;
    }

    ordered_json summary;
    summary["depth"] = N;
    summary["grid_points"] = int(grid.size());
    summary["tail_window"] = tail_window;
    summary["gap_start"] = rep.gap_start;
    summary["monotone_violations"] = violations;
    summary["min_u"] = min_u;
    summary["max_u"] = max_u;
    write_json(fs::path(args.out_dir) / "ufield.json", summary);
    return 0;
}

// --------------------------------------------------------------------------

int cmd_criterion(const Config& cfg, const CommonArgs& args, const RunSettings& run) {
    const int N = run.horizon_or(100);
    const FactorSchedule schedule = make_factor_schedule(cfg);
    cfg.finish();
    if (N < 1) throw config_error("criterion horizon must be >= 1");

    CsvWriter csv(fs::path(args.out_dir) / "criterion.csv",
                  {"n", "a_n", "gap_n", "partial_sum", "derivative_product"});
    CompositionState state(schedule);
    for (int n = 1; n <= N; ++n) {
        state.advance();
        csv.row({cell(n), cell(schedule.a(n)), cell(schedule.gap(n)),
                 cell(state.criterion_partial_sum), cell(state.derivative_at_zero)});
    }

    const CriterionReport rep = criterion_report(schedule, N);
    ordered_json summary;
    summary["n"] = N;
    summary["partial_sum"] = rep.partial_sum;
    summary["derivative_product"] = rep.derivative_product;
    switch (rep.verdict_hint) {
        case CriterionVerdict::diverging: summary["verdict_hint"] = "diverging"; break;
        case CriterionVerdict::converging: summary["verdict_hint"] = "converging"; break;
        default: summary["verdict_hint"] = "inconclusive"; break;
    }
    write_json(fs::path(args.out_dir) / "criterion.json", summary);
    return 0;
}

// --------------------------------------------------------------------------

int cmd_landau(const Config& cfg, const CommonArgs& args, const RunSettings&) {
    const std::vector<double> a_values = cfg.get_double_list(
        "landau", "a_values", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});
    const int resolution = cfg.get_int("landau", "resolution", 1024);
    const double bloch = cfg.get_double("landau", "bloch_constant", 0.433);
    cfg.finish();

    CsvWriter csv(fs::path(args.out_dir) / "landau.csv",
                  {"a", "derivative", "guaranteed", "measured", "resolution", "pass"});
    bool all_pass = true;
    for (double a : a_values) {
        const LandauReport rep = landau_check({BlaschkeFactor(a)}, resolution, bloch);
        csv.row({cell(a), cell(rep.derivative_at_zero), cell(rep.guaranteed),
                 cell(rep.measured), cell(rep.resolution), cell(rep.pass ? 1 : 0)});
        all_pass = all_pass && rep.pass;
    }

    ordered_json summary;
    summary["resolution"] = resolution;
    summary["bloch_constant"] = bloch;
    summary["r_star"] = std::tanh(0.5);
    summary["all_pass"] = all_pass;
    write_json(fs::path(args.out_dir) / "landau.json", summary);
    return all_pass ? 0 : 2;
}

// --------------------------------------------------------------------------

int cmd_surgery(const Config& cfg, const CommonArgs& args, const RunSettings&) {
    const SurgerySchedule schedule = make_surgery_schedule(cfg);
    const int n_max = cfg.get_int("surgery", "n_max", 40);
    const int theta_samples = cfg.get_int("surgery", "theta_samples", 4096);
    const double tail_tolerance = cfg.get_double("surgery", "tail_tolerance", 1e-6);
    const int k = cfg.get_int("surgery", "k", 1);
    cfg.finish();

    const InterpolationReport rep =
        certify_product(schedule, n_max, theta_samples, tail_tolerance, k);

    CsvWriter csv(fs::path(args.out_dir) / "annuli.csv", {"n", "delta0", "delta1", "C", "K"});
    for (const InterpolationRecord& r : rep.records)
        csv.row({cell(r.n), cell(r.delta0), cell(r.delta1), cell(r.C), cell(r.K)});

    ordered_json summary;
    summary["K_infinity_partial"] = rep.K_infinity_partial;
    summary["tail_bound"] = rep.tail_bound;
    summary["certified"] = rep.certified;
    summary["eta"] = rep.eta;
    summary["theta_samples"] = rep.theta_samples;
    summary["feasible"] = rep.feasible;
    summary["offending_index"] = rep.offending_index;
    summary["envelope_alpha"] = rep.envelope_alpha;
    summary["envelope_q"] = rep.envelope_q;
    summary["n_start"] = schedule.start_index;
    summary["n_max"] = n_max;
    summary["certification_is_heuristic_extrapolation"] = true;
    write_json(fs::path(args.out_dir) / "surgery.json", summary);
    return rep.certified ? 0 : 2;
}

// --------------------------------------------------------------------------

int cmd_qhd(const Config& cfg, const CommonArgs& args, const RunSettings& run) {
    const std::uint64_t seed = run.seed;
    const std::string domain_name = cfg.get_string("qhd", "domain", "disc");
    const int resolution = cfg.get_int("qhd", "resolution", 512);
    const int pairs = cfg.get_int("qhd", "pairs", 48);
    const int sources = cfg.get_int("qhd", "sources", 8);
    const int radial_points = cfg.get_int("qhd", "radial_points", 12);
    const double max_radius = cfg.get_double("qhd", "max_radius", 0.9);
    const double rho = cfg.get_double("qhd", "rho", 0.2);
    cfg.finish();
    if (pairs < 1 || sources < 1 || sources > pairs)
        throw config_error("[qhd] need 1 <= sources <= pairs");
    if (!(max_radius > 0.0 && max_radius < 1.0))
        throw config_error("[qhd] max_radius must lie in (0,1)");

    HyperbolicDomain dom;
    if (domain_name == "disc") dom = UnitDisc{};
    else if (domain_name == "annulus") dom = RoundAnnulus{rho};
    else throw config_error("[qhd] domain must be 'disc' or 'annulus'");
    const bool is_disc = domain_name == "disc";

    // Radial profile from the domain's natural base point.
    const Complex base = is_disc ? Complex(0.0, 0.0) : Complex(0.5 * (rho + 1.0), 0.0);
    const QuasiHyperbolicField base_field = QuasiHyperbolicField::from(dom, base, resolution);
    CsvWriter radial(fs::path(args.out_dir) / "qhd_radial.csv",
                     {"x", "k", "closed_form", "rel_error"});
    double max_rel_error = 0.0;
    for (int i = 1; i <= radial_points; ++i) {
        const double lo = is_disc ? 0.0 : rho + 0.02;
        const double x = lo + (max_radius - lo) * i / (radial_points + 1.0);
        const double k = base_field.to(Complex(x, 0.0));
        std::string closed, rel;
        if (is_disc) {
            const double exact = -std::log1p(-x);
            closed = g17(exact);
            if (exact > 1e-9) {
                const double e = std::abs(k - exact) / exact;
                rel = g17(e);
                max_rel_error = std::max(max_rel_error, e);
            }
        }
        radial.row({cell(x), cell(k), closed, rel});
    }

    // Random pairs grouped by source; on the disc, check the two-sided
    // comparison with the hyperbolic distance: k/2 - tol <= d <= 2k + tol.
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw_point = [&]() -> Complex {
        for (;;) {
            const double x = (2.0 * unit(eng) - 1.0) * max_radius;
            const double y = (2.0 * unit(eng) - 1.0) * max_radius;
            const Complex z(x, y);
            if (is_disc ? std::abs(z) <= max_radius
                        : (std::abs(z) >= rho + 0.05 && std::abs(z) <= max_radius))
                return z;
        }
    };
    CsvWriter pairs_csv(fs::path(args.out_dir) / "qhd_pairs.csv",
                        {"x1", "y1", "x2", "y2", "k", "d_hyperbolic", "bounds_ok"});
    int bound_violations = 0;
    const int per_source = (pairs + sources - 1) / sources;
    int emitted = 0;
    for (int s = 0; s < sources && emitted < pairs; ++s) {
        const Complex src = draw_point();
        const QuasiHyperbolicField field = QuasiHyperbolicField::from(dom, src, resolution);
        for (int t = 0; t < per_source && emitted < pairs; ++t, ++emitted) {
            const Complex dst = draw_point();
            const double k = field.to(dst);
            std::string d_str, ok_str;
            if (is_disc) {
                const double d = disc_distance(src, dst);
                const double tol = 0.05 * k + 0.05;
                const bool ok = (0.5 * k - tol <= d) && (d <= 2.0 * k + tol);
                if (!ok) ++bound_violations;
                d_str = g17(d);
                ok_str = cell(ok ? 1 : 0);
            }
            pairs_csv.row({cell(src.real()), cell(src.imag()), cell(dst.real()),
                           cell(dst.imag()), cell(k), d_str, ok_str});
        }
    }

    ordered_json summary;
    summary["domain"] = domain_name;
    summary["resolution"] = resolution;
    summary["pairs"] = pairs;
    summary["max_rel_error_radial"] = max_rel_error;
    summary["bound_violations"] = bound_violations;
    write_json(fs::path(args.out_dir) / "qhd.json", summary);
    const bool bad = bound_violations > 0 || (is_disc && max_rel_error > 0.05);
    return bad ? 2 : 0;
}

// --------------------------------------------------------------------------

int cmd_audit(const Config& cfg, const CommonArgs& args, const RunSettings& run) {
    const std::uint64_t seed = run.seed;
    const int horizon = run.horizon_or(50);
    const ChainModel model = make_chain_model(cfg, seed);
    const SurgerySchedule schedule = make_surgery_schedule(cfg);
    const int samples = cfg.get_int("audit", "samples", 500);
    const std::string region_name = cfg.get_string("audit", "region", "omega");
    cfg.finish();
    AuditRegion region;
    if (region_name == "omega") region = AuditRegion::omega_annulus;
    else if (region_name == "disc") region = AuditRegion::chain_disc;
    else throw config_error("[audit] region must be 'omega' or 'disc'");

    const AuditReport rep = audit_no_revisit(schedule, model, samples, horizon, seed, region);

    CsvWriter csv(fs::path(args.out_dir) / "audit.csv",
                  {"sample", "start_re", "start_im", "fate", "steps", "annuli_entered",
                   "max_entries", "last_chain_index"});
    int max_entered = 0;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const AuditRow& row = rep.rows[i];
        csv.row({cell(int(i)), cell(row.start.real()), cell(row.start.imag()), row.fate,
                 cell(row.steps), cell(row.annuli_entered), cell(row.max_entries),
                 cell(row.last_chain_index)});
        max_entered = std::max(max_entered, row.annuli_entered);
    }

    ordered_json summary;
    summary["max_visits"] = rep.max_visits;
    summary["max_annuli_entered"] = max_entered;
    summary["pole_captures"] = rep.pole_captures;
    summary["escapes"] = rep.escapes;
    summary["completed"] = rep.completed;
    summary["samples"] = int(rep.rows.size());
    summary["horizon"] = horizon;
    summary["region"] = region_name;
    summary["region_detected"] = rep.region_detected;
    summary["sample_inner"] = rep.sample_inner;
    summary["sample_outer"] = rep.sample_outer;
    write_json(fs::path(args.out_dir) / "audit.json", summary);
    return rep.max_visits <= 1 ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperbolic-distance dynamics on translated-disc chains: "
                 "orbit classification, composition criteria, annulus-gluing "
                 "certification, and metric estimation."};
    app.require_subcommand(1);
    app.fallthrough();

    CommonArgs args;
    long long seed_flag = 0;
    int horizon_flag = 0;
    app.add_option("--config", args.config_path, "configuration file (required)");
    app.add_option("--out", args.out_dir, "output directory (default: out)");
    auto* opt_seed = app.add_option("--seed", seed_flag, "override [run] seed");
    auto* opt_horizon = app.add_option("--horizon", horizon_flag, "override [run] horizon");

    app.add_subcommand("classify",
                       "trace random orbit pairs and classify each distance sequence; "
                       "writes traces.csv (pair,n,u_lower,u_exact,u_upper) and verdicts.json");
    app.add_subcommand("ufield",
                       "distance field u_N over a grid with sup-norm convergence gaps; "
                       "writes ufield.csv (x,y,u), gaps.csv (n,sup_gap), ufield.json");
    app.add_subcommand("criterion",
                       "partial criterion sum and derivative product of a factor schedule; "
                       "writes criterion.csv (n,a_n,gap_n,partial_sum,derivative_product) "
                       "and criterion.json");
    app.add_subcommand("landau",
                       "covered hyperbolic disc radius vs. the guaranteed lower bound; "
                       "writes landau.csv (a,derivative,guaranteed,measured,resolution,pass) "
                       "and landau.json");
    app.add_subcommand("surgery",
                       "per-annulus gluing bounds and certified distortion product; "
                       "writes annuli.csv (n,delta0,delta1,C,K) and surgery.json");
    app.add_subcommand("qhd",
                       "quasi-hyperbolic distance estimates with closed-form and two-sided "
                       "checks; writes qhd_radial.csv, qhd_pairs.csv, qhd.json");
    app.add_subcommand("audit",
                       "orbit audit of the glued piecewise map counting annulus entries; "
                       "writes audit.csv and audit.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (*opt_seed) {
        if (seed_flag < 0) {
            std::cerr << "error: --seed must be non-negative\n";
            return 1;
        }
        args.seed = std::uint64_t(seed_flag);
    }
    if (*opt_horizon) args.horizon = horizon_flag;

    try {
        if (args.config_path.empty()) throw config_error("--config is required");
        const Config cfg = Config::parse_file(args.config_path);
        const RunSettings run = resolve_run(cfg, args);
        fs::create_directories(args.out_dir);
        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "classify") return cmd_classify(cfg, args, run);
        if (cmd == "ufield") return cmd_ufield(cfg, args, run);
        if (cmd == "criterion") return cmd_criterion(cfg, args, run);
        if (cmd == "landau") return cmd_landau(cfg, args, run);
        if (cmd == "surgery") return cmd_surgery(cfg, args, run);
        if (cmd == "qhd") return cmd_qhd(cfg, args, run);
        if (cmd == "audit") return cmd_audit(cfg, args, run);
        std::cerr << "error: unknown command '" << cmd << "'\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
