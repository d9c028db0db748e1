#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "esboot/bootstrap.hpp"
#include "esboot/es_estimation.hpp"
#include "esboot/experiments.hpp"
#include "esboot/qmle.hpp"
#include "io.hpp"

namespace esboot::cli {

namespace {

namespace fs = std::filesystem;

struct CommonArgs {
    std::optional<fs::path> config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::optional<fs::path> out;
    std::optional<fs::path> input;
    bool full_scale = false;
};

RunSettings settings_from(const ConfigObject& c, const CommonArgs& a) {
    RunSettings s;
    s.seed = a.seed.value_or(c.u64("seed", s.seed));
    s.workers = a.workers.value_or(c.count("workers", s.workers));
    s.out_dir = a.out.value_or(fs::path(c.string("out", s.out_dir.string())));
    s.full_scale = a.full_scale;
    return s;
}

fs::path input_path(const ConfigObject& c, const CommonArgs& a) {
    if (a.input) return *a.input;
    if (!c.has("input")) throw CliError(ErrorKind::Config, c.path() + ".input: required (or pass --input)");
    return c.string("input", "");
}

json theta_json(const GarchParams& p) { return {{"omega", p.omega}, {"alpha", p.alpha}, {"beta", p.beta}}; }

json interval_json(const Interval& i) { return {{"lo", i.lo}, {"hi", i.hi}, {"length", i.length()}}; }

template <int R, int C>
json matrix_json(const Eigen::Matrix<double, R, C>& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

json fit_summary(const FitResult& f) {
    return {{"theta_hat", theta_json(f.theta_hat)},
            {"loglik", f.loglik},
            {"iterations", f.iterations},
            {"evaluations", f.evaluations},
            {"converged", f.converged},
            {"n", f.n()},
            {"sigma2_next", f.sigma2_next()}};
}

FitResult fit_or_fail(const std::vector<double>& returns, const QmleOptions& o) {
    try {
        return fit(returns, o);
    } catch (const std::invalid_argument& e) {
        throw CliError(ErrorKind::Validation, e.what());
    }
}

void require_converged(const FitResult& f) {
    if (!f.converged) throw CliError(ErrorKind::Convergence, "QML fit did not converge");
}

#define ESBOOT_COMMON_KEYS "seed", "workers", "out"  // accepted by every command

int cmd_simulate(const json& cfg, const CommonArgs& a, std::ostream& log) {
    const ConfigObject c(cfg, "config",
                         {ESBOOT_COMMON_KEYS, "persistence", "theta0", "dist", "nu", "n", "burn_in"});
    const RunSettings run = settings_from(c, a);
    GarchParams theta = study_theta0(Persistence::High);
    if (c.has("persistence")) {
        const std::string p = c.string("persistence", "high");
        if (p != "high" && p != "low") throw CliError(ErrorKind::Config, "config.persistence: expected \"high\" or \"low\"");
        theta = study_theta0(p == "high" ? Persistence::High : Persistence::Low);
    }
    theta = parse_theta(c, "theta0", theta);
    if (!theta.is_positive())
        throw CliError(ErrorKind::Validation, "theta0: need omega > 0, alpha >= 0 and beta >= 0");
    if (!(theta.persistence() < 1.0))
        throw CliError(ErrorKind::Validation, "theta0: alpha + beta must be < 1 for a stationary simulation");
    const InnovationDist dist = parse_dist(c);
    const std::size_t n = c.count("n", 500);
    if (n == 0) throw CliError(ErrorKind::Validation, "config.n: must be at least 1");
    const std::size_t burn = c.count("burn_in", 1000);

    RngStream rng = RngStream::derive(run.seed, StreamTag::Simulation, 0);
    const SimulatedPath path = Garch11{}.simulate(theta, dist, n, burn, rng);

    auto out = open_output(run.out_dir, "returns.csv");
    out << "t,epsilon,sigma2_true,sigma2_next\n";
    for (std::size_t t = 0; t < n; ++t) {
        out << t + 1 << ',';
        put_number(out, path.returns[t]);
        out << ',';
        put_number(out, path.sigma2_true[t]);
        out << ',';
        put_number(out, path.sigma2_true[t + 1]);
        out << '\n';
    }
    log << "simulate: wrote " << n << " rows to " << (run.out_dir / "returns.csv").string() << '\n';
    return 0;
}

int cmd_fit(const json& cfg, const CommonArgs& a, std::ostream& log) {
    const ConfigObject c(cfg, "config", {ESBOOT_COMMON_KEYS, "input", "qmle"});
    const RunSettings run = settings_from(c, a);
    const auto returns = read_returns_csv(input_path(c, a));
    const FitResult f = fit_or_fail(returns, parse_qmle(c));

    json j = fit_summary(f);
    j["residuals"] = f.residuals;
    j["sigma2"] = f.filter_at_opt.sigma2;
    auto out = open_output(run.out_dir, "fit.json");
    write_json(out, j);
    log << "fit: theta_hat = (" << f.theta_hat.omega << ", " << f.theta_hat.alpha << ", " << f.theta_hat.beta
        << "), converged = " << std::boolalpha << f.converged << '\n';
    require_converged(f);
    return 0;
}

int cmd_es(const json& cfg, const CommonArgs& a, std::ostream& log) {
    const ConfigObject c(cfg, "config", {ESBOOT_COMMON_KEYS, "input", "qmle", "alpha", "gamma"});
    const RunSettings run = settings_from(c, a);
    const double alpha = c.number("alpha", 0.05);
    const double gamma = c.number("gamma", 0.10);
    if (!(gamma > 0.0 && gamma < 1.0)) throw CliError(ErrorKind::Validation, "config.gamma: must lie in (0, 1)");
    const auto returns = read_returns_csv(input_path(c, a));
    const FitResult f = fit_or_fail(returns, parse_qmle(c));
    require_converged(f);

    EsEstimate es;
    GammaHat g;
    try {
        es = conditional_es(f, alpha);
        g = gamma_hat(f, alpha);
    } catch (const SingularInformationError& e) {
        throw CliError(ErrorKind::Convergence, e.what());
    } catch (const std::invalid_argument& e) {
        throw CliError(ErrorKind::Validation, e.what());
    }
    const AsymptoticInterval ai = asymptotic_interval(f, es, g, gamma);

    json j;
    j["fit"] = fit_summary(f);
    j["es"] = {{"alpha", es.alpha},         {"xi_hat", es.xi_hat},   {"mu_hat", es.mu_hat},
               {"sigma_next", es.sigma_next}, {"es_hat", es.es_hat}, {"tail_count", es.tail_count}};
    j["gamma_hat"] = {{"kappa_hat", g.kappa_hat},
                      {"Omega_hat", matrix_json(Eigen::Matrix<double, 3, 1>(g.Omega_hat))},
                      {"J_hat", matrix_json(Eigen::Matrix3d(g.J_hat))},
                      {"J_inv", matrix_json(Eigen::Matrix3d(g.J_inv))},
                      {"p_hat", g.p_hat},
                      {"q_hat", g.q_hat},
                      {"xi_hat", g.xi_hat},
                      {"mu_hat", g.mu_hat},
                      {"sigma2_alpha_hat", g.sigma2_alpha_hat},
                      {"x_alpha_hat", g.x_alpha_hat},
                      {"phi_alpha_hat", g.phi_alpha_hat},
                      {"nu_alpha_hat", g.nu_alpha_hat},
                      {"Gamma", matrix_json(Eigen::Matrix4d(g.Gamma))}};
    j["asymptotic_interval"] = interval_json(ai.interval);
    j["asymptotic_interval"]["gamma"] = gamma;
    j["asymptotic_interval"]["quadratic_form"] = ai.quadratic_form;
    j["asymptotic_interval"]["clamped"] = ai.clamped;
    if (ai.clamped) log << "es: warning: negative quadratic form clamped to 0\n";

    auto out = open_output(run.out_dir, "es.json");
    write_json(out, j);
    log << "es: ES_hat = " << es.es_hat << ", interval [" << ai.interval.lo << ", " << ai.interval.hi << "]\n";
    return 0;
}

int cmd_bootstrap(const json& cfg, const CommonArgs& a, std::ostream& log) {
    const ConfigObject c(cfg, "config", {ESBOOT_COMMON_KEYS, "input", "qmle", "alpha", "gamma", "B"});
    const RunSettings run = settings_from(c, a);
    const double alpha = c.number("alpha", 0.05);
    const double gamma = c.number("gamma", 0.10);
    const std::size_t B = run.full_scale ? 2000 : c.count("B", 500);
    if (!(gamma > 0.0 && gamma < 1.0)) throw CliError(ErrorKind::Validation, "config.gamma: must lie in (0, 1)");
    if (B < 100) throw CliError(ErrorKind::Validation, "config.B: need at least 100 replicates");
    const QmleOptions opts = parse_qmle(c);
    auto returns = read_returns_csv(input_path(c, a));
    FitResult f = fit_or_fail(returns, opts);
    require_converged(f);

    BootstrapRun br;
    IntervalSet iv;
    BootstrapContext ctx;
    try {
        ctx = BootstrapContext::make(std::move(returns), std::move(f), alpha, opts);
        br = run_bootstrap(ctx, B, derive_seed(run.seed, StreamTag::Bootstrap, 0), run.workers);
        iv = bootstrap_intervals(br.replicates, ctx.es_hat, ctx.n(), gamma);
    } catch (const BootstrapFailure& e) {
        throw CliError(ErrorKind::Convergence, e.what());
    } catch (const std::invalid_argument& e) {
        throw CliError(ErrorKind::Validation, e.what());
    }

    json j;
    j["fit"] = fit_summary(ctx.fit);
    j["es_hat"] = ctx.es_hat;
    j["alpha"] = alpha;
    j["B"] = B;
    j["failures"] = br.failures;
    j["intervals"] = {{"gamma", iv.gamma},
                      {"B_effective", iv.B_effective},
                      {"ep", interval_json(iv.ep)},
                      {"rt", interval_json(iv.rt)},
                      {"sy", interval_json(iv.sy)}};
    auto out = open_output(run.out_dir, "bootstrap.json");
    write_json(out, j);

    auto rep = open_output(run.out_dir, "replicates.csv");
    rep << "b,omega_star,alpha_star,beta_star,mu_star,es_star,tail_count,converged\n";
    for (std::size_t b = 0; b < br.replicates.size(); ++b) {
        const auto& r = br.replicates[b];
        rep << b << ',';
        for (double v : {r.theta_star.omega, r.theta_star.alpha, r.theta_star.beta, r.mu_star, r.es_star}) {
            put_number(rep, v);
            rep << ',';
        }
        rep << r.tail_count << ',' << (r.converged ? 1 : 0) << '\n';
    }
    log << "bootstrap: " << B << " replicates, " << br.failures << " failed; EP [" << iv.ep.lo << ", " << iv.ep.hi
        << "]\n";
    return 0;
}

std::vector<Scenario> table_grid(const RunSettings& run, const Scenario& base) {
    std::vector<Scenario> out;
    for (const auto& dist : {InnovationDist::student_t(6), InnovationDist::normal()}) {
        for (double alpha : {0.05, 0.01}) {
            for (Persistence p : {Persistence::Low, Persistence::High}) {
                for (std::size_t n : {500u, 1000u, 5000u, 10000u}) {
                    Scenario s = make_scenario(p, dist, alpha, n, base.gamma, base.B, base.S, run.seed);
                    s.burn_in = base.burn_in;
                    if (run.full_scale) s.B = s.S = 2000;
                    out.push_back(s);
                }
            }
        }
    }
    return out;
}

int cmd_study(const json& cfg, const CommonArgs& a, std::ostream& log) {
    const ConfigObject c(cfg, "config", {ESBOOT_COMMON_KEYS, "scenarios", "tables", "include_asymptotic"});
    const RunSettings run = settings_from(c, a);
    const Scenario base = make_scenario(Persistence::High, InnovationDist::student_t(6), 0.05, 500, 0.10, 500, 500,
                                        run.seed);
    std::vector<Scenario> scenarios;
    if (c.boolean("tables", false)) {
        if (c.has("scenarios")) throw CliError(ErrorKind::Config, "config: give either tables or scenarios, not both");
        scenarios = table_grid(run, base);
    } else {
        const auto list = c.array("scenarios");
        for (std::size_t i = 0; i < list.size(); ++i)
            scenarios.push_back(parse_scenario(list[i], "config.scenarios[" + std::to_string(i) + "]", run, base));
        if (list.empty()) scenarios.push_back(parse_scenario(json::object(), "config.scenario", run, base));
    }

    std::vector<StudySummary> summaries;
    for (const auto& s : scenarios) {
        log << "study: " << s.id << " (S=" << s.S << ", B=" << s.B << ")\n" << std::flush;
        const std::size_t step = std::max<std::size_t>(1, s.S / 10);
        try {
            auto progress = [&](std::size_t done) {
                if (done % step == 0) log << "  " << done << '/' << s.S << '\n' << std::flush;
            };
            summaries.push_back(run_study(s, run.workers, progress).summary);
        } catch (const StudyAborted& e) {
            throw CliError(ErrorKind::Convergence, e.what());
        }
    }
    auto out = open_output(run.out_dir, "study.csv");
    write_study_csv(out, summaries, c.boolean("include_asymptotic", false));
    return 0;
}

int cmd_density(const json& cfg, const CommonArgs& a, std::ostream& log) {
    json scenario_part = json::object();
    json rest = json::object();
    if (!cfg.is_object()) throw CliError(ErrorKind::Config, "config: expected a JSON object");
    for (const auto& [k, v] : cfg.items()) {
        if (k == "seed" || k == "workers" || k == "out" || k == "grid_points") {
            rest[k] = v;
        } else {
            scenario_part[k] = v;
        }
    }
    const ConfigObject c(rest, "config", {ESBOOT_COMMON_KEYS, "grid_points"});
    const RunSettings run = settings_from(c, a);
    const Scenario base = make_scenario(Persistence::High, InnovationDist::student_t(6), 0.05, 5000, 0.10, 500, 500,
                                        run.seed);
    const Scenario s = parse_scenario(scenario_part, "config", run, base);
    const std::size_t grid = c.count("grid_points", 512);
    if (grid < 2) throw CliError(ErrorKind::Validation, "config.grid_points: need at least 2");

    log << "density: " << s.id << " (S=" << s.S << ", B=" << s.B << ")\n" << std::flush;
    DensityComparison d;
    try {
        d = density_comparison(s, grid, run.workers);
    } catch (const BootstrapFailure& e) {
        throw CliError(ErrorKind::Convergence, e.what());
    }
    {
        auto out = open_output(run.out_dir, "density_sampling.csv");
        write_curve_csv(out, d.sampling);
        auto out2 = open_output(run.out_dir, "density_bootstrap.csv");
        write_curve_csv(out2, d.bootstrap);
    }
    auto mode_of = [](const KdeCurve& k) {
        return k.x[static_cast<std::size_t>(std::max_element(k.density.begin(), k.density.end()) - k.density.begin())];
    };
    json j = {{"scenario_id", s.id},
              {"sampling_count", d.sampling_draws.size()},
              {"bootstrap_count", d.bootstrap_draws.size()},
              {"excluded", d.excluded},
              {"ks_distance", d.ks_distance},
              {"sampling_bandwidth", d.sampling.bandwidth},
              {"bootstrap_bandwidth", d.bootstrap.bandwidth},
              {"sampling_mode", mode_of(d.sampling)},
              {"bootstrap_mode", mode_of(d.bootstrap)},
              {"sampling_local_maxima", local_maxima(d.sampling.density).size()},
              {"bootstrap_local_maxima", local_maxima(d.bootstrap.density).size()}};
    auto out = open_output(run.out_dir, "density.json");
    write_json(out, j);
    log << "density: KS distance " << d.ks_distance << '\n';
    return 0;
}

void report(std::ostream& err, ErrorKind kind, const std::string& message) {
    const json j = {{"error", {{"kind", error_kind_name(kind)}, {"message", message}}}};
    err << j.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& log, std::ostream& err) {
    CLI::App app{"Conditional Expected Shortfall for GARCH(1,1): estimation, bootstrap intervals, Monte Carlo studies",
                 "esboot"};
    app.require_subcommand(1);
    CommonArgs common;

    using Handler = int (*)(const json&, const CommonArgs&, std::ostream&);
    struct Sub {
        const char* name;
        const char* help;
        Handler fn;
    };
    const std::vector<Sub> subs{
        {"simulate", "Simulate a GARCH(1,1) path; writes returns.csv", cmd_simulate},
        {"fit", "QML fit of a return series; writes fit.json", cmd_fit},
        {"es", "Conditional ES, plug-in covariance and delta-method interval; writes es.json", cmd_es},
        {"bootstrap", "Fixed-design residual bootstrap intervals; writes bootstrap.json and replicates.csv",
         cmd_bootstrap},
        {"study", "Monte Carlo coverage study; writes study.csv", cmd_study},
        {"density", "Sampling vs bootstrap density of the scaled mu estimator; writes density_*.csv", cmd_density},
    };
    std::vector<CLI::App*> apps;
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("--config", common.config, "JSON configuration file");
        sub->add_option("--seed", common.seed, "Master seed (u64)");
        sub->add_option("--workers", common.workers, "Worker threads, 0 for all cores");
        sub->add_option("--out", common.out, "Output directory");
        sub->add_option("--input", common.input, "Input CSV with an epsilon column");
        sub->add_flag("--full-scale", common.full_scale, "Use S = B = 2000");
        apps.push_back(sub);
    }

    std::vector<std::string> argv_store{"esboot"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        log << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        log << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        report(err, ErrorKind::Usage, e.what());
        return exit_code(ErrorKind::Usage);
    }

    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (!apps[i]->parsed()) continue;
        try {
            return subs[i].fn(load_config(common.config), common, log);
        } catch (const CliError& e) {
            report(err, e.kind(), e.what());
            return exit_code(e.kind());
        } catch (const std::invalid_argument& e) {
            report(err, ErrorKind::Validation, e.what());
            return exit_code(ErrorKind::Validation);
        } catch (const std::exception& e) {
            report(err, ErrorKind::Internal, e.what());
            return exit_code(ErrorKind::Internal);
        }
    }
    report(err, ErrorKind::Usage, "no subcommand given");
    return exit_code(ErrorKind::Usage);
}

}  // namespace esboot::cli
