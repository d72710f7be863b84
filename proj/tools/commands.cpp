#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "pgdheat/csv.hpp"
#include "pgdheat/errors.hpp"
#include "pgdheat/metrics.hpp"
#include "pgdheat/version.hpp"

namespace pgdheat::cli {

namespace {

namespace fs = std::filesystem;

std::uint64_t fnv1a(const std::string& text)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

/// Manifest written atomically next to every output set.
class ManifestWriter {
public:
    ManifestWriter(const AppConfig& app, std::string command)
        : app_(app), start_(std::chrono::steady_clock::now())
    {
        j_["command"] = std::move(command);
        j_["seed"] = app.seed;
        j_["threads"] = app.threads;
        j_["config_hash"] = fnv1a(app.config_text);
        j_["versions"] = {{"pgdheat", kVersion}, {"model_format", kModelFormatVersion}};
    }

    void add_output(const fs::path& p) { outputs_.push_back(p.string()); }
    nlohmann::json& extra() { return j_["results"]; }

    void write()
    {
        j_["outputs"] = outputs_;
        j_["timings"] = {{"wall_s", std::chrono::duration<double>(
                                        std::chrono::steady_clock::now() - start_)
                                        .count()}};
        const fs::path path = app_.out / "manifest.json";
        const fs::path tmp = app_.out / "manifest.json.tmp";
        {
            std::ofstream os(tmp);
            if (!os)
                throw IoError("cannot open for writing: " + tmp.string());
            os << j_.dump(2) << '\n';
            if (!os)
                throw IoError("write failed: " + tmp.string());
        }
        fs::rename(tmp, path);
    }

private:
    const AppConfig& app_;
    std::chrono::steady_clock::time_point start_;
    nlohmann::json j_;
    std::vector<std::string> outputs_;
};

int guard(const std::function<void()>& body)
{
    try {
        body();
        return kExitOk;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const ShapeError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

MeasurementSet load_case_measurements(const AppConfig& app)
{
    if (app.measurements.empty())
        throw std::invalid_argument(
            "practical case needs a measurements file (case.measurements in the config)");
    return load_measurements(app.measurements);
}

struct PodTraining {
    LearningPeriod period;
    const char* name;
};

LearningPeriod parse_period(const std::string& name)
{
    if (name == "full") return LearningPeriod::Full;
    if (name == "half") return LearningPeriod::Half;
    if (name == "cycle1") return LearningPeriod::Cycle1;
    throw std::invalid_argument("unknown learning period: " + name +
                                " (expected full, half or cycle1)");
}

} // namespace

ParameterDomain domain_b_in(const DimensionlessProblem& problem,
                            const BoundarySignals& signals,
                            double margin,
                            double delta)
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : signals.u_in) {
        const double b = problem.bi_in * v;
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    }
    const double pad = std::max((hi - lo) * margin, delta);
    return ParameterDomain::spanning(lo - pad, hi + pad, delta);
}

ParameterDomain domain_b_out(const DimensionlessProblem& problem,
                             const BoundarySignals& signals,
                             double margin,
                             double delta)
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t n = 0; n < signals.u_out.size(); ++n) {
        const double b = -problem.bi_out * signals.u_out[n] - signals.q[n];
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    }
    const double pad = std::max((hi - lo) * margin, delta);
    return ParameterDomain::spanning(lo - pad, hi + pad, delta);
}

FieldSeries compute_reference(const AppConfig& app,
                              std::optional<int> nodes_override,
                              std::optional<double> dt_override)
{
    if (app.case_kind == CaseKind::Theoretical) {
        TheoreticalCaseConfig cfg = app.theoretical;
        if (nodes_override)
            cfg.nodes = *nodes_override;
        if (dt_override)
            cfg.dt = *dt_override;
        return run_theoretical_reference(setup_theoretical_case(cfg));
    }
    PracticalCaseConfig cfg = app.practical;
    if (nodes_override)
        cfg.nodes = *nodes_override - 1;
    const MeasurementSet data = load_case_measurements(app);
    return run_practical_case(cfg, data).eval_window;
}

BuiltModel build_theoretical_model(const TheoreticalCase& tc,
                                   const SnapshotMatrix& snapshots,
                                   const std::string& basis_name,
                                   int n_modes,
                                   double dzeta,
                                   const StoppingCriteria& criteria,
                                   std::uint64_t seed,
                                   double domain_margin,
                                   double delta_b_in,
                                   double delta_b_out)
{
    const auto t0 = std::chrono::steady_clock::now();
    BuiltModel out;
    const BasisKind kind = basis_kind_from_string(basis_name);
    switch (kind) {
    case BasisKind::Chebyshev: out.basis = chebyshev_basis(n_modes, tc.grid); break;
    case BasisKind::Legendre: out.basis = legendre_basis(n_modes, tc.grid); break;
    case BasisKind::Pod:
        out.basis = pod_basis(snapshots, n_modes);
        out.basis.grid = tc.grid;
        break;
    }
    out.basis.ranges = coefficient_ranges(snapshots, out.basis);

    const ParameterDomain din = domain_b_in(tc.problem, tc.signals, domain_margin, delta_b_in);
    const ParameterDomain dout = domain_b_out(tc.problem, tc.signals, domain_margin, delta_b_out);
    out.model = build_pgd(tc.dt * tc.problem.fourier, tc.problem.bi_in, tc.problem.bi_out,
                          out.basis, din, dout, dzeta, criteria, seed);
    out.offline_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

int cmd_reference(const AppConfig& app, const ReferenceOptions& opt)
{
    return guard([&] {
        fs::create_directories(app.out);
        ManifestWriter manifest(app, "reference");
        const FieldSeries series = compute_reference(app, opt.nodes, opt.dt);
        const fs::path out = app.out / opt.output_name;
        write_series_csv(series, out);
        manifest.add_output(out);
        manifest.extra() = {{"steps", series.size() - 1},
                            {"nodes", series.grid.size()}};
        manifest.write();
        std::printf("reference: %zu profiles on %zu nodes -> %s\n", series.size(),
                    series.grid.size(), out.string().c_str());
    });
}

int cmd_build(const AppConfig& app, const BuildOptions& opt)
{
    return guard([&] {
        fs::create_directories(app.out);
        ManifestWriter manifest(app, "build");
        const BasisKind kind = basis_kind_from_string(opt.basis);

        if (app.case_kind == CaseKind::Practical) {
            // The practical reference is Dirichlet-driven while the abacus
            // parameterizes Robin data, so only the basis is produced here.
            const MeasurementSet data = load_case_measurements(app);
            const PracticalCase pc = run_practical_case(app.practical, data);
            SnapshotMatrix snapshots;
            std::string snapshot_source;
            if (opt.snapshots) {
                snapshots = read_snapshots_csv(*opt.snapshots);
                snapshot_source = opt.snapshots->string();
            } else {
                const LearningPeriod period =
                    opt.train ? parse_period(*opt.train) : LearningPeriod::Full;
                snapshots = learning_split(pc.eval_window, period, pc.problem.t_ref);
                snapshot_source =
                    "practical:" + std::string(opt.train ? opt.train->c_str() : "full");
            }
            ApproximationBasis basis;
            switch (kind) {
            case BasisKind::Chebyshev: basis = chebyshev_basis(opt.n_modes, pc.grid); break;
            case BasisKind::Legendre: basis = legendre_basis(opt.n_modes, pc.grid); break;
            case BasisKind::Pod:
                basis = pod_basis(snapshots, opt.n_modes);
                basis.grid = pc.grid;
                break;
            }
            basis.ranges = coefficient_ranges(snapshots, basis);
            const fs::path basis_path = app.out / "basis.json";
            save_basis(basis, basis_path);
            manifest.add_output(basis_path);
            manifest.extra() = {{"basis", opt.basis},
                                {"n_modes", opt.n_modes},
                                {"snapshots", snapshot_source},
                                {"note", "practical case: basis only (Dirichlet-driven reference)"}};
            manifest.write();
            std::printf("build: %s N=%d basis from %s -> %s (practical case: basis only)\n",
                        opt.basis.c_str(), opt.n_modes, snapshot_source.c_str(),
                        basis_path.string().c_str());
            return;
        }

        SnapshotMatrix snapshots;
        std::string snapshot_source;
        if (opt.snapshots) {
            snapshots = read_snapshots_csv(*opt.snapshots);
            snapshot_source = opt.snapshots->string();
        } else {
            if (kind == BasisKind::Pod)
                throw std::invalid_argument(
                    "pod basis needs snapshots: pass --snapshots <csv> (or --train on the "
                    "practical case)");
            snapshots =
                to_snapshots(run_theoretical_reference(setup_theoretical_case(app.theoretical)));
            snapshot_source = "theoretical reference";
        }

        const TheoreticalCase tc = setup_theoretical_case(app.theoretical);
        const auto timing = time_block("offline", [&] {
            BuiltModel built =
                build_theoretical_model(tc, snapshots, opt.basis, opt.n_modes, opt.dzeta,
                                        opt.criteria, app.seed, opt.domain_margin,
                                        opt.delta_b_in, opt.delta_b_out);
            const fs::path basis_path = app.out / "basis.json";
            const fs::path model_path = app.out / "model.json";
            save_basis(built.basis, basis_path);
            save_pgd(built.model, model_path);
            manifest.add_output(basis_path);
            manifest.add_output(model_path);
            manifest.extra() = {{"basis", opt.basis},
                                {"n_modes", opt.n_modes},
                                {"dzeta", opt.dzeta},
                                {"pgd_modes", built.model.mode_count()},
                                {"snapshots", snapshot_source}};
            std::printf("build: %s N=%d dzeta=%g -> M=%d modes\n", opt.basis.c_str(),
                        opt.n_modes, opt.dzeta, built.model.mode_count());
        });
        manifest.extra()["offline_seconds"] = timing.seconds;
        manifest.write();
    });
}

int cmd_simulate(const AppConfig& app, const SimulateOptions& opt)
{
    return guard([&] {
        if (app.case_kind == CaseKind::Practical)
            throw std::invalid_argument(
                "simulate: the practical case reference is Dirichlet-driven; the PGD abacus "
                "parameterizes Robin data and cannot replay it.");
        fs::create_directories(app.out);
        ManifestWriter manifest(app, "simulate");

        const PgdModel model = load_pgd(opt.model);
        const fs::path basis_path =
            opt.basis ? *opt.basis : opt.model.parent_path() / "basis.json";
        const ApproximationBasis basis = load_basis(basis_path);
        if (basis.mode_count() != model.basis_mode_count())
            throw ShapeError("simulate: basis file N does not match the model");

        const TheoreticalCase tc = setup_theoretical_case(app.theoretical);
        FieldSeries reference;
        if (opt.reference)
            reference = read_series_csv(*opt.reference);
        else
            reference = run_theoretical_reference(tc);

        SimulateResult result;
        const auto timing = time_block("online", [&] {
            result = simulate(model, basis, tc.problem, tc.signals, tc.dt, tc.steps,
                              std::vector<double>(tc.grid.size(), 0.0),
                              opt.nearest_node ? EvalMode::NearestNode : EvalMode::Linear);
        });

        const ErrorReport eps = epsilon(reference, result.series);
        const fs::path series_path = app.out / "pgd_series.csv";
        write_series_csv(result.series, series_path);
        manifest.add_output(series_path);
        manifest.extra() = {{"epsilon", eps.value},
                            {"epsilon_argmax_step", eps.argmax_index},
                            {"zeta_clamp_events", result.zeta_clamp_events},
                            {"domain_clamp_events", result.domain_clamp_events},
                            {"online_seconds", timing.seconds},
                            {"pgd_modes", model.mode_count()}};
        manifest.write();
        std::printf("simulate: epsilon=%.6e (argmax step %zu), clamps zeta=%llu domain=%llu, "
                    "%.2fs online\n",
                    eps.value, eps.argmax_index,
                    static_cast<unsigned long long>(result.zeta_clamp_events),
                    static_cast<unsigned long long>(result.domain_clamp_events), timing.seconds);
    });
}

int cmd_sweep(const AppConfig& app, const SweepOptions& opt)
{
    return guard([&] {
        if (opt.bases.empty() || opt.n_modes.empty() || opt.dzetas.empty())
            throw std::invalid_argument("sweep: empty parameter grid");
        fs::create_directories(app.out);
        ManifestWriter manifest(app, "sweep");

        const std::string metric = !opt.metric.empty()
                                       ? opt.metric
                                       : (app.case_kind == CaseKind::Practical ? "nu" : "epsilon");
        if (metric != "nu" && metric != "epsilon")
            throw std::invalid_argument("sweep: metric must be 'nu' or 'epsilon'");
        if (metric == "epsilon" && app.case_kind == CaseKind::Practical)
            throw std::invalid_argument(
                "sweep: epsilon needs the Robin-parameterized abacus; the practical case "
                "supports --metric nu");

        struct Cell {
            std::string basis;
            int n;
            double dzeta;
            int m = 0;
            double value = std::numeric_limits<double>::quiet_NaN();
            double seconds = 0.0;
            std::string status = "ok";
        };
        std::vector<Cell> cells;
        for (const auto& b : opt.bases)
            for (int n : opt.n_modes)
                for (double dz : opt.dzetas)
                    cells.push_back({b, n, dz});

        // Shared per-case inputs, computed once.
        TheoreticalCase tc;
        SnapshotMatrix theoretical_snapshots;
        FieldSeries reference;
        PracticalCase pc;
        if (app.case_kind == CaseKind::Theoretical) {
            tc = setup_theoretical_case(app.theoretical);
            reference = run_theoretical_reference(tc);
            theoretical_snapshots = to_snapshots(reference);
        } else {
            pc = run_practical_case(app.practical, load_case_measurements(app));
        }

        auto run_cell = [&](Cell& cell) {
            const auto t0 = std::chrono::steady_clock::now();
            try {
                std::string basis_name = cell.basis;
                std::string train = "full";
                if (const auto colon = basis_name.find(':'); colon != std::string::npos) {
                    train = basis_name.substr(colon + 1);
                    basis_name = basis_name.substr(0, colon);
                }
                if (app.case_kind == CaseKind::Theoretical) {
                    if (metric == "nu") {
                        ApproximationBasis basis;
                        switch (basis_kind_from_string(basis_name)) {
                        case BasisKind::Chebyshev: basis = chebyshev_basis(cell.n, tc.grid); break;
                        case BasisKind::Legendre: basis = legendre_basis(cell.n, tc.grid); break;
                        case BasisKind::Pod:
                            basis = pod_basis(theoretical_snapshots, cell.n);
                            basis.grid = tc.grid;
                            break;
                        }
                        cell.value = nu(theoretical_snapshots, basis, cell.n, cell.dzeta).value;
                    } else {
                        BuiltModel built = build_theoretical_model(
                            tc, theoretical_snapshots, basis_name, cell.n, cell.dzeta,
                            opt.criteria, app.seed, opt.domain_margin, opt.delta_b_in,
                            opt.delta_b_out);
                        cell.m = built.model.mode_count();
                        const SimulateResult sim =
                            simulate(built.model, built.basis, tc.problem, tc.signals, tc.dt,
                                     tc.steps, std::vector<double>(tc.grid.size(), 0.0));
                        cell.value = epsilon(reference, sim.series).value;
                    }
                } else {
                    const SnapshotMatrix eval_set = to_snapshots(pc.eval_window);
                    const SnapshotMatrix training =
                        learning_split(pc.eval_window, parse_period(train), pc.problem.t_ref);
                    ApproximationBasis basis;
                    switch (basis_kind_from_string(basis_name)) {
                    case BasisKind::Chebyshev: basis = chebyshev_basis(cell.n, pc.grid); break;
                    case BasisKind::Legendre: basis = legendre_basis(cell.n, pc.grid); break;
                    case BasisKind::Pod:
                        basis = pod_basis(training, cell.n);
                        basis.grid = pc.grid;
                        break;
                    }
                    cell.value = nu(eval_set, basis, cell.n, cell.dzeta).value;
                }
            } catch (const std::exception& e) {
                cell.status = std::string("error: ") + e.what();
            }
            cell.seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        };

        // Independent cells; a small worker pool keeps builds deterministic
        // per cell (each build is single-threaded and seeded).
        std::atomic<std::size_t> next{0};
        const int workers = std::max(1, std::min<int>(app.threads, static_cast<int>(cells.size())));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= cells.size())
                        return;
                    run_cell(cells[i]);
                }
            });
        for (auto& th : pool)
            th.join();

        double t0_max = 0.0;
        for (const auto& c : cells)
            t0_max = std::max(t0_max, c.seconds);
        const fs::path out = app.out / "sweep.csv";
        {
            std::ofstream os(out);
            if (!os)
                throw IoError("cannot open for writing: " + out.string());
            os << "basis,N,dzeta,M,metric,value,rho_cpu,status\n";
            for (const auto& c : cells) {
                os << c.basis << ',' << c.n << ',' << csv::format(c.dzeta) << ',';
                if (c.m > 0)
                    os << c.m;
                os << ',' << metric << ',';
                if (std::isfinite(c.value))
                    os << csv::format(c.value);
                os << ',' << csv::format(t0_max > 0.0 ? c.seconds / t0_max : 0.0) << ','
                   << c.status << '\n';
            }
        }
        manifest.add_output(out);
        manifest.extra() = {{"cells", cells.size()}, {"metric", metric}, {"t0_seconds", t0_max}};
        manifest.write();
        std::printf("sweep: %zu cells -> %s (t0 = %.2fs)\n", cells.size(), out.string().c_str(),
                    t0_max);
    });
}

int cmd_model_error(const AppConfig& app, const ModelErrorOptions& opt)
{
    return guard([&] {
        fs::create_directories(app.out);
        ManifestWriter manifest(app, "model-error");
        TheoreticalCaseConfig cfg = app.theoretical;
        cfg.wall.thickness = opt.wall_thickness_m;
        const ModelErrorResult res = run_model_error_study(cfg, opt.radiation);

        const fs::path qin_path = app.out / "qin.csv";
        {
            std::ofstream os(qin_path);
            if (!os)
                throw IoError("cannot open for writing: " + qin_path.string());
            os << "time_s,qin_Wm2\n";
            for (std::size_t n = 0; n < res.times_s.size(); ++n)
                os << csv::format(res.times_s[n]) << ',' << csv::format(res.qin[n]) << '\n';
        }
        const fs::path err_path = app.out / "model_error.csv";
        write_series_csv(res.error, err_path);

        // Reconstructed radiative solution u_tilde = u - e, in kelvin.
        const TheoreticalCase tc = setup_theoretical_case(cfg);
        const FieldSeries reference = run_theoretical_reference(tc);
        const double u0 = celsius_to_kelvin(cfg.initial_temperature_c);
        FieldSeries utilde;
        utilde.grid = reference.grid;
        utilde.times = res.error.times;
        utilde.profiles.resize(reference.size());
        for (std::size_t n = 0; n < reference.size(); ++n) {
            auto& p = utilde.profiles[n];
            p.resize(reference.grid.size());
            for (std::size_t i = 0; i < p.size(); ++i)
                p[i] = redimensionalize(reference.profiles[n][i], u0) - res.error.profiles[n][i];
        }
        const fs::path ut_path = app.out / "u_tilde.csv";
        write_series_csv(utilde, ut_path);

        double qmin = 0.0, qmax = 0.0;
        for (double q : res.qin) {
            qmin = std::min(qmin, q);
            qmax = std::max(qmax, q);
        }
        manifest.add_output(qin_path);
        manifest.add_output(err_path);
        manifest.add_output(ut_path);
        manifest.extra() = {{"max_abs_error_K", res.max_abs_error},
                            {"argmax_node", res.argmax_node},
                            {"argmax_step", res.argmax_step},
                            {"inside_boundary_node", res.error.grid.size() - 1},
                            {"qin_min_Wm2", qmin},
                            {"qin_max_Wm2", qmax}};
        manifest.write();
        std::printf("model-error: max |e| = %.3f K at node %zu (inside boundary = node %zu), "
                    "qin in [%.1f, %.1f] W/m^2\n",
                    res.max_abs_error, res.argmax_node, res.error.grid.size() - 1, qmin, qmax);
    });
}

int cmd_uncertainty(const AppConfig& app, const UncertaintyOptions& opt)
{
    return guard([&] {
        fs::create_directories(app.out);
        ManifestWriter manifest(app, "uncertainty");
        const MeasurementSet data = load_case_measurements(app);
        const UncertaintyReport rep = experimental_uncertainty(data, opt.sensor);
        const fs::path out = app.out / "uncertainty.csv";
        {
            std::ofstream os(out);
            if (!os)
                throw IoError("cannot open for writing: " + out.string());
            os << "time_s,sigma_K\n";
            for (std::size_t n = 0; n < rep.sigma.size(); ++n)
                os << csv::format(data.times_s[n]) << ',' << csv::format(rep.sigma[n]) << '\n';
        }
        manifest.add_output(out);
        manifest.extra() = {{"sensor", opt.sensor}, {"sigma_mean_K", rep.sigma_mean}};
        manifest.write();
        std::printf("uncertainty: sensor T0%d sigma_mean = %.4f K -> %s\n", opt.sensor + 1,
                    rep.sigma_mean, out.string().c_str());
    });
}

int cmd_fixture(const AppConfig& app, const FixtureOptions& opt)
{
    return guard([&] {
        fs::create_directories(app.out);
        ManifestWriter manifest(app, "fixture");
        const MeasurementSet set = generate_practical_fixture(app.practical);
        const fs::path out = app.out / opt.output;
        write_measurements_csv(set, out);
        manifest.add_output(out);
        manifest.extra() = {{"samples", set.times_s.size()}};
        manifest.write();
        std::printf("fixture: %zu samples -> %s\n", set.times_s.size(), out.string().c_str());
    });
}

} // namespace pgdheat::cli
