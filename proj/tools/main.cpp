#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "pgdheat/version.hpp"

namespace {

using namespace pgdheat;
using namespace pgdheat::cli;

void add_case_options(CLI::App& app, AppConfig& cfg, std::string& case_kind)
{
    // Dotted names map to [case] / [wall] / [practical] sections of the TOML
    // config file; every one can also be overridden on the command line.
    app.add_option("--case.kind", case_kind, "Case study: theoretical or practical")
        ->capture_default_str();
    auto& t = cfg.theoretical;
    app.add_option("--case.u-out-mean-c", t.u_out_mean_c)->capture_default_str();
    app.add_option("--case.delta-out-1", t.delta_out_1)->capture_default_str();
    app.add_option("--case.omega-out-1", t.omega_out_1)->capture_default_str();
    app.add_option("--case.delta-out-2", t.delta_out_2)->capture_default_str();
    app.add_option("--case.omega-out-2", t.omega_out_2)->capture_default_str();
    app.add_option("--case.q-amplitude", t.q_amplitude)->capture_default_str();
    app.add_option("--case.omega-q", t.omega_q)->capture_default_str();
    app.add_option("--case.u-in-mean-c", t.u_in_mean_c)->capture_default_str();
    app.add_option("--case.delta-in", t.delta_in)->capture_default_str();
    app.add_option("--case.omega-in", t.omega_in)->capture_default_str();
    app.add_option("--case.h-in", t.h_in)->capture_default_str();
    app.add_option("--case.h-out", t.h_out)->capture_default_str();
    app.add_option("--case.horizon-s", t.horizon_s)->capture_default_str();
    app.add_option("--case.initial-temperature-c", t.initial_temperature_c)
        ->capture_default_str();
    app.add_option("--case.dt", t.dt)->capture_default_str();
    app.add_option("--case.nodes", t.nodes)->capture_default_str();
    app.add_option("--wall.thickness-m", t.wall.thickness)->capture_default_str();
    app.add_option("--wall.conductivity", t.wall.conductivity)->capture_default_str();
    app.add_option("--wall.volumetric-capacity", t.wall.volumetric_capacity)
        ->capture_default_str();
    auto& p = cfg.practical;
    app.add_option("--practical.thickness-m", p.wall.thickness)->capture_default_str();
    app.add_option("--practical.conductivity", p.wall.conductivity)->capture_default_str();
    app.add_option("--practical.volumetric-capacity", p.wall.volumetric_capacity)
        ->capture_default_str();
    app.add_option("--practical.u0-c", p.u0_c)->capture_default_str();
    app.add_option("--practical.nodes", p.nodes)->capture_default_str();
    app.add_option("--practical.sample-period-s", p.sample_period_s)->capture_default_str();
    app.add_option("--practical.init-hours", p.init_hours)->capture_default_str();
    app.add_option("--practical.eval-hours", p.eval_hours)->capture_default_str();
    app.add_option("--case.measurements", cfg.measurements,
                   "Measurement CSV for the practical case");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"PGD parametric models of transient wall heat conduction"};
    app.set_version_flag("--version", std::string(pgdheat::kVersion));
    app.set_config("--config", "", "TOML configuration file");
    app.require_subcommand(1);

    AppConfig cfg;
    std::string case_kind = "theoretical";
    app.add_option("--out", cfg.out, "Output directory")->capture_default_str();
    app.add_option("--seed", cfg.seed, "PRNG seed recorded in manifests")->capture_default_str();
    app.add_option("--threads", cfg.threads, "Worker threads for sweeps")->capture_default_str();
    add_case_options(app, cfg, case_kind);

    ReferenceOptions ref_opt;
    auto* ref = app.add_subcommand("reference", "Run the finite-difference reference solution");
    ref->add_option("--nodes", ref_opt.nodes, "Spatial nodes override");
    ref->add_option("--dt", ref_opt.dt, "Dimensionless time step override");
    ref->add_option("--output", ref_opt.output_name)->capture_default_str();

    BuildOptions build_opt;
    auto* build = app.add_subcommand("build", "Offline phase: basis + PGD model");
    build->add_option("--basis", build_opt.basis, "chebyshev | legendre | pod")
        ->capture_default_str();
    build->add_option("-N,--n-modes", build_opt.n_modes, "Approximation basis modes")
        ->capture_default_str();
    build->add_option("--dzeta", build_opt.dzeta, "Coefficient grid spacing")
        ->capture_default_str();
    build->add_option("--train", build_opt.train, "POD learning period: full | half | cycle1");
    build->add_option("--snapshots", build_opt.snapshots, "Snapshot CSV for POD / ranges");
    build->add_option("--eps-fixed-point", build_opt.criteria.eps_fixed_point)
        ->capture_default_str();
    build->add_option("--eps-enrichment", build_opt.criteria.eps_enrichment)
        ->capture_default_str();
    build->add_option("--max-fixed-point-iters", build_opt.criteria.max_fixed_point_iters)
        ->capture_default_str();
    build->add_option("--max-modes", build_opt.criteria.max_modes)->capture_default_str();
    build->add_option("--domain-margin", build_opt.domain_margin)->capture_default_str();
    build->add_option("--delta-b-in", build_opt.delta_b_in)->capture_default_str();
    build->add_option("--delta-b-out", build_opt.delta_b_out)->capture_default_str();

    SimulateOptions sim_opt;
    auto* sim = app.add_subcommand("simulate", "Online phase: march the abacus, report epsilon");
    sim->add_option("--model", sim_opt.model, "PGD model file")->required();
    sim->add_option("--basis-file", sim_opt.basis, "Basis JSON (default: basis.json next to model)");
    sim->add_option("--reference", sim_opt.reference, "Reference series CSV (recomputed if absent)");
    sim->add_flag("--nearest-node", sim_opt.nearest_node, "Table lookup without interpolation");

    SweepOptions sweep_opt;
    auto* sweep = app.add_subcommand("sweep", "Run a (basis, N, dzeta) grid and tabulate metrics");
    sweep->add_option("--bases", sweep_opt.bases,
                      "Comma-separated bases; pod may carry a training split, e.g. pod:cycle1")
        ->delimiter(',')
        ->capture_default_str();
    sweep->add_option("--n-modes", sweep_opt.n_modes, "Mode counts")
        ->delimiter(',')
        ->capture_default_str();
    sweep->add_option("--dzeta", sweep_opt.dzetas, "Coefficient grid spacings")
        ->delimiter(',')
        ->capture_default_str();
    sweep->add_option("--metric", sweep_opt.metric, "epsilon (default theoretical) or nu");
    sweep->add_option("--eps-fixed-point", sweep_opt.criteria.eps_fixed_point)
        ->capture_default_str();
    sweep->add_option("--eps-enrichment", sweep_opt.criteria.eps_enrichment)
        ->capture_default_str();
    sweep->add_option("--max-fixed-point-iters", sweep_opt.criteria.max_fixed_point_iters)
        ->capture_default_str();
    sweep->add_option("--max-modes", sweep_opt.criteria.max_modes)->capture_default_str();

    ModelErrorOptions me_opt;
    auto* me = app.add_subcommand("model-error", "Inside-radiation model-error study");
    me->add_option("--f-wall", me_opt.radiation.f_wall)->capture_default_str();
    me->add_option("--f-ground", me_opt.radiation.f_ground)->capture_default_str();
    me->add_option("--eps-wall", me_opt.radiation.eps_wall)->capture_default_str();
    me->add_option("--eps-ground", me_opt.radiation.eps_ground)->capture_default_str();
    me->add_option("--u-wall-c", me_opt.radiation.u_wall_c)->capture_default_str();
    me->add_option("--u-ground-c", me_opt.radiation.u_ground_c)->capture_default_str();
    me->add_option("--thickness-m", me_opt.wall_thickness_m)->capture_default_str();

    UncertaintyOptions unc_opt;
    auto* unc = app.add_subcommand("uncertainty", "Experimental uncertainty at an interior sensor");
    unc->add_option("--sensor", unc_opt.sensor, "Interior sensor index (1 = T02, 2 = T03)")
        ->capture_default_str();

    FixtureOptions fix_opt;
    auto* fix = app.add_subcommand("fixture", "Regenerate the synthetic measurement fixture");
    fix->add_option("--output", fix_opt.output)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (case_kind == "theoretical")
        cfg.case_kind = CaseKind::Theoretical;
    else if (case_kind == "practical")
        cfg.case_kind = CaseKind::Practical;
    else {
        std::fprintf(stderr, "error: unknown case kind '%s'\n", case_kind.c_str());
        return kExitConfig;
    }
    cfg.config_text = app.config_to_str(true, false);

    if (ref->parsed())
        return cmd_reference(cfg, ref_opt);
    if (build->parsed())
        return cmd_build(cfg, build_opt);
    if (sim->parsed())
        return cmd_simulate(cfg, sim_opt);
    if (sweep->parsed())
        return cmd_sweep(cfg, sweep_opt);
    if (me->parsed())
        return cmd_model_error(cfg, me_opt);
    if (unc->parsed())
        return cmd_uncertainty(cfg, unc_opt);
    if (fix->parsed())
        return cmd_fixture(cfg, fix_opt);
    return kExitConfig;
}
