#include "pgdheat/studies.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "pgdheat/csv.hpp"
#include "pgdheat/errors.hpp"
#include "pgdheat/grid.hpp"

namespace pgdheat {

SignalSample theoretical_signals(const TheoreticalCaseConfig& config, double t_seconds)
{
    if (t_seconds < 0.0)
        throw std::invalid_argument("theoretical_signals: t must be >= 0");
    const double t_h = t_seconds / 3600.0;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    SignalSample s;
    s.u_out_c = config.u_out_mean_c + config.delta_out_1 * std::sin(two_pi * config.omega_out_1 * t_h) +
                config.delta_out_2 * std::sin(two_pi * config.omega_out_2 * t_h);
    s.q = config.q_amplitude * std::pow(std::sin(two_pi * config.omega_q * t_h), 20);
    s.u_in_c = config.u_in_mean_c + config.delta_in * std::sin(two_pi * config.omega_in * t_h);
    return s;
}

TheoreticalCase setup_theoretical_case(const TheoreticalCaseConfig& config)
{
    TheoreticalCase tc;
    tc.config = config;
    const ConvectiveEnvironment env{config.h_in, config.h_out,
                                    celsius_to_kelvin(config.initial_temperature_c)};
    tc.problem = nondimensionalize(config.wall, env, config.horizon_s);
    tc.dt = config.dt;
    tc.steps = static_cast<int>(std::llround(tc.problem.horizon / tc.dt));
    tc.grid = uniform_grid(config.nodes - 1);

    BoundarySignals physical;
    physical.times.resize(static_cast<std::size_t>(tc.steps) + 1);
    physical.u_out.resize(physical.times.size());
    physical.u_in.resize(physical.times.size());
    physical.q.resize(physical.times.size());
    for (std::size_t n = 0; n < physical.times.size(); ++n) {
        const double t_s = static_cast<double>(n) * tc.dt * tc.problem.t_ref;
        const SignalSample s = theoretical_signals(config, t_s);
        physical.times[n] = t_s;
        physical.u_out[n] = celsius_to_kelvin(s.u_out_c);
        physical.u_in[n] = celsius_to_kelvin(s.u_in_c);
        physical.q[n] = s.q;
    }
    tc.signals = dimensionless_signals(physical, env, config.wall);
    return tc;
}

FieldSeries run_theoretical_reference(const TheoreticalCase& tc)
{
    std::vector<double> zero(tc.signals.size(), 0.0);
    FourierBc left{tc.problem.bi_out, tc.signals.u_out, tc.signals.q};
    FourierBc right{tc.problem.bi_in, tc.signals.u_in, zero};
    return solve_transient(tc.problem, left, right, tc.dt, tc.grid,
                           std::vector<double>(tc.grid.size(), 0.0), tc.steps);
}

MeasurementSet load_measurements(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw IoError("cannot open: " + path.string());
    MeasurementSet set;
    std::string line;
    long lineno = 0;
    if (!std::getline(is, line))
        throw ParseError("empty file", path.string(), 1);
    ++lineno;
    {
        const auto header = csv::split(line);
        if (header.size() != 5 || header[0] != "time_s")
            throw ParseError("expected header 'time_s,T01_C,T02_C,T03_C,T04_C'", path.string(),
                             lineno);
        for (int i = 0; i < 4; ++i) {
            const std::string want = "T0" + std::to_string(i + 1) + "_C";
            if (header[static_cast<std::size_t>(i) + 1] != want)
                throw ParseError("missing sensor column " + want, path.string(), lineno);
        }
    }
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r")
            continue;
        const auto tokens = csv::split(line);
        if (tokens.size() != 5)
            throw ParseError("expected 5 columns, got " + std::to_string(tokens.size()),
                             path.string(), lineno);
        set.times_s.push_back(csv::parse_double(tokens[0], path, lineno));
        if (set.times_s.size() >= 2 && set.times_s.back() <= set.times_s[set.times_s.size() - 2])
            throw ParseError("time stamps not strictly increasing", path.string(), lineno);
        for (int i = 0; i < 4; ++i)
            set.sensors[static_cast<std::size_t>(i)].push_back(
                celsius_to_kelvin(csv::parse_double(tokens[static_cast<std::size_t>(i) + 1],
                                                    path, lineno)));
    }
    if (set.times_s.size() < 2)
        throw ParseError("need at least 2 samples", path.string(), lineno);
    return set;
}

void write_measurements_csv(const MeasurementSet& set, const std::filesystem::path& path)
{
    std::ofstream os(path);
    if (!os)
        throw IoError("cannot open for writing: " + path.string());
    os << "time_s,T01_C,T02_C,T03_C,T04_C\n";
    for (std::size_t r = 0; r < set.times_s.size(); ++r) {
        os << csv::format(set.times_s[r]);
        for (int i = 0; i < 4; ++i)
            os << ',' << csv::format(kelvin_to_celsius(set.sensors[static_cast<std::size_t>(i)][r]));
        os << '\n';
    }
    if (!os)
        throw IoError("write failed: " + path.string());
}

std::vector<double> initial_profile(const MeasurementSet& set,
                                    const SpatialGrid& grid,
                                    double thickness_m)
{
    const auto& pos = set.positions_m;
    for (std::size_t i = 0; i + 1 < pos.size(); ++i)
        if (pos[i + 1] <= pos[i])
            throw std::invalid_argument("initial_profile: sensor positions must be distinct ascending");
    for (const auto& s : set.sensors)
        if (s.empty())
            throw std::invalid_argument("initial_profile: empty sensor series");

    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = from_poly_interval(grid.nodes[i]) * thickness_m;
        if (x <= pos.front()) {
            out[i] = set.sensors[0][0];
            continue;
        }
        if (x >= pos.back()) {
            out[i] = set.sensors[3][0];
            continue;
        }
        std::size_t k = 0;
        while (k + 2 < pos.size() && x > pos[k + 1])
            ++k;
        const double w = (x - pos[k]) / (pos[k + 1] - pos[k]);
        out[i] = set.sensors[k][0] * (1.0 - w) + set.sensors[k + 1][0] * w;
    }
    return out;
}

double learning_window_seconds(LearningPeriod period)
{
    switch (period) {
    case LearningPeriod::Full: return 9.0 * 3600.0;
    case LearningPeriod::Half: return 4.0 * 3600.0 + 50.0 * 60.0;
    case LearningPeriod::Cycle1: return 40.0 * 60.0;
    }
    return 0.0;
}

SnapshotMatrix learning_split(const FieldSeries& eval_series,
                              LearningPeriod period,
                              double t_ref_seconds)
{
    const double window = learning_window_seconds(period) / t_ref_seconds;
    if (eval_series.times.empty() || eval_series.times.back() < window * (1.0 - 1e-9))
        throw std::invalid_argument("learning_split: window exceeds the data extent");
    SnapshotMatrix out;
    for (std::size_t i = 0; i < eval_series.times.size(); ++i) {
        if (eval_series.times[i] > window * (1.0 + 1e-9))
            break;
        out.times.push_back(eval_series.times[i]);
        out.columns.push_back(eval_series.profiles[i]);
    }
    return out;
}

UncertaintyReport experimental_uncertainty(const MeasurementSet& set, int sensor_index)
{
    if (sensor_index <= 0 || sensor_index >= 3)
        throw std::invalid_argument(
            "experimental_uncertainty: need an interior sensor with neighbours on both sides");
    const auto i = static_cast<std::size_t>(sensor_index);
    const double hl = set.positions_m[i] - set.positions_m[i - 1];
    const double hr = set.positions_m[i + 1] - set.positions_m[i];
    if (hl <= 0.0 || hr <= 0.0)
        throw std::invalid_argument("experimental_uncertainty: sensor positions must be ascending");

    // Three-point second-order derivative on a non-uniform stencil.
    const double cl = -hr / (hl * (hl + hr));
    const double cc = (hr - hl) / (hl * hr);
    const double cr = hl / (hr * (hl + hr));

    UncertaintyReport rep;
    rep.sigma.resize(set.times_s.size());
    double acc = 0.0;
    for (std::size_t n = 0; n < set.times_s.size(); ++n) {
        const double grad = cl * set.sensors[i - 1][n] + cc * set.sensors[i][n] +
                            cr * set.sensors[i + 1][n];
        const double s = std::sqrt(set.sigma_m * set.sigma_m +
                                   grad * set.delta_x * grad * set.delta_x);
        rep.sigma[n] = s;
        acc += s;
    }
    rep.sigma_mean = acc / static_cast<double>(rep.sigma.size());
    return rep;
}

namespace {

struct ScheduleSegment {
    double duration_s;
    bool heater_on;
    bool pump_on;
};

// Cycle pattern: three on/off periods of 40/25/60 min, repeated with the heat
// pump turned off for the second half, preceded by a shortened initialization.
std::vector<ScheduleSegment> fixture_schedule(double init_hours)
{
    std::vector<ScheduleSegment> seg;
    seg.push_back({init_hours * 3600.0, true, true});
    const double m = 60.0;
    seg.push_back({40 * m, false, true});
    seg.push_back({40 * m, true, true});
    seg.push_back({40 * m, false, true});
    seg.push_back({25 * m, true, true});
    seg.push_back({25 * m, false, true});
    seg.push_back({60 * m, true, true});
    seg.push_back({60 * m, false, true});
    seg.push_back({40 * m, true, false});
    seg.push_back({40 * m, false, false});
    seg.push_back({25 * m, true, false});
    seg.push_back({25 * m, false, false});
    seg.push_back({60 * m, true, false});
    seg.push_back({60 * m, false, false});
    return seg;
}

} // namespace

MeasurementSet generate_practical_fixture(const PracticalCaseConfig& config)
{
    // Room-air response to the appliance switching: exponential relaxation
    // toward the active set point. Values picked for plausible lab amplitudes.
    constexpr double warm_on_c = 32.0, warm_off_c = 17.0;
    constexpr double warm_tau_on = 1200.0, warm_tau_off = 3600.0;
    constexpr double cold_on_c = 5.0, cold_off_c = 16.0;
    constexpr double cold_tau_on = 900.0, cold_tau_off = 5400.0;

    const auto schedule = fixture_schedule(config.init_hours);
    const double dt_s = config.sample_period_s;
    double total = 0.0;
    for (const auto& s : schedule)
        total += s.duration_s;
    const int steps = static_cast<int>(std::llround(total / dt_s));

    // Air temperature series on the sample grid.
    std::vector<double> warm(static_cast<std::size_t>(steps) + 1);
    std::vector<double> cold(warm.size());
    double tw = 20.0, tc = 20.0;
    std::size_t seg = 0;
    double seg_left = schedule[0].duration_s;
    warm[0] = tw;
    cold[0] = tc;
    for (int n = 0; n < steps; ++n) {
        while (seg_left <= 0.0 && seg + 1 < schedule.size()) {
            ++seg;
            seg_left += schedule[seg].duration_s;
        }
        const bool heater = schedule[seg].heater_on;
        const bool pump = schedule[seg].pump_on;
        const double wt = heater ? warm_on_c : warm_off_c;
        const double wtau = heater ? warm_tau_on : warm_tau_off;
        const double ct = pump ? cold_on_c : cold_off_c;
        const double ctau = pump ? cold_tau_on : cold_tau_off;
        tw = wt + (tw - wt) * std::exp(-dt_s / wtau);
        tc = ct + (tc - ct) * std::exp(-dt_s / ctau);
        warm[static_cast<std::size_t>(n) + 1] = tw;
        cold[static_cast<std::size_t>(n) + 1] = tc;
        seg_left -= dt_s;
    }

    // The "laboratory wall": same insulation layer, finer grid than the
    // study's reference solver so the two stay distinguishable. Warm room on
    // the x=0 face, cold room on the x=L face.
    const ConvectiveEnvironment env{12.0, 8.0, celsius_to_kelvin(20.0)};
    const DimensionlessProblem problem = nondimensionalize(config.wall, env, total);
    const double dt_dimless = dt_s / problem.t_ref;
    const SpatialGrid grid = uniform_grid(200);

    BoundarySignals physical;
    physical.times.resize(warm.size());
    physical.u_out.resize(warm.size());
    physical.u_in.resize(warm.size());
    physical.q.assign(warm.size(), 0.0);
    for (std::size_t n = 0; n < warm.size(); ++n) {
        physical.times[n] = static_cast<double>(n) * dt_s;
        physical.u_out[n] = celsius_to_kelvin(warm[n]);
        physical.u_in[n] = celsius_to_kelvin(cold[n]);
    }
    const BoundarySignals sig = dimensionless_signals(physical, env, config.wall);

    FourierBc left{problem.bi_out, sig.u_out, std::vector<double>(warm.size(), 0.0)};
    FourierBc right{problem.bi_in, sig.u_in, std::vector<double>(warm.size(), 0.0)};
    const FieldSeries run =
        solve_transient(problem, left, right, dt_dimless, grid,
                        std::vector<double>(grid.size(), 0.0), steps);

    MeasurementSet set;
    set.times_s = physical.times;
    const double u0 = env.u0;
    for (int sens = 0; sens < 4; ++sens) {
        const double x = set.positions_m[static_cast<std::size_t>(sens)] / config.wall.thickness;
        const auto node = static_cast<std::size_t>(
            std::llround(x * static_cast<double>(grid.size() - 1)));
        auto& series = set.sensors[static_cast<std::size_t>(sens)];
        series.resize(run.size());
        for (std::size_t n = 0; n < run.size(); ++n)
            series[n] = redimensionalize(run.profiles[n][node], u0);
    }
    return set;
}

PracticalCase run_practical_case(const PracticalCaseConfig& config, const MeasurementSet& data)
{
    PracticalCase pc;
    pc.config = config;
    pc.data = data;
    const ConvectiveEnvironment env{config.h_in, config.h_out, celsius_to_kelvin(config.u0_c)};
    const double duration = data.times_s.back() - data.times_s.front();
    pc.problem = nondimensionalize(config.wall, env, duration);
    pc.grid = uniform_grid(config.nodes);

    const double dt = config.sample_period_s / pc.problem.t_ref;
    const int steps = static_cast<int>(data.times_s.size()) - 1;

    auto dimless = [&](const std::vector<double>& kelvin) {
        std::vector<double> out(kelvin.size());
        for (std::size_t i = 0; i < kelvin.size(); ++i)
            out[i] = kelvin[i] / env.u0 - 1.0;
        return out;
    };
    DirichletBc left{dimless(data.sensors[0])};
    DirichletBc right{dimless(data.sensors[3])};

    std::vector<double> init = initial_profile(data, pc.grid, config.wall.thickness);
    for (double& v : init)
        v = v / env.u0 - 1.0;

    pc.reference = solve_transient(pc.problem, left, right, dt, pc.grid, std::move(init), steps);

    // Evaluation window: drop the initialization period, relabel to t=0.
    const double t0 = config.init_hours * 3600.0 / pc.problem.t_ref;
    pc.eval_window.grid = pc.grid;
    for (std::size_t n = 0; n < pc.reference.times.size(); ++n) {
        if (pc.reference.times[n] < t0 - 1e-12)
            continue;
        pc.eval_window.times.push_back(pc.reference.times[n] - t0);
        pc.eval_window.profiles.push_back(pc.reference.profiles[n]);
    }
    if (pc.eval_window.times.empty())
        throw std::invalid_argument("run_practical_case: record shorter than the initialization");
    return pc;
}

ModelErrorResult run_model_error_study(const TheoreticalCaseConfig& config,
                                       const RadiationConfig& radiation)
{
    const TheoreticalCase tc = setup_theoretical_case(config);
    const FieldSeries reference = run_theoretical_reference(tc);
    const double u0 = celsius_to_kelvin(config.initial_temperature_c);
    const double u_ground = celsius_to_kelvin(radiation.u_ground_c);

    const double u_wall = celsius_to_kelvin(radiation.u_wall_c);
    ModelErrorResult res;
    res.times_s.resize(reference.size());
    res.qin.resize(reference.size());
    for (std::size_t n = 0; n < reference.size(); ++n) {
        res.times_s[n] = reference.times[n] * tc.problem.t_ref;
        const double t_surface = redimensionalize(reference.profiles[n].back(), u0);
        res.qin[n] = qin_flux(t_surface, u_wall, u_ground, radiation.f_wall, radiation.f_ground,
                              radiation.eps_wall, radiation.eps_ground);
    }

    const ConvectiveEnvironment env{config.h_in, config.h_out, u0};
    res.error = solve_model_error(tc.problem, config.wall, env, res.qin, tc.dt, tc.grid);
    for (std::size_t n = 0; n < res.error.size(); ++n) {
        const auto& profile = res.error.profiles[n];
        for (std::size_t i = 0; i < profile.size(); ++i) {
            if (std::abs(profile[i]) > res.max_abs_error) {
                res.max_abs_error = std::abs(profile[i]);
                res.argmax_node = i;
                res.argmax_step = n;
            }
        }
    }
    return res;
}

} // namespace pgdheat
