#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "pgdheat/bases.hpp"
#include "pgdheat/fdm.hpp"
#include "pgdheat/physics.hpp"

namespace pgdheat {

/// Sinusoidal boundary forcing of the theoretical study. Angular arguments use
/// hours; temperatures in Celsius at this level, kelvin after sampling.
struct TheoreticalCaseConfig {
    double u_out_mean_c = 20.0;
    double delta_out_1 = -4.4;        // K
    double omega_out_1 = 1.0 / 72.0;  // 1/h
    double delta_out_2 = -11.7;       // K
    double omega_out_2 = 1.0 / 24.0;  // 1/h
    double q_amplitude = 500.0;       // W/m^2
    double omega_q = 1.0 / 48.0;      // 1/h
    double u_in_mean_c = 20.0;
    double delta_in = -2.0;           // K
    double omega_in = 1.0 / 48.0;     // 1/h
    double h_in = 8.7;                // W/(m^2 K)
    double h_out = 23.2;              // W/(m^2 K)
    // 0.20 m in the text, but the paper's Bi_in = 0.4971, Bi_out = 1.3314 and
    // t_ref = 1.2571e4 s are consistent only with 0.1 m; see README.
    WallLayer wall{0.1, 1.75, 2.2e6};
    double horizon_s = 3.0 * 86400.0;
    double initial_temperature_c = 20.0; // uniform start, also u0 of the map
    double dt = 1e-3;                    // dimensionless reference step
    int nodes = 200;                     // reference grid nodes
};

struct SignalSample {
    double u_out_c;
    double u_in_c;
    double q;
};

/// Closed-form signals of §-style sinusoids at time t (seconds).
SignalSample theoretical_signals(const TheoreticalCaseConfig& config, double t_seconds);

/// Everything a theoretical-case run needs, with signals pre-sampled on the
/// step grid in dimensionless form.
struct TheoreticalCase {
    TheoreticalCaseConfig config;
    DimensionlessProblem problem;
    SpatialGrid grid;
    BoundarySignals signals; // dimensionless
    double dt = 1e-3;
    int steps = 0;
};

TheoreticalCase setup_theoretical_case(const TheoreticalCaseConfig& config);

/// Implicit-Euler reference march from the uniform initial state (dimensionless).
FieldSeries run_theoretical_reference(const TheoreticalCase& tc);

/// Four-thermocouple record on a 30 s grid, kelvin, with sensor placement and
/// the instrument uncertainties of the uncertainty formula.
struct MeasurementSet {
    std::vector<double> times_s;
    std::array<std::vector<double>, 4> sensors;
    std::array<double, 4> positions_m{0.0, 0.04, 0.08, 0.10};
    double sigma_m = 0.1;  // K
    double delta_x = 1e-3; // m
};

/// Measurement CSV: header time_s,T01_C,T02_C,T03_C,T04_C; one row per sample.
MeasurementSet load_measurements(const std::filesystem::path& path);
void write_measurements_csv(const MeasurementSet& set, const std::filesystem::path& path);

/// Piecewise-linear interpolation of the t=0 sensor values onto the grid
/// (constant beyond the outermost sensors). Kelvin.
std::vector<double> initial_profile(const MeasurementSet& set,
                                    const SpatialGrid& grid,
                                    double thickness_m);

enum class LearningPeriod { Full, Half, Cycle1 };

/// Window length of a learning period in seconds: 9 h, 4 h 50, 0 h 40.
double learning_window_seconds(LearningPeriod period);

/// Restricts an evaluation-window series (dimensionless times) to the learning
/// window. Evaluation itself always runs on the full window.
SnapshotMatrix learning_split(const FieldSeries& eval_series,
                              LearningPeriod period,
                              double t_ref_seconds);

struct UncertaintyReport {
    std::vector<double> sigma; // per sample, K
    double sigma_mean = 0.0;
};

/// sigma = sqrt(sigma_m^2 + (du/dx * delta_x)^2) at an interior sensor, the
/// gradient taken by the second-order three-point formula across neighbours.
UncertaintyReport experimental_uncertainty(const MeasurementSet& set, int sensor_index);

/// Practical study configuration. The bundled measurement file is synthetic:
/// an FD run of the insulation layer driven by the on/off cycle schedule with
/// a shortened 2 h initialization.
struct PracticalCaseConfig {
    WallLayer wall{0.10, 0.04, 30.0e3};
    double h_in = 8.7;  // only recorded; the reference is Dirichlet-driven
    double h_out = 23.2;
    double u0_c = 20.0;
    int nodes = 98; // intervals; 99 grid nodes
    double sample_period_s = 30.0;
    double init_hours = 2.0;
    double eval_hours = 9.0;
};

/// Deterministic synthetic fixture following the heater / heat-pump cycle
/// pattern (three periods of 40/25/60 min repeated twice, pump off for the
/// second half), generated on a finer grid than the reference uses.
MeasurementSet generate_practical_fixture(const PracticalCaseConfig& config = {});

struct PracticalCase {
    PracticalCaseConfig config;
    MeasurementSet data;
    DimensionlessProblem problem;
    SpatialGrid grid;
    FieldSeries reference;   // dimensionless, full record
    FieldSeries eval_window; // dimensionless, evaluation window relabelled to t=0
};

/// Dirichlet-driven reference: T01/T04 pin the faces, the initial profile is
/// interpolated from the t=0 sensor readings.
PracticalCase run_practical_case(const PracticalCaseConfig& config, const MeasurementSet& data);

/// Inside long-wave radiation constants of the model-error study. The
/// surrounding walls and ceiling sit at the equilibrium room temperature
/// (they do not follow the fast air swings); the floor is warmer
/// (underfloor heating).
struct RadiationConfig {
    double f_wall = 0.2;
    double f_ground = 0.2;
    double eps_wall = 0.9;
    double eps_ground = 0.9;
    double u_wall_c = 20.0;
    double u_ground_c = 23.0;
};

struct ModelErrorResult {
    std::vector<double> times_s;
    std::vector<double> qin; // W/m^2, a-posteriori from the no-radiation run
    FieldSeries error;       // kelvin, times in seconds
    double max_abs_error = 0.0; // K
    std::size_t argmax_node = 0;
    std::size_t argmax_step = 0;
};

/// Appendix-style model-error pipeline on the theoretical case: run the
/// no-radiation reference, evaluate q_in from its inside surface temperature,
/// integrate the error problem.
ModelErrorResult run_model_error_study(const TheoreticalCaseConfig& config,
                                       const RadiationConfig& radiation = {});

} // namespace pgdheat
