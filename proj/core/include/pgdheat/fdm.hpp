#pragma once

#include <filesystem>
#include <variant>
#include <vector>

#include "pgdheat/grid.hpp"
#include "pgdheat/physics.hpp"

namespace pgdheat {

/// Temperature profiles over a time grid (references, snapshots, outputs).
struct FieldSeries {
    SpatialGrid grid;
    std::vector<double> times;
    std::vector<std::vector<double>> profiles;

    std::size_t size() const { return times.size(); }
};

/// Robin data on one face: flux proportional to the surface-to-air gap plus an
/// imposed flux. Signals are dimensionless series sampled at t^0..t^steps.
/// Conventions (dimensionless, unit-interval derivative):
///   left  (x=0): du/dx =  Bi (u - air) - flux
///   right (x=1): du/dx = -Bi (u - air) + flux
struct FourierBc {
    double biot;
    std::vector<double> air;
    std::vector<double> flux;
};

/// Imposed surface temperature series (dimensionless), sampled at t^0..t^steps.
struct DirichletBc {
    std::vector<double> surface;
};

using BoundaryCondition = std::variant<FourierBc, DirichletBc>;

/// Implicit-Euler march of u_t = Fo u_xx from the given initial field.
/// Fourier data is taken at t^n when stepping to t^{n+1} (co-simulation
/// exchange order); Dirichlet values are pinned at t^{n+1}.
/// The returned series includes the initial field at t=0.
FieldSeries solve_transient(const DimensionlessProblem& problem,
                            const BoundaryCondition& left,
                            const BoundaryCondition& right,
                            double dt,
                            const SpatialGrid& grid,
                            std::vector<double> initial,
                            int steps);

/// Direct solve of y - a y'' = b with Robin rows
///   y' =  Bi_out y - b_out  at the left face,
///   y' = -Bi_in  y + b_in   at the right face.
/// Second-order in space; this is the oracle the PGD abacus is judged against.
std::vector<double> solve_bvp(const BvpInstance& instance,
                              double bi_in,
                              double bi_out,
                              const SpatialGrid& grid);

/// Long-wave exchange of the inside surface with surrounding walls/ceiling
/// (view factor f_wall, four surfaces) and the floor (f_ground).
/// Positive when the surface is hotter than the surroundings. Temperatures in K.
double qin_flux(double t_surface,
                double u_wall,
                double u_ground,
                double f_wall,
                double f_ground,
                double eps_wall,
                double eps_ground);

/// Error field e of the no-inside-radiation simplification:
///   c e_t = (k e_x)_x,  -k e_x = -h_out e at x=0,  k e_x = -h_in e - q_in at x=L,
/// integrated from e=0 with the given q_in [W/m^2] series. Returned in kelvin.
FieldSeries solve_model_error(const DimensionlessProblem& problem,
                              const WallLayer& wall,
                              const ConvectiveEnvironment& env,
                              const std::vector<double>& qin_series,
                              double dt,
                              const SpatialGrid& grid);

/// CSV export/import: header "time,<x0>,<x1>,..." with node coordinates in
/// [-1,1], one row per time stamp. Values at 9 significant digits.
void write_series_csv(const FieldSeries& series, const std::filesystem::path& path);
FieldSeries read_series_csv(const std::filesystem::path& path);

} // namespace pgdheat
