#pragma once

#include <vector>

#include "pgdheat/grid.hpp"

namespace pgdheat {

/// Homogeneous wall layer. SI units throughout: m, W/(m K), J/(m^3 K).
struct WallLayer {
    double thickness;
    double conductivity;
    double volumetric_capacity;
};

/// Film coefficients on both faces plus the uniform initial temperature u0 [K].
/// u0 is also the reference temperature of the dimensionless map.
struct ConvectiveEnvironment {
    double h_in;
    double h_out;
    double u0;
};

/// Boundary forcing sampled on one shared, strictly increasing time grid.
/// Physical units (K, W/m^2, s) before dimensionless_signals, dimensionless after.
struct BoundarySignals {
    std::vector<double> times;
    std::vector<double> u_out;
    std::vector<double> u_in;
    std::vector<double> q;

    std::size_t size() const { return times.size(); }
};

/// Dimensionless description of the transient problem. Fourier number is 1 by
/// construction of t_ref = c L^2 / k.
struct DimensionlessProblem {
    double fourier = 1.0;
    double bi_in = 0.0;
    double bi_out = 0.0;
    double t_ref = 0.0;   // seconds
    double horizon = 0.0; // dimensionless
};

/// One semi-discrete step: y - a y'' = b with Robin data b_in, b_out.
struct BvpInstance {
    double a;
    std::vector<double> source;
    double b_in;
    double b_out;
};

DimensionlessProblem nondimensionalize(const WallLayer& wall,
                                       const ConvectiveEnvironment& env,
                                       double horizon_seconds);

/// Temperatures v -> v/u0 - 1, fluxes q -> q L / (k u0), times t -> t / t_ref.
BoundarySignals dimensionless_signals(const BoundarySignals& physical,
                                      const ConvectiveEnvironment& env,
                                      const WallLayer& wall);

/// Builds the BVP of one implicit step: a = dt*Fo, b = prev,
/// b_out = -Bi_out*u_out_n - q_n, b_in = Bi_in*u_in_n.
BvpInstance semi_discretize(const DimensionlessProblem& problem,
                            const SpatialGrid& grid,
                            const std::vector<double>& prev,
                            double dt,
                            double u_out_n,
                            double u_in_n,
                            double q_n);

/// Inverse temperature map v -> u0 (v + 1).
double redimensionalize(double v, double u0);
std::vector<double> redimensionalize(const std::vector<double>& field, double u0);

inline double celsius_to_kelvin(double c) { return c + 273.15; }
inline double kelvin_to_celsius(double k) { return k - 273.15; }

} // namespace pgdheat
