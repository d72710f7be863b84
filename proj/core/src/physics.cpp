#include "pgdheat/physics.hpp"

#include <stdexcept>

#include "pgdheat/errors.hpp"

namespace pgdheat {

DimensionlessProblem nondimensionalize(const WallLayer& wall,
                                       const ConvectiveEnvironment& env,
                                       double horizon_seconds)
{
    if (wall.thickness <= 0.0 || wall.conductivity <= 0.0 || wall.volumetric_capacity <= 0.0)
        throw std::invalid_argument("nondimensionalize: wall properties must be positive");
    if (env.h_in <= 0.0 || env.h_out <= 0.0 || env.u0 <= 0.0)
        throw std::invalid_argument("nondimensionalize: environment values must be positive");
    if (horizon_seconds <= 0.0)
        throw std::invalid_argument("nondimensionalize: horizon must be positive");

    DimensionlessProblem p;
    p.fourier = 1.0;
    p.bi_in = env.h_in * wall.thickness / wall.conductivity;
    p.bi_out = env.h_out * wall.thickness / wall.conductivity;
    p.t_ref = wall.volumetric_capacity * wall.thickness * wall.thickness / wall.conductivity;
    p.horizon = horizon_seconds / p.t_ref;
    return p;
}

BoundarySignals dimensionless_signals(const BoundarySignals& physical,
                                      const ConvectiveEnvironment& env,
                                      const WallLayer& wall)
{
    if (env.u0 <= 0.0)
        throw std::invalid_argument("dimensionless_signals: u0 must be positive");
    const double t_ref =
        wall.volumetric_capacity * wall.thickness * wall.thickness / wall.conductivity;
    const double q_scale = wall.thickness / (wall.conductivity * env.u0);

    BoundarySignals out;
    out.times.reserve(physical.times.size());
    out.u_out.reserve(physical.u_out.size());
    out.u_in.reserve(physical.u_in.size());
    out.q.reserve(physical.q.size());
    for (double t : physical.times)
        out.times.push_back(t / t_ref);
    for (double v : physical.u_out)
        out.u_out.push_back(v / env.u0 - 1.0);
    for (double v : physical.u_in)
        out.u_in.push_back(v / env.u0 - 1.0);
    for (double v : physical.q)
        out.q.push_back(v * q_scale);
    return out;
}

BvpInstance semi_discretize(const DimensionlessProblem& problem,
                            const SpatialGrid& grid,
                            const std::vector<double>& prev,
                            double dt,
                            double u_out_n,
                            double u_in_n,
                            double q_n)
{
    if (dt <= 0.0)
        throw std::invalid_argument("semi_discretize: dt must be positive");
    if (prev.size() != grid.size())
        throw ShapeError("semi_discretize: source field length does not match grid");

    BvpInstance inst;
    inst.a = dt * problem.fourier;
    inst.source = prev;
    inst.b_out = -problem.bi_out * u_out_n - q_n;
    inst.b_in = problem.bi_in * u_in_n;
    return inst;
}

double redimensionalize(double v, double u0) { return u0 * (v + 1.0); }

std::vector<double> redimensionalize(const std::vector<double>& field, double u0)
{
    std::vector<double> out(field.size());
    for (std::size_t i = 0; i < field.size(); ++i)
        out[i] = redimensionalize(field[i], u0);
    return out;
}

} // namespace pgdheat
