#include "pgdheat/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pgdheat {

SpatialGrid uniform_grid(int n_intervals)
{
    if (n_intervals < 1)
        throw std::invalid_argument("uniform_grid: n_intervals must be >= 1");
    SpatialGrid g;
    g.kind = GridKind::Uniform;
    g.nodes.resize(static_cast<std::size_t>(n_intervals) + 1);
    for (int j = 0; j <= n_intervals; ++j)
        g.nodes[static_cast<std::size_t>(j)] = -1.0 + 2.0 * j / n_intervals;
    g.nodes.front() = -1.0;
    g.nodes.back() = 1.0;
    return g;
}

SpatialGrid chebyshev_points(int n_intervals)
{
    if (n_intervals < 1)
        throw std::invalid_argument("chebyshev_points: n_intervals must be >= 1");
    SpatialGrid g;
    g.kind = GridKind::ChebyshevLobatto;
    g.nodes.resize(static_cast<std::size_t>(n_intervals) + 1);
    // cos(j*pi/n) runs descending; store ascending.
    for (int j = 0; j <= n_intervals; ++j)
        g.nodes[static_cast<std::size_t>(n_intervals - j)] =
            std::cos(j * std::numbers::pi / n_intervals);
    g.nodes.front() = -1.0;
    g.nodes.back() = 1.0;
    if (n_intervals % 2 == 0)
        g.nodes[static_cast<std::size_t>(n_intervals) / 2] = 0.0;
    return g;
}

double to_poly_interval(double x)
{
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("to_poly_interval: coordinate outside [0,1]");
    return 2.0 * x - 1.0;
}

double from_poly_interval(double s)
{
    if (!(s >= -1.0 && s <= 1.0))
        throw std::invalid_argument("from_poly_interval: coordinate outside [-1,1]");
    return (s + 1.0) / 2.0;
}

} // namespace pgdheat
