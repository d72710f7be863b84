#pragma once

#include <cstddef>
#include <vector>

namespace pgdheat {

enum class GridKind { Uniform, ChebyshevLobatto };

/// One-dimensional spatial mesh. Nodes are kept ascending on the polynomial
/// interval [-1, 1]; the unit interval [0, 1] of the dimensionless problem
/// appears only at I/O boundaries via to/from_poly_interval.
struct SpatialGrid {
    GridKind kind = GridKind::Uniform;
    std::vector<double> nodes;

    std::size_t size() const { return nodes.size(); }
    int n_intervals() const { return static_cast<int>(nodes.size()) - 1; }
};

/// n+1 equispaced nodes on [-1, 1]. n >= 1.
SpatialGrid uniform_grid(int n_intervals);

/// Chebyshev points of the second kind, x_j = cos(j*pi/n), reordered ascending. n >= 1.
SpatialGrid chebyshev_points(int n_intervals);

/// Affine map [0,1] -> [-1,1]. Throws std::invalid_argument outside [0,1].
double to_poly_interval(double x);

/// Inverse map [-1,1] -> [0,1]. Throws std::invalid_argument outside [-1,1].
double from_poly_interval(double s);

} // namespace pgdheat
