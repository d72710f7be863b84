#pragma once

// Internal: shared spatial discretization of y - a y'' with Robin/Dirichlet
// rows. Both the FD solvers and the PGD weak form assemble exactly this
// operator, so abacus-vs-oracle comparisons carry no discretization mismatch.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgdheat/errors.hpp"
#include "pgdheat/grid.hpp"

namespace pgdheat::detail {

// Unit-interval cell widths of a grid stored on [-1,1].
inline std::vector<double> unit_spacings(const SpatialGrid& grid)
{
    std::vector<double> h(grid.size() - 1);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        h[i] = (grid.nodes[i + 1] - grid.nodes[i]) / 2.0;
        if (h[i] <= 0.0)
            throw std::invalid_argument("grid nodes must be strictly increasing");
    }
    return h;
}

// (M + a K) rows: trapezoidal mass, second-order stiffness, Robin terms folded
// into the corner diagonals. On a uniform grid the boundary rows reduce exactly
// to the second-order ghost-node discretization. Dirichlet faces get identity
// rows instead (mass zeroed so the rhs carries only the pinned value).
struct TridiagonalOperator {
    std::vector<double> lower, diag, upper; // lower[i] couples row i+1 to row i
    std::vector<double> mass;               // trapezoidal weights for rhs assembly
    std::vector<double> fdiag, fmult;       // Thomas factorization

    void factorize()
    {
        const std::size_t n = diag.size();
        fdiag.assign(n, 0.0);
        fmult.assign(n, 0.0);
        fdiag[0] = diag[0];
        if (fdiag[0] == 0.0)
            throw NumericalError("tridiagonal solve: zero pivot at row 0");
        for (std::size_t i = 1; i < n; ++i) {
            fmult[i] = lower[i - 1] / fdiag[i - 1];
            fdiag[i] = diag[i] - fmult[i] * upper[i - 1];
            if (fdiag[i] == 0.0)
                throw NumericalError("tridiagonal solve: zero pivot at row " +
                                     std::to_string(i));
        }
    }

    void solve(std::vector<double>& rhs) const
    {
        const std::size_t n = rhs.size();
        for (std::size_t i = 1; i < n; ++i)
            rhs[i] -= fmult[i] * rhs[i - 1];
        rhs[n - 1] /= fdiag[n - 1];
        for (std::size_t i = n - 1; i-- > 0;)
            rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / fdiag[i];
    }

    std::vector<double> apply(const std::vector<double>& v) const
    {
        const std::size_t n = diag.size();
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = diag[i] * v[i];
        for (std::size_t i = 0; i + 1 < n; ++i) {
            out[i] += upper[i] * v[i + 1];
            out[i + 1] += lower[i] * v[i];
        }
        return out;
    }
};

inline TridiagonalOperator assemble_step_operator(const SpatialGrid& grid,
                                                  double a,
                                                  bool left_dirichlet,
                                                  bool right_dirichlet,
                                                  double bi_left,
                                                  double bi_right)
{
    const std::size_t n = grid.size();
    if (n < 2)
        throw std::invalid_argument("grid needs at least 2 nodes");
    const auto h = unit_spacings(grid);

    TridiagonalOperator op;
    op.lower.assign(n - 1, 0.0);
    op.upper.assign(n - 1, 0.0);
    op.diag.assign(n, 0.0);
    op.mass.assign(n, 0.0);

    op.mass[0] = h[0] / 2.0;
    op.mass[n - 1] = h[n - 2] / 2.0;
    for (std::size_t i = 1; i + 1 < n; ++i)
        op.mass[i] = (h[i - 1] + h[i]) / 2.0;

    for (std::size_t i = 0; i < n; ++i)
        op.diag[i] = op.mass[i];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double w = a / h[i];
        op.diag[i] += w;
        op.diag[i + 1] += w;
        op.lower[i] -= w;
        op.upper[i] -= w;
    }
    op.diag[0] += a * bi_left;
    op.diag[n - 1] += a * bi_right;

    if (left_dirichlet) {
        op.diag[0] = 1.0;
        op.upper[0] = 0.0;
        op.mass[0] = 0.0;
    }
    if (right_dirichlet) {
        op.diag[n - 1] = 1.0;
        op.lower[n - 2] = 0.0;
        op.mass[n - 1] = 0.0;
    }
    op.factorize();
    return op;
}

} // namespace pgdheat::detail
