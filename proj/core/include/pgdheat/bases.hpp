#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pgdheat/grid.hpp"

namespace pgdheat {

enum class BasisKind { Chebyshev, Legendre, Pod };

std::string to_string(BasisKind kind);
BasisKind basis_kind_from_string(const std::string& name);

/// Per-mode extrema of the projection coefficients over a snapshot set.
struct CoefficientRanges {
    std::vector<double> min;
    std::vector<double> max;

    std::size_t size() const { return min.size(); }
    bool empty() const { return min.empty(); }
};

/// Source-field samples over time, one column per step, on a common grid.
struct SnapshotMatrix {
    std::vector<double> times;
    std::vector<std::vector<double>> columns;

    std::size_t size() const { return columns.size(); }
};

/// N mode shapes sampled on a spatial grid, plus (once computed) the
/// coefficient ranges that the PGD uses to scale its ζ̄ coordinates.
struct ApproximationBasis {
    BasisKind kind = BasisKind::Chebyshev;
    SpatialGrid grid;
    std::vector<std::vector<double>> modes;
    CoefficientRanges ranges; // empty until coefficient_ranges(); carried by files

    int mode_count() const { return static_cast<int>(modes.size()); }
};

/// Chebyshev polynomials T_0..T_{N-1} via T_{j+1} = 2x T_j - T_{j-1}.
ApproximationBasis chebyshev_basis(int n_modes, const SpatialGrid& grid);

/// Legendre polynomials P_0..P_{N-1} via (j+1) P_{j+1} = (2j+1) x P_j - j P_{j-1}.
ApproximationBasis legendre_basis(int n_modes, const SpatialGrid& grid);

/// Leading left singular vectors of the snapshot matrix, ordered by decreasing
/// singular value, sign fixed so each mode's largest-magnitude entry is positive.
ApproximationBasis pod_basis(const SnapshotMatrix& snapshots, int n_modes);

/// First n_modes of an existing basis (ranges truncated along).
ApproximationBasis truncated(const ApproximationBasis& basis, int n_modes);

/// Least-squares projector onto a basis; factors the mode matrix once so
/// per-snapshot projections are cheap. Basis grid values are the inner product.
class Projector {
public:
    explicit Projector(const ApproximationBasis& basis);
    ~Projector();
    Projector(Projector&&) noexcept;
    Projector& operator=(Projector&&) noexcept;

    std::vector<double> project(std::span<const double> field) const;
    std::vector<double> reconstruct(std::span<const double> zeta) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::vector<double> project(const std::vector<double>& field, const ApproximationBasis& basis);
std::vector<double> reconstruct(const ApproximationBasis& basis, const std::vector<double>& zeta);

/// Projects every snapshot column and records per-mode extrema.
CoefficientRanges coefficient_ranges(const SnapshotMatrix& snapshots,
                                     const ApproximationBasis& basis);

/// ζ̄_j = (ζ_j - min_j) / (max_j - min_j), clamped to [0,1]; clamps are counted
/// into *clamp_events when given. Degenerate ranges map to 0.5.
std::vector<double> normalize(const std::vector<double>& zeta,
                              const CoefficientRanges& ranges,
                              std::uint64_t* clamp_events = nullptr);

/// Inverse map; degenerate ranges return the constant.
std::vector<double> denormalize(const std::vector<double>& zbar,
                                const CoefficientRanges& ranges);

/// Snaps each ζ̄_j to the nearest multiple of dzeta (0 < dzeta <= 1).
std::vector<double> quantize(std::vector<double> zbar, double dzeta);

/// Basis file: JSON document carrying kind, grid, mode matrix and ranges.
void save_basis(const ApproximationBasis& basis, const std::filesystem::path& path);
ApproximationBasis load_basis(const std::filesystem::path& path);

/// Snapshot CSV (same layout as FieldSeries CSV: header of node coordinates,
/// first column time).
void write_snapshots_csv(const SnapshotMatrix& snapshots,
                         const SpatialGrid& grid,
                         const std::filesystem::path& path);
SnapshotMatrix read_snapshots_csv(const std::filesystem::path& path);

} // namespace pgdheat
