#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pgdheat/bases.hpp"
#include "pgdheat/fdm.hpp"

namespace pgdheat {

/// Max-over-time of the per-step spatial RMSE, with the full trace kept so
/// plateaus stay inspectable.
struct ErrorReport {
    double value = 0.0;
    std::vector<double> trace;
    std::size_t argmax_index = 0;
};

struct CpuRatio {
    double t_cpu = 0.0;
    double t0 = 0.0;
    double rho = 0.0;
};

struct TimedSample {
    std::string label;
    double seconds = 0.0;
};

SnapshotMatrix to_snapshots(const FieldSeries& series);

/// Per step: sqrt(mean over nodes of (ref - cand)^2); value = max over steps.
ErrorReport max_rmse(const FieldSeries& reference, const FieldSeries& candidate);
ErrorReport max_rmse(const SnapshotMatrix& reference, const SnapshotMatrix& candidate);

/// Basis-approximation error: project each reference profile on the first
/// n_modes, reconstruct, max RMSE.
ErrorReport mu(const SnapshotMatrix& reference, const ApproximationBasis& basis, int n_modes);

/// Same pipeline with the coefficients pushed through
/// normalize -> quantize(dzeta) -> denormalize, ranges taken from the
/// reference itself.
ErrorReport nu(const SnapshotMatrix& reference,
               const ApproximationBasis& basis,
               int n_modes,
               double dzeta);

/// Combined-model error between the reference solution and a PGD-simulated series.
ErrorReport epsilon(const FieldSeries& reference, const FieldSeries& pgd_series);

/// Wall-clock duration of fn, monotonic clock.
TimedSample time_block(std::string label, const std::function<void()>& fn);

CpuRatio cpu_ratio(double t_cpu, double t0);

} // namespace pgdheat
