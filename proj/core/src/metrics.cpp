#include "pgdheat/metrics.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "pgdheat/errors.hpp"

namespace pgdheat {

namespace {

ErrorReport report_from_trace(std::vector<double> trace)
{
    ErrorReport rep;
    rep.trace = std::move(trace);
    for (std::size_t i = 0; i < rep.trace.size(); ++i) {
        if (rep.trace[i] > rep.value) {
            rep.value = rep.trace[i];
            rep.argmax_index = i;
        }
    }
    return rep;
}

Eigen::MatrixXd to_matrix(const SnapshotMatrix& snapshots)
{
    if (snapshots.columns.empty())
        throw std::invalid_argument("empty snapshot set");
    const auto rows = static_cast<Eigen::Index>(snapshots.columns.front().size());
    const auto cols = static_cast<Eigen::Index>(snapshots.columns.size());
    Eigen::MatrixXd b(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        const auto& col = snapshots.columns[static_cast<std::size_t>(c)];
        if (static_cast<Eigen::Index>(col.size()) != rows)
            throw ShapeError("snapshot column length mismatch");
        for (Eigen::Index r = 0; r < rows; ++r)
            b(r, c) = col[static_cast<std::size_t>(r)];
    }
    return b;
}

Eigen::MatrixXd basis_matrix(const ApproximationBasis& basis, int n_modes)
{
    if (n_modes < 1 || n_modes > basis.mode_count())
        throw std::invalid_argument("mode count outside [1, N]");
    const auto rows = static_cast<Eigen::Index>(basis.grid.size());
    Eigen::MatrixXd v(rows, n_modes);
    for (int j = 0; j < n_modes; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            v(i, j) = basis.modes[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    return v;
}

ErrorReport residual_report(const Eigen::MatrixXd& reference, const Eigen::MatrixXd& rec)
{
    std::vector<double> trace(static_cast<std::size_t>(reference.cols()));
    for (Eigen::Index c = 0; c < reference.cols(); ++c)
        trace[static_cast<std::size_t>(c)] =
            std::sqrt((reference.col(c) - rec.col(c)).squaredNorm() /
                      static_cast<double>(reference.rows()));
    return report_from_trace(std::move(trace));
}

} // namespace

SnapshotMatrix to_snapshots(const FieldSeries& series)
{
    SnapshotMatrix m;
    m.times = series.times;
    m.columns = series.profiles;
    return m;
}

ErrorReport max_rmse(const SnapshotMatrix& reference, const SnapshotMatrix& candidate)
{
    if (reference.columns.size() != candidate.columns.size())
        throw ShapeError("max_rmse: series lengths differ");
    std::vector<double> trace(reference.columns.size());
    for (std::size_t c = 0; c < reference.columns.size(); ++c) {
        const auto& a = reference.columns[c];
        const auto& b = candidate.columns[c];
        if (a.size() != b.size())
            throw ShapeError("max_rmse: profile lengths differ");
        double acc = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            acc += d * d;
        }
        trace[c] = std::sqrt(acc / static_cast<double>(a.size()));
    }
    return report_from_trace(std::move(trace));
}

ErrorReport max_rmse(const FieldSeries& reference, const FieldSeries& candidate)
{
    return max_rmse(to_snapshots(reference), to_snapshots(candidate));
}

ErrorReport mu(const SnapshotMatrix& reference, const ApproximationBasis& basis, int n_modes)
{
    const Eigen::MatrixXd b = to_matrix(reference);
    const Eigen::MatrixXd v = basis_matrix(basis, n_modes);
    if (v.rows() != b.rows())
        throw ShapeError("mu: snapshots not sampled on the basis grid");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(v);
    if (qr.rank() < v.cols())
        throw NumericalError("mu: rank-deficient basis");
    const Eigen::MatrixXd z = qr.solve(b);
    return residual_report(b, v * z);
}

ErrorReport nu(const SnapshotMatrix& reference,
               const ApproximationBasis& basis,
               int n_modes,
               double dzeta)
{
    if (!(dzeta > 0.0 && dzeta <= 1.0))
        throw std::invalid_argument("nu: dzeta must be in (0, 1]");
    const Eigen::MatrixXd b = to_matrix(reference);
    const Eigen::MatrixXd v = basis_matrix(basis, n_modes);
    if (v.rows() != b.rows())
        throw ShapeError("nu: snapshots not sampled on the basis grid");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(v);
    if (qr.rank() < v.cols())
        throw NumericalError("nu: rank-deficient basis");
    Eigen::MatrixXd z = qr.solve(b);

    // Ranges come from the same projected set; the quantization detour is the
    // only difference between nu and mu.
    for (Eigen::Index j = 0; j < z.rows(); ++j) {
        const double lo = z.row(j).minCoeff();
        const double hi = z.row(j).maxCoeff();
        const double width = hi - lo;
        for (Eigen::Index c = 0; c < z.cols(); ++c) {
            double zb = width > 0.0 ? (z(j, c) - lo) / width : 0.5;
            zb = std::round(zb / dzeta) * dzeta;
            z(j, c) = width > 0.0 ? lo + width * zb : lo;
        }
    }
    return residual_report(b, v * z);
}

ErrorReport epsilon(const FieldSeries& reference, const FieldSeries& pgd_series)
{
    return max_rmse(reference, pgd_series);
}

TimedSample time_block(std::string label, const std::function<void()>& fn)
{
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    return {std::move(label), std::chrono::duration<double>(stop - start).count()};
}

CpuRatio cpu_ratio(double t_cpu, double t0)
{
    if (t_cpu <= 0.0 || t0 <= 0.0)
        throw std::invalid_argument("cpu_ratio: times must be positive");
    return {t_cpu, t0, t_cpu / t0};
}

} // namespace pgdheat
