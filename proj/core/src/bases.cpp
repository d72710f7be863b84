#include "pgdheat/bases.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "pgdheat/csv.hpp"
#include "pgdheat/errors.hpp"

namespace pgdheat {

namespace {

Eigen::MatrixXd mode_matrix(const ApproximationBasis& basis)
{
    const auto rows = static_cast<Eigen::Index>(basis.grid.size());
    const auto cols = static_cast<Eigen::Index>(basis.modes.size());
    Eigen::MatrixXd v(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        const auto& mode = basis.modes[static_cast<std::size_t>(j)];
        if (mode.size() != basis.grid.size())
            throw ShapeError("basis mode length does not match grid");
        for (Eigen::Index i = 0; i < rows; ++i)
            v(i, j) = mode[static_cast<std::size_t>(i)];
    }
    return v;
}

Eigen::MatrixXd snapshot_matrix(const SnapshotMatrix& snapshots, std::size_t rows)
{
    const auto s = static_cast<Eigen::Index>(snapshots.columns.size());
    Eigen::MatrixXd b(static_cast<Eigen::Index>(rows), s);
    for (Eigen::Index c = 0; c < s; ++c) {
        const auto& col = snapshots.columns[static_cast<std::size_t>(c)];
        if (col.size() != rows)
            throw ShapeError("snapshot column length mismatch");
        for (std::size_t i = 0; i < rows; ++i)
            b(static_cast<Eigen::Index>(i), c) = col[i];
    }
    return b;
}

} // namespace

std::string to_string(BasisKind kind)
{
    switch (kind) {
    case BasisKind::Chebyshev: return "chebyshev";
    case BasisKind::Legendre: return "legendre";
    case BasisKind::Pod: return "pod";
    }
    return "?";
}

BasisKind basis_kind_from_string(const std::string& name)
{
    if (name == "chebyshev" || name == "cheb") return BasisKind::Chebyshev;
    if (name == "legendre" || name == "leg") return BasisKind::Legendre;
    if (name == "pod") return BasisKind::Pod;
    throw std::invalid_argument("unknown basis kind: " + name);
}

ApproximationBasis chebyshev_basis(int n_modes, const SpatialGrid& grid)
{
    if (n_modes < 1)
        throw std::invalid_argument("chebyshev_basis: need at least one mode");
    ApproximationBasis basis;
    basis.kind = BasisKind::Chebyshev;
    basis.grid = grid;
    basis.modes.resize(static_cast<std::size_t>(n_modes));
    const std::size_t n = grid.size();
    basis.modes[0].assign(n, 1.0);
    if (n_modes > 1)
        basis.modes[1] = grid.nodes;
    for (int j = 2; j < n_modes; ++j) {
        auto& tj = basis.modes[static_cast<std::size_t>(j)];
        tj.resize(n);
        const auto& t1 = basis.modes[static_cast<std::size_t>(j - 1)];
        const auto& t2 = basis.modes[static_cast<std::size_t>(j - 2)];
        for (std::size_t i = 0; i < n; ++i)
            tj[i] = 2.0 * grid.nodes[i] * t1[i] - t2[i];
    }
    return basis;
}

ApproximationBasis legendre_basis(int n_modes, const SpatialGrid& grid)
{
    if (n_modes < 1)
        throw std::invalid_argument("legendre_basis: need at least one mode");
    ApproximationBasis basis;
    basis.kind = BasisKind::Legendre;
    basis.grid = grid;
    basis.modes.resize(static_cast<std::size_t>(n_modes));
    const std::size_t n = grid.size();
    basis.modes[0].assign(n, 1.0);
    if (n_modes > 1)
        basis.modes[1] = grid.nodes;
    for (int j = 1; j + 1 < n_modes; ++j) {
        auto& pn = basis.modes[static_cast<std::size_t>(j + 1)];
        pn.resize(n);
        const auto& p1 = basis.modes[static_cast<std::size_t>(j)];
        const auto& p0 = basis.modes[static_cast<std::size_t>(j - 1)];
        for (std::size_t i = 0; i < n; ++i)
            pn[i] = ((2.0 * j + 1.0) * grid.nodes[i] * p1[i] - j * p0[i]) / (j + 1.0);
    }
    return basis;
}

ApproximationBasis pod_basis(const SnapshotMatrix& snapshots, int n_modes)
{
    if (snapshots.columns.empty())
        throw std::invalid_argument("pod_basis: empty snapshot set");
    const std::size_t rows = snapshots.columns.front().size();
    const auto bound = std::min(rows, snapshots.columns.size());
    if (n_modes < 1 || static_cast<std::size_t>(n_modes) > bound)
        throw std::invalid_argument("pod_basis: mode count outside [1, min(nodes, snapshots)]");

    const Eigen::MatrixXd b = snapshot_matrix(snapshots, rows);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU);
    const Eigen::MatrixXd& u = svd.matrixU();

    ApproximationBasis basis;
    basis.kind = BasisKind::Pod;
    basis.grid.kind = GridKind::Uniform; // caller-supplied grid is implicit in the snapshots
    basis.grid.nodes.resize(rows);
    for (std::size_t i = 0; i < rows; ++i)
        basis.grid.nodes[i] = -1.0 + 2.0 * static_cast<double>(i) / (rows - 1);
    basis.modes.resize(static_cast<std::size_t>(n_modes));
    for (int j = 0; j < n_modes; ++j) {
        Eigen::VectorXd mode = u.col(j);
        Eigen::Index imax = 0;
        mode.cwiseAbs().maxCoeff(&imax);
        if (mode(imax) < 0.0)
            mode = -mode;
        basis.modes[static_cast<std::size_t>(j)].assign(mode.data(), mode.data() + mode.size());
    }
    return basis;
}

ApproximationBasis truncated(const ApproximationBasis& basis, int n_modes)
{
    if (n_modes < 1 || n_modes > basis.mode_count())
        throw std::invalid_argument("truncated: mode count outside [1, N]");
    ApproximationBasis out;
    out.kind = basis.kind;
    out.grid = basis.grid;
    out.modes.assign(basis.modes.begin(), basis.modes.begin() + n_modes);
    if (!basis.ranges.empty()) {
        const auto take = std::min<std::size_t>(basis.ranges.size(),
                                                static_cast<std::size_t>(n_modes));
        out.ranges.min.assign(basis.ranges.min.begin(), basis.ranges.min.begin() + take);
        out.ranges.max.assign(basis.ranges.max.begin(), basis.ranges.max.begin() + take);
    }
    return out;
}

struct Projector::Impl {
    Eigen::MatrixXd v;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
};

Projector::Projector(const ApproximationBasis& basis) : impl_(std::make_unique<Impl>())
{
    impl_->v = mode_matrix(basis);
    impl_->qr.compute(impl_->v);
    if (impl_->qr.rank() < impl_->v.cols())
        throw NumericalError("projection basis is rank deficient on this grid");
}

Projector::~Projector() = default;
Projector::Projector(Projector&&) noexcept = default;
Projector& Projector::operator=(Projector&&) noexcept = default;

std::vector<double> Projector::project(std::span<const double> field) const
{
    if (static_cast<Eigen::Index>(field.size()) != impl_->v.rows())
        throw ShapeError("project: field length does not match basis grid");
    const Eigen::Map<const Eigen::VectorXd> b(field.data(),
                                              static_cast<Eigen::Index>(field.size()));
    const Eigen::VectorXd z = impl_->qr.solve(b);
    return {z.data(), z.data() + z.size()};
}

std::vector<double> Projector::reconstruct(std::span<const double> zeta) const
{
    if (static_cast<Eigen::Index>(zeta.size()) != impl_->v.cols())
        throw ShapeError("reconstruct: coefficient count does not match basis");
    const Eigen::Map<const Eigen::VectorXd> z(zeta.data(),
                                              static_cast<Eigen::Index>(zeta.size()));
    const Eigen::VectorXd f = impl_->v * z;
    return {f.data(), f.data() + f.size()};
}

std::vector<double> project(const std::vector<double>& field, const ApproximationBasis& basis)
{
    return Projector(basis).project(field);
}

std::vector<double> reconstruct(const ApproximationBasis& basis, const std::vector<double>& zeta)
{
    if (zeta.size() != basis.modes.size())
        throw ShapeError("reconstruct: coefficient count does not match basis");
    std::vector<double> out(basis.grid.size(), 0.0);
    for (std::size_t j = 0; j < basis.modes.size(); ++j) {
        const auto& mode = basis.modes[j];
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += mode[i] * zeta[j];
    }
    return out;
}

CoefficientRanges coefficient_ranges(const SnapshotMatrix& snapshots,
                                     const ApproximationBasis& basis)
{
    if (snapshots.columns.size() < 2)
        throw std::invalid_argument("coefficient_ranges: need at least 2 snapshots");
    const Projector projector(basis);
    CoefficientRanges ranges;
    const auto n = static_cast<std::size_t>(basis.mode_count());
    ranges.min.assign(n, std::numeric_limits<double>::infinity());
    ranges.max.assign(n, -std::numeric_limits<double>::infinity());
    for (const auto& column : snapshots.columns) {
        const auto z = projector.project(column);
        for (std::size_t j = 0; j < n; ++j) {
            ranges.min[j] = std::min(ranges.min[j], z[j]);
            ranges.max[j] = std::max(ranges.max[j], z[j]);
        }
    }
    return ranges;
}

std::vector<double> normalize(const std::vector<double>& zeta,
                              const CoefficientRanges& ranges,
                              std::uint64_t* clamp_events)
{
    if (zeta.size() != ranges.size())
        throw ShapeError("normalize: coefficient count does not match ranges");
    std::vector<double> out(zeta.size());
    for (std::size_t j = 0; j < zeta.size(); ++j) {
        const double width = ranges.max[j] - ranges.min[j];
        if (width <= 0.0) {
            out[j] = 0.5;
            continue;
        }
        double z = (zeta[j] - ranges.min[j]) / width;
        if (z < 0.0 || z > 1.0) {
            if (clamp_events)
                ++*clamp_events;
            z = std::clamp(z, 0.0, 1.0);
        }
        out[j] = z;
    }
    return out;
}

std::vector<double> denormalize(const std::vector<double>& zbar, const CoefficientRanges& ranges)
{
    if (zbar.size() != ranges.size())
        throw ShapeError("denormalize: coefficient count does not match ranges");
    std::vector<double> out(zbar.size());
    for (std::size_t j = 0; j < zbar.size(); ++j) {
        const double width = ranges.max[j] - ranges.min[j];
        out[j] = width <= 0.0 ? ranges.min[j] : ranges.min[j] + width * zbar[j];
    }
    return out;
}

std::vector<double> quantize(std::vector<double> zbar, double dzeta)
{
    if (!(dzeta > 0.0 && dzeta <= 1.0))
        throw std::invalid_argument("quantize: dzeta must be in (0, 1]");
    for (double& z : zbar)
        z = std::round(z / dzeta) * dzeta;
    return zbar;
}

namespace {

nlohmann::json grid_to_json(const SpatialGrid& grid)
{
    return {{"kind", grid.kind == GridKind::Uniform ? "uniform" : "chebyshev-lobatto"},
            {"nodes", grid.nodes}};
}

SpatialGrid grid_from_json(const nlohmann::json& j)
{
    SpatialGrid grid;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "uniform")
        grid.kind = GridKind::Uniform;
    else if (kind == "chebyshev-lobatto")
        grid.kind = GridKind::ChebyshevLobatto;
    else
        throw IoError("unknown grid kind: " + kind);
    grid.nodes = j.at("nodes").get<std::vector<double>>();
    return grid;
}

} // namespace

void save_basis(const ApproximationBasis& basis, const std::filesystem::path& path)
{
    nlohmann::json j{{"format_version", 1},
                     {"kind", to_string(basis.kind)},
                     {"grid", grid_to_json(basis.grid)},
                     {"modes", basis.modes},
                     {"ranges", {{"min", basis.ranges.min}, {"max", basis.ranges.max}}}};
    std::ofstream os(path);
    if (!os)
        throw IoError("cannot open for writing: " + path.string());
    os << j.dump(2) << '\n';
    if (!os)
        throw IoError("write failed: " + path.string());
}

ApproximationBasis load_basis(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw IoError("cannot open: " + path.string());
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(e.what(), path.string());
    }
    if (j.value("format_version", -1) != 1)
        throw IoError("unsupported basis format version in " + path.string());
    ApproximationBasis basis;
    basis.kind = basis_kind_from_string(j.at("kind").get<std::string>());
    basis.grid = grid_from_json(j.at("grid"));
    basis.modes = j.at("modes").get<std::vector<std::vector<double>>>();
    basis.ranges.min = j.at("ranges").at("min").get<std::vector<double>>();
    basis.ranges.max = j.at("ranges").at("max").get<std::vector<double>>();
    for (const auto& mode : basis.modes)
        if (mode.size() != basis.grid.size())
            throw IoError("basis mode length mismatch in " + path.string());
    return basis;
}

void write_snapshots_csv(const SnapshotMatrix& snapshots,
                         const SpatialGrid& grid,
                         const std::filesystem::path& path)
{
    std::ofstream os(path);
    if (!os)
        throw IoError("cannot open for writing: " + path.string());
    os << "time";
    for (double x : grid.nodes)
        os << ',' << csv::format(x, 17);
    os << '\n';
    for (std::size_t r = 0; r < snapshots.columns.size(); ++r) {
        os << csv::format(r < snapshots.times.size() ? snapshots.times[r]
                                                     : static_cast<double>(r));
        for (double v : snapshots.columns[r])
            os << ',' << csv::format(v);
        os << '\n';
    }
    if (!os)
        throw IoError("write failed: " + path.string());
}

SnapshotMatrix read_snapshots_csv(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw IoError("cannot open: " + path.string());
    SnapshotMatrix out;
    std::string line;
    long lineno = 0;
    if (!std::getline(is, line))
        throw ParseError("empty file", path.string(), 1);
    ++lineno;
    const auto header = csv::split(line);
    if (header.size() < 2 || header[0] != "time")
        throw ParseError("expected header 'time,<x0>,...'", path.string(), lineno);
    const std::size_t n = header.size() - 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r")
            continue;
        const auto tokens = csv::split(line);
        if (tokens.size() != n + 1)
            throw ParseError("expected " + std::to_string(n + 1) + " columns, got " +
                                 std::to_string(tokens.size()),
                             path.string(), lineno);
        out.times.push_back(csv::parse_double(tokens[0], path, lineno));
        std::vector<double> column(n);
        for (std::size_t i = 0; i < n; ++i)
            column[i] = csv::parse_double(tokens[i + 1], path, lineno);
        out.columns.push_back(std::move(column));
    }
    if (out.columns.empty())
        throw ParseError("no data rows", path.string(), lineno);
    return out;
}

} // namespace pgdheat
