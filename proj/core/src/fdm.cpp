#include "pgdheat/fdm.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "pgdheat/csv.hpp"
#include "pgdheat/errors.hpp"
#include "step_operator.hpp"

namespace pgdheat {

FieldSeries solve_transient(const DimensionlessProblem& problem,
                            const BoundaryCondition& left,
                            const BoundaryCondition& right,
                            double dt,
                            const SpatialGrid& grid,
                            std::vector<double> initial,
                            int steps)
{
    if (dt <= 0.0)
        throw std::invalid_argument("solve_transient: dt must be positive");
    if (steps < 0)
        throw std::invalid_argument("solve_transient: steps must be >= 0");
    if (initial.size() != grid.size())
        throw ShapeError("solve_transient: initial field length does not match grid");

    const auto* fl = std::get_if<FourierBc>(&left);
    const auto* fr = std::get_if<FourierBc>(&right);
    const auto* dl = std::get_if<DirichletBc>(&left);
    const auto* dr = std::get_if<DirichletBc>(&right);
    const std::size_t need = static_cast<std::size_t>(steps) + 1;
    auto check_len = [&](std::size_t got, const char* what) {
        if (got < need)
            throw ShapeError(std::string("solve_transient: ") + what +
                             " signal shorter than the time grid");
    };
    if (fl) {
        if (fl->biot <= 0.0)
            throw std::invalid_argument("solve_transient: Fourier Biot must be positive");
        check_len(fl->air.size(), "left air");
        check_len(fl->flux.size(), "left flux");
    } else {
        check_len(dl->surface.size(), "left surface");
    }
    if (fr) {
        if (fr->biot <= 0.0)
            throw std::invalid_argument("solve_transient: Fourier Biot must be positive");
        check_len(fr->air.size(), "right air");
        check_len(fr->flux.size(), "right flux");
    } else {
        check_len(dr->surface.size(), "right surface");
    }

    const double a = dt * problem.fourier;
    const auto op = detail::assemble_step_operator(grid, a, dl != nullptr, dr != nullptr,
                                                   fl ? fl->biot : 0.0, fr ? fr->biot : 0.0);

    FieldSeries out;
    out.grid = grid;
    out.times.reserve(need);
    out.profiles.reserve(need);
    out.times.push_back(0.0);
    out.profiles.push_back(initial);

    const std::size_t n = grid.size();
    std::vector<double> u = std::move(initial);
    std::vector<double> rhs(n);
    for (int step = 0; step < steps; ++step) {
        const std::size_t tn = static_cast<std::size_t>(step);
        for (std::size_t i = 0; i < n; ++i)
            rhs[i] = op.mass[i] * u[i];
        if (fl) {
            // b_out = -Bi*air - flux enters the left row as -a*b_out.
            const double b_out = -fl->biot * fl->air[tn] - fl->flux[tn];
            rhs[0] -= a * b_out;
        } else {
            rhs[0] = dl->surface[tn + 1];
        }
        if (fr) {
            const double b_in = fr->biot * fr->air[tn] + fr->flux[tn];
            rhs[n - 1] += a * b_in;
        } else {
            rhs[n - 1] = dr->surface[tn + 1];
        }
        op.solve(rhs);
        u = rhs;
        out.times.push_back((step + 1) * dt);
        out.profiles.push_back(u);
    }
    return out;
}

std::vector<double> solve_bvp(const BvpInstance& instance,
                              double bi_in,
                              double bi_out,
                              const SpatialGrid& grid)
{
    if (instance.a <= 0.0)
        throw std::invalid_argument("solve_bvp: coefficient a must be positive");
    if (instance.source.size() != grid.size())
        throw ShapeError("solve_bvp: source length does not match grid");

    const auto op =
        detail::assemble_step_operator(grid, instance.a, false, false, bi_out, bi_in);
    const std::size_t n = grid.size();
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i)
        rhs[i] = op.mass[i] * instance.source[i];
    rhs[0] -= instance.a * instance.b_out;
    rhs[n - 1] += instance.a * instance.b_in;
    op.solve(rhs);
    for (double v : rhs)
        if (!std::isfinite(v))
            throw NumericalError("solve_bvp: non-finite solution");
    return rhs;
}

double qin_flux(double t_surface,
                double u_wall,
                double u_ground,
                double f_wall,
                double f_ground,
                double eps_wall,
                double eps_ground)
{
    if (t_surface <= 0.0 || u_wall <= 0.0 || u_ground <= 0.0)
        throw std::invalid_argument("qin_flux: temperatures must be positive kelvin");
    constexpr double sigma = 5.67e-8; // W m^-2 K^-4
    const double t4 = std::pow(t_surface, 4);
    return f_wall * eps_wall * sigma * 4.0 * (t4 - std::pow(u_wall, 4)) +
           f_ground * eps_ground * sigma * (t4 - std::pow(u_ground, 4));
}

FieldSeries solve_model_error(const DimensionlessProblem& problem,
                              const WallLayer& wall,
                              const ConvectiveEnvironment& env,
                              const std::vector<double>& qin_series,
                              double dt,
                              const SpatialGrid& grid)
{
    if (qin_series.empty())
        throw std::invalid_argument("solve_model_error: empty q_in series");
    const int steps = static_cast<int>(qin_series.size()) - 1;
    const double q_scale = wall.thickness / (wall.conductivity * env.u0);

    // e is a temperature difference: scaled by u0 with no -1 offset. The inside
    // face carries -q_in as an imposed flux, everything else is homogeneous.
    std::vector<double> zero(static_cast<std::size_t>(steps) + 1, 0.0);
    std::vector<double> flux(static_cast<std::size_t>(steps) + 1);
    for (std::size_t i = 0; i < flux.size(); ++i)
        flux[i] = -qin_series[i] * q_scale;

    FourierBc left{problem.bi_out, zero, zero};
    FourierBc right{problem.bi_in, zero, std::move(flux)};
    FieldSeries series = solve_transient(problem, left, right, dt, grid,
                                         std::vector<double>(grid.size(), 0.0), steps);
    for (auto& profile : series.profiles)
        for (double& v : profile)
            v *= env.u0;
    for (double& t : series.times)
        t *= problem.t_ref; // physical-units series, times in seconds
    return series;
}

void write_series_csv(const FieldSeries& series, const std::filesystem::path& path)
{
    std::ofstream os(path);
    if (!os)
        throw IoError("cannot open for writing: " + path.string());
    os << "time";
    for (double x : series.grid.nodes)
        os << ',' << csv::format(x, 17);
    os << '\n';
    for (std::size_t r = 0; r < series.times.size(); ++r) {
        os << csv::format(series.times[r]);
        const auto& p = series.profiles[r];
        for (double v : p)
            os << ',' << csv::format(v);
        os << '\n';
    }
    if (!os)
        throw IoError("write failed: " + path.string());
}

FieldSeries read_series_csv(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw IoError("cannot open: " + path.string());

    FieldSeries out;
    std::string line;
    long lineno = 0;

    if (!std::getline(is, line))
        throw ParseError("empty file", path.string(), 1);
    ++lineno;
    auto header = csv::split(line);
    if (header.size() < 3 || header[0] != "time")
        throw ParseError("expected header 'time,<x0>,<x1>,...'", path.string(), lineno);
    const std::size_t n = header.size() - 1;
    out.grid.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.grid.nodes[i] = csv::parse_double(header[i + 1], path, lineno);

    // Classify the node set so round-tripped grids keep their kind.
    out.grid.kind = GridKind::Uniform;
    if (n >= 3) {
        const double h0 = out.grid.nodes[1] - out.grid.nodes[0];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (std::abs((out.grid.nodes[i + 1] - out.grid.nodes[i]) - h0) > 1e-9 * std::abs(h0)) {
                out.grid.kind = GridKind::ChebyshevLobatto;
                break;
            }
        }
    }

    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r")
            continue;
        auto tokens = csv::split(line);
        if (tokens.size() != n + 1)
            throw ParseError("expected " + std::to_string(n + 1) + " columns, got " +
                                 std::to_string(tokens.size()),
                             path.string(), lineno);
        out.times.push_back(csv::parse_double(tokens[0], path, lineno));
        if (out.times.size() >= 2 && out.times.back() <= out.times[out.times.size() - 2])
            throw ParseError("time stamps not strictly increasing", path.string(), lineno);
        std::vector<double> profile(n);
        for (std::size_t i = 0; i < n; ++i)
            profile[i] = csv::parse_double(tokens[i + 1], path, lineno);
        out.profiles.push_back(std::move(profile));
    }
    if (out.times.empty())
        throw ParseError("no data rows", path.string(), lineno);
    return out;
}

} // namespace pgdheat
