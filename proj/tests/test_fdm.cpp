#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "pgdheat/errors.hpp"
#include "pgdheat/fdm.hpp"
#include "pgdheat/grid.hpp"

using namespace pgdheat;

namespace {

DimensionlessProblem make_problem(double bi_in, double bi_out)
{
    DimensionlessProblem p;
    p.bi_in = bi_in;
    p.bi_out = bi_out;
    p.t_ref = 1.0e4;
    p.horizon = 10.0;
    return p;
}

} // namespace

TEST_CASE("transient solver")
{
    const auto grid = uniform_grid(40);
    const auto p = make_problem(0.6, 1.2);

    SUBCASE("homogeneous problem stays at zero")
    {
        const int steps = 50;
        std::vector<double> zero(steps + 1, 0.0);
        FourierBc left{p.bi_out, zero, zero};
        FourierBc right{p.bi_in, zero, zero};
        const auto s = solve_transient(p, left, right, 1e-2, grid,
                                       std::vector<double>(grid.size(), 0.0), steps);
        REQUIRE(s.size() == steps + 1);
        for (const auto& profile : s.profiles)
            for (double v : profile)
                CHECK(v == 0.0);
    }
    SUBCASE("constant Dirichlet values hold a constant state")
    {
        const int steps = 30;
        const double c = 0.37;
        DirichletBc bc{std::vector<double>(steps + 1, c)};
        const auto s = solve_transient(p, bc, bc, 1e-2, grid,
                                       std::vector<double>(grid.size(), c), steps);
        for (const auto& profile : s.profiles)
            for (double v : profile)
                CHECK(v == doctest::Approx(c).epsilon(1e-13));
    }
    SUBCASE("long integration reaches the two-film steady profile")
    {
        // Closed-form steady state for u_out=1, u_in=-0.5 (resistances
        // 1/Bi_out + 1 + 1/Bi_in): linear profile A + B x with
        // B = Bi_in (u_in - u_out) / (1 + Bi_in + Bi_in/Bi_out).
        const int steps = 4000;
        std::vector<double> ones(steps + 1, 1.0);
        std::vector<double> inside(steps + 1, -0.5);
        std::vector<double> zero(steps + 1, 0.0);
        FourierBc left{p.bi_out, ones, zero};
        FourierBc right{p.bi_in, inside, zero};
        const auto s = solve_transient(p, left, right, 0.05, grid,
                                       std::vector<double>(grid.size(), 0.0), steps);
        const double b = -0.4285714285714285;
        const double a = 0.6428571428571429;
        const auto& last = s.profiles.back();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double x = from_poly_interval(grid.nodes[i]);
            CHECK(last[i] == doctest::Approx(a + b * x).epsilon(1e-8));
        }
    }
    SUBCASE("first-order convergence in time")
    {
        // Smooth ramped forcing; difference between successive dt halvings
        // scales like dt.
        auto run = [&](double dt) {
            const int steps = static_cast<int>(std::llround(1.0 / dt));
            std::vector<double> air(steps + 1), zero(steps + 1, 0.0);
            for (int n = 0; n <= steps; ++n)
                air[static_cast<std::size_t>(n)] = std::sin(2.0 * n * dt);
            FourierBc left{p.bi_out, air, zero};
            FourierBc right{p.bi_in, zero, zero};
            return solve_transient(p, left, right, dt, grid,
                                   std::vector<double>(grid.size(), 0.0), steps)
                .profiles.back();
        };
        std::vector<double> dts{1e-2, 5e-3, 2.5e-3};
        std::vector<double> diffs;
        for (double dt : dts) {
            const auto coarse = run(dt);
            const auto fine = run(dt / 2);
            double err = 0.0;
            for (std::size_t i = 0; i < coarse.size(); ++i)
                err = std::max(err, std::abs(coarse[i] - fine[i]));
            diffs.push_back(err);
        }
        const double slope = std::log(diffs.front() / diffs.back()) /
                             std::log(dts.front() / dts.back());
        CHECK(slope == doctest::Approx(1.0).epsilon(0.2));
    }
    SUBCASE("signal shorter than the march is a shape error")
    {
        std::vector<double> tooshort(3, 0.0);
        FourierBc left{p.bi_out, tooshort, tooshort};
        FourierBc right{p.bi_in, tooshort, tooshort};
        CHECK_THROWS_AS(solve_transient(p, left, right, 1e-2, grid,
                                        std::vector<double>(grid.size(), 0.0), 10),
                        ShapeError);
    }
}

TEST_CASE("bvp oracle")
{
    const auto grid = uniform_grid(64);
    const auto p = make_problem(0.6, 1.2);

    SUBCASE("zero data gives the zero solution")
    {
        BvpInstance inst{1e-3, std::vector<double>(grid.size(), 0.0), 0.0, 0.0};
        for (double v : solve_bvp(inst, p.bi_in, p.bi_out, grid))
            CHECK(v == 0.0);
    }
    SUBCASE("matches one implicit transient step")
    {
        std::mt19937_64 gen(3);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        std::vector<double> u0(grid.size());
        for (double& v : u0)
            v = dist(gen);
        const double u_out = 0.3, u_in = -0.2, q = 0.15, dt = 2e-3;
        std::vector<double> air_l(2, u_out), air_r(2, u_in), flux(2, q), zero(2, 0.0);
        FourierBc left{p.bi_out, air_l, flux};
        FourierBc right{p.bi_in, air_r, zero};
        const auto step = solve_transient(p, left, right, dt, grid, u0, 1).profiles.back();

        BvpInstance inst{dt, u0, p.bi_in * u_in, -p.bi_out * u_out - q};
        const auto y = solve_bvp(inst, p.bi_in, p.bi_out, grid);
        for (std::size_t i = 0; i < y.size(); ++i)
            CHECK(y[i] == doctest::Approx(step[i]).epsilon(1e-12));
    }
    SUBCASE("large-a solve satisfies the discrete equations")
    {
        const double a = 1e6;
        std::vector<double> b(grid.size());
        for (std::size_t i = 0; i < b.size(); ++i)
            b[i] = std::cos(grid.nodes[i]);
        BvpInstance inst{a, b, 0.0, 0.0};
        const auto y = solve_bvp(inst, p.bi_in, p.bi_out, grid);
        // residual of the boundary-row-scaled FD equations
        const double h = 1.0 / grid.n_intervals();
        double res = 0.0;
        for (std::size_t i = 1; i + 1 < y.size(); ++i) {
            const double lhs = y[i] - a * (y[i - 1] - 2 * y[i] + y[i + 1]) / (h * h);
            res = std::max(res, std::abs(lhs - b[i]) / a);
        }
        CHECK(res < 1e-10);
    }
    SUBCASE("discrete maximum principle")
    {
        std::mt19937_64 gen(5);
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        for (int k = 0; k < 20; ++k) {
            std::vector<double> b(grid.size());
            for (double& v : b)
                v = dist(gen);
            BvpInstance inst{1e-2, b, 0.0, 0.0};
            for (double v : solve_bvp(inst, p.bi_in, p.bi_out, grid))
                CHECK(v >= 0.0);
        }
    }
    SUBCASE("second-order spatial convergence on a manufactured solution")
    {
        // y = cos(pi x), b = (1 + a pi^2) y, b_out = -Bi_out, b_in = -Bi_in.
        const double a = 0.05;
        std::vector<double> errs, hs;
        for (int n : {16, 32, 64, 128}) {
            const auto g = uniform_grid(n);
            std::vector<double> b(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double x = from_poly_interval(g.nodes[i]);
                b[i] = (1.0 + a * std::numbers::pi * std::numbers::pi) *
                       std::cos(std::numbers::pi * x);
            }
            BvpInstance inst{a, b, -p.bi_in, -p.bi_out};
            const auto y = solve_bvp(inst, p.bi_in, p.bi_out, g);
            double err = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double x = from_poly_interval(g.nodes[i]);
                err = std::max(err, std::abs(y[i] - std::cos(std::numbers::pi * x)));
            }
            errs.push_back(err);
            hs.push_back(1.0 / n);
        }
        const double slope = std::log(errs.front() / errs.back()) / std::log(hs.front() / hs.back());
        CHECK(slope == doctest::Approx(2.0).epsilon(0.1));
    }
}

TEST_CASE("qin flux")
{
    CHECK(qin_flux(295.0, 295.0, 295.0, 0.2, 0.2, 0.9, 0.9) == doctest::Approx(0.0));
    // frozen from independent arithmetic of the formula
    CHECK(qin_flux(300.0, 295.0, 296.15, 0.2, 0.2, 0.9, 0.9) ==
          doctest::Approx(25.66259519414512).epsilon(1e-12));
    CHECK(qin_flux(300.0, 295.0, 296.15, 0.0, 0.0, 0.9, 0.9) == doctest::Approx(0.0));
    CHECK_THROWS_AS(qin_flux(-1.0, 295.0, 296.15, 0.2, 0.2, 0.9, 0.9), std::invalid_argument);
}

TEST_CASE("model-error solver")
{
    const WallLayer wall{0.1, 1.75, 2.2e6};
    const ConvectiveEnvironment env{8.7, 23.2, 293.15};
    const auto p = nondimensionalize(wall, env, 1000.0);
    const auto grid = uniform_grid(30);

    SUBCASE("no flux, no error")
    {
        const std::vector<double> qin(41, 0.0);
        const auto e = solve_model_error(p, wall, env, qin, 1e-2, grid);
        for (const auto& profile : e.profiles)
            for (double v : profile)
                CHECK(v == 0.0);
    }
    SUBCASE("superposition: u - e solves the radiative problem")
    {
        // March u without the inside flux, e with it; u - e must satisfy the
        // discrete equations of the flux-carrying problem to solver precision.
        const int steps = 60;
        const double dt = 5e-3;
        std::mt19937_64 gen(7);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        std::vector<double> air_out(steps + 1), air_in(steps + 1), zero(steps + 1, 0.0);
        std::vector<double> qin(steps + 1);
        for (int n = 0; n <= steps; ++n) {
            air_out[n] = 0.2 * std::sin(0.3 * n);
            air_in[n] = 0.1 * std::cos(0.2 * n);
            qin[n] = 20.0 * dist(gen);
        }
        FourierBc left{p.bi_out, air_out, zero};
        FourierBc right_no_rad{p.bi_in, air_in, zero};
        const auto u = solve_transient(p, left, right_no_rad, dt, grid,
                                       std::vector<double>(grid.size(), 0.0), steps);
        const auto e = solve_model_error(p, wall, env, qin, dt, grid);

        // radiative problem: inside face carries flux -q_in (dimensionless)
        const double q_scale = wall.thickness / (wall.conductivity * env.u0);
        std::vector<double> flux(steps + 1);
        for (int n = 0; n <= steps; ++n)
            flux[n] = -qin[n] * q_scale;
        FourierBc right_rad{p.bi_in, air_in, flux};
        const auto utilde = solve_transient(p, left, right_rad, dt, grid,
                                            std::vector<double>(grid.size(), 0.0), steps);
        for (std::size_t n = 0; n < u.size(); ++n)
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double reconstructed = u.profiles[n][i] - e.profiles[n][i] / env.u0;
                CHECK(std::abs(reconstructed - utilde.profiles[n][i]) < 1e-8);
            }
    }
}

TEST_CASE("series csv round trip")
{
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "pgdheat_test_fdm";
    fs::create_directories(dir);
    const auto path = dir / "series.csv";

    FieldSeries s;
    s.grid = uniform_grid(5);
    s.times = {0.0, 0.1, 0.2};
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int r = 0; r < 3; ++r) {
        std::vector<double> p(s.grid.size());
        for (double& v : p)
            v = dist(gen);
        s.profiles.push_back(p);
    }
    write_series_csv(s, path);
    const auto back = read_series_csv(path);
    REQUIRE(back.size() == s.size());
    CHECK(back.grid.kind == GridKind::Uniform);
    for (std::size_t r = 0; r < s.size(); ++r) {
        CHECK(back.times[r] == doctest::Approx(s.times[r]).epsilon(1e-8));
        for (std::size_t i = 0; i < s.grid.size(); ++i)
            CHECK(back.profiles[r][i] == doctest::Approx(s.profiles[r][i]).epsilon(1e-8));
    }

    SUBCASE("parse errors carry line numbers")
    {
        const auto bad = dir / "bad.csv";
        {
            std::ofstream os(bad);
            os << "time,0,0.5,1\n0,1,2,3\n0.1,1,2\n";
        }
        try {
            read_series_csv(bad);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
        }
        {
            std::ofstream os(bad);
            os << "time,0,0.5,1\n0.2,1,2,3\n0.1,1,2,3\n";
        }
        CHECK_THROWS_AS(read_series_csv(bad), ParseError);
        {
            std::ofstream os(bad);
            os << "";
        }
        CHECK_THROWS_AS(read_series_csv(bad), ParseError);
    }
    fs::remove_all(dir);
}
