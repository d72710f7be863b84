#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pgdheat/errors.hpp"
#include "pgdheat/physics.hpp"

using namespace pgdheat;

TEST_CASE("nondimensionalize")
{
    SUBCASE("concrete layer of the theoretical study")
    {
        const WallLayer wall{0.1, 1.75, 2.2e6};
        const ConvectiveEnvironment env{8.7, 23.2, 293.15};
        const auto p = nondimensionalize(wall, env, 3 * 86400.0);
        CHECK(p.bi_in == doctest::Approx(0.4971).epsilon(2e-3));
        CHECK(p.t_ref == doctest::Approx(1.2571e4).epsilon(1e-3));
        CHECK(p.fourier == 1.0);
        CHECK(p.horizon == doctest::Approx(3 * 86400.0 / p.t_ref));
    }
    SUBCASE("unit case")
    {
        const auto p = nondimensionalize({1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, 2.0);
        CHECK(p.bi_in == doctest::Approx(1.0));
        CHECK(p.bi_out == doctest::Approx(1.0));
        CHECK(p.t_ref == doctest::Approx(1.0));
        CHECK(p.horizon == doctest::Approx(2.0));
    }
    SUBCASE("insulation layer of the practical study")
    {
        const auto p = nondimensionalize({0.10, 0.04, 30e3}, {8.7, 23.2, 293.15}, 3600.0);
        CHECK(p.t_ref == doctest::Approx(7.5e3).epsilon(1e-12));
    }
    SUBCASE("nonpositive inputs are rejected")
    {
        CHECK_THROWS_AS(nondimensionalize({0.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, 1.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(nondimensionalize({1.0, 1.0, 1.0}, {1.0, -1.0, 1.0}, 1.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(nondimensionalize({1.0, 1.0, 1.0}, {1.0, 1.0, 0.0}, 1.0),
                        std::invalid_argument);
    }
}

TEST_CASE("dimensionless signals")
{
    const WallLayer wall{0.1, 1.75, 2.2e6};
    const ConvectiveEnvironment env{8.7, 23.2, 293.15};
    BoundarySignals sig;
    sig.times = {0.0, 30.0, 60.0};
    sig.u_in = {env.u0, env.u0, env.u0};
    sig.u_out = {2 * env.u0, env.u0, 0.5 * env.u0};
    sig.q = {0.0, 100.0, 0.0};
    const auto d = dimensionless_signals(sig, env, wall);
    CHECK(d.u_in[0] == doctest::Approx(0.0));
    CHECK(d.u_out[0] == doctest::Approx(1.0));
    CHECK(d.u_out[2] == doctest::Approx(-0.5));
    CHECK(d.q[0] == 0.0);
    CHECK(d.q[1] == doctest::Approx(100.0 * wall.thickness / (wall.conductivity * env.u0)));
    const double t_ref = wall.volumetric_capacity * wall.thickness * wall.thickness /
                         wall.conductivity;
    CHECK(d.times[1] == doctest::Approx(30.0 / t_ref));
}

TEST_CASE("semi_discretize")
{
    DimensionlessProblem p;
    p.bi_in = 0.4971;
    p.bi_out = 1.3314;
    p.t_ref = 1.2571e4;
    p.horizon = 20.0;
    const SpatialGrid grid = uniform_grid(4);
    const std::vector<double> prev(grid.size(), 0.25);

    SUBCASE("coefficient block")
    {
        const auto inst = semi_discretize(p, grid, prev, 1e-3, 0.0, 1.0, 0.0);
        CHECK(inst.a == doctest::Approx(1e-3));
        CHECK(inst.b_out == doctest::Approx(0.0));
        CHECK(inst.b_in == doctest::Approx(0.4971));
        CHECK(inst.source == prev);
    }
    SUBCASE("boundary coefficients are linear in their inputs")
    {
        std::mt19937_64 gen(7);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (int i = 0; i < 50; ++i) {
            const double a1 = dist(gen), a2 = dist(gen), q1 = dist(gen), q2 = dist(gen);
            const double l1 = dist(gen), l2 = dist(gen);
            const auto s1 = semi_discretize(p, grid, prev, 1e-3, a1, l1, q1);
            const auto s2 = semi_discretize(p, grid, prev, 1e-3, a2, l2, q2);
            const auto s12 = semi_discretize(p, grid, prev, 1e-3, a1 + a2, l1 + l2, q1 + q2);
            CHECK(s12.b_out == doctest::Approx(s1.b_out + s2.b_out).epsilon(1e-12));
            CHECK(s12.b_in == doctest::Approx(s1.b_in + s2.b_in).epsilon(1e-12));
        }
    }
    SUBCASE("grid mismatch is a shape error")
    {
        CHECK_THROWS_AS(semi_discretize(p, grid, std::vector<double>(3, 0.0), 1e-3, 0, 0, 0),
                        ShapeError);
    }
    SUBCASE("nonpositive dt is rejected")
    {
        CHECK_THROWS_AS(semi_discretize(p, grid, prev, 0.0, 0, 0, 0), std::invalid_argument);
    }
}

TEST_CASE("redimensionalize")
{
    CHECK(redimensionalize(0.0, 293.15) == doctest::Approx(293.15));
    CHECK(redimensionalize(1.0, 293.15) == doctest::Approx(586.30));

    SUBCASE("round trip with the dimensionless map is the identity")
    {
        const WallLayer wall{0.2, 1.0, 1.0e6};
        const ConvectiveEnvironment env{5.0, 10.0, 300.0};
        BoundarySignals sig;
        sig.times = {0.0};
        sig.u_in = {284.5};
        sig.u_out = {310.25};
        sig.q = {0.0};
        const auto d = dimensionless_signals(sig, env, wall);
        CHECK(redimensionalize(d.u_in[0], env.u0) == doctest::Approx(284.5).epsilon(1e-12));
        CHECK(redimensionalize(d.u_out[0], env.u0) == doctest::Approx(310.25).epsilon(1e-12));
    }
    SUBCASE("constant field round trip")
    {
        const std::vector<double> field(9, 0.125);
        const auto back = redimensionalize(field, 293.15);
        for (double v : back)
            CHECK(v == doctest::Approx(293.15 * 1.125).epsilon(1e-12));
    }
}
