#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "pgdheat/bases.hpp"
#include "pgdheat/errors.hpp"
#include "pgdheat/grid.hpp"

using namespace pgdheat;

namespace {

std::vector<double> random_field(std::size_t n, std::mt19937_64& gen)
{
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> f(n);
    for (double& v : f)
        v = dist(gen);
    return f;
}

} // namespace

TEST_CASE("chebyshev recurrence")
{
    const auto grid = uniform_grid(4); // nodes -1,-0.5,0,0.5,1
    const auto basis = chebyshev_basis(4, grid);
    CHECK(basis.modes[0] == std::vector<double>(5, 1.0));
    CHECK(basis.modes[2][3] == doctest::Approx(-0.5)); // T2(0.5) = 2*0.25-1
    CHECK(basis.modes[3][4] == doctest::Approx(1.0));  // T3(1) = 1
    CHECK_THROWS_AS(chebyshev_basis(0, grid), std::invalid_argument);

    SUBCASE("matches closed forms of degrees 0..3 at random points")
    {
        std::mt19937_64 gen(11);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        SpatialGrid g;
        g.nodes.resize(100);
        for (double& x : g.nodes)
            x = dist(gen);
        std::sort(g.nodes.begin(), g.nodes.end());
        g.nodes.front() = -1.0;
        g.nodes.back() = 1.0;
        const auto b = chebyshev_basis(4, g);
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            const double x = g.nodes[i];
            CHECK(b.modes[1][i] == doctest::Approx(x).epsilon(1e-13));
            CHECK(b.modes[2][i] == doctest::Approx(2 * x * x - 1).epsilon(1e-13));
            CHECK(b.modes[3][i] == doctest::Approx(4 * x * x * x - 3 * x).epsilon(1e-13));
        }
    }
}

TEST_CASE("legendre recurrence")
{
    const auto grid = uniform_grid(4);
    const auto basis = legendre_basis(3, grid);
    CHECK(basis.modes[1] == grid.nodes);               // P1 = x
    CHECK(basis.modes[2][2] == doctest::Approx(-0.5)); // P2(0)
    CHECK(basis.modes[2][4] == doctest::Approx(1.0));  // P2(1)
    CHECK_THROWS_AS(legendre_basis(0, grid), std::invalid_argument);

    SUBCASE("closed forms of degrees 2..3 at random points")
    {
        std::mt19937_64 gen(13);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        SpatialGrid g;
        g.nodes.resize(100);
        for (double& x : g.nodes)
            x = dist(gen);
        std::sort(g.nodes.begin(), g.nodes.end());
        g.nodes.front() = -1.0;
        g.nodes.back() = 1.0;
        const auto b = legendre_basis(4, g);
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            const double x = g.nodes[i];
            CHECK(b.modes[2][i] == doctest::Approx(1.5 * x * x - 0.5).epsilon(1e-13));
            CHECK(b.modes[3][i] == doctest::Approx(2.5 * x * x * x - 1.5 * x).epsilon(1e-13));
        }
    }
}

TEST_CASE("pod basis")
{
    std::mt19937_64 gen(17);
    SUBCASE("rank-1 snapshots: one mode reconstructs every column")
    {
        const std::size_t n = 12;
        const auto shape = random_field(n, gen);
        SnapshotMatrix snaps;
        for (int c = 0; c < 6; ++c) {
            std::vector<double> col(n);
            const double scale = 0.5 + 0.3 * c;
            for (std::size_t i = 0; i < n; ++i)
                col[i] = scale * shape[i];
            snaps.columns.push_back(col);
            snaps.times.push_back(c);
        }
        const auto basis = pod_basis(snaps, 1);
        const Projector proj(basis);
        for (const auto& col : snaps.columns) {
            const auto rec = proj.reconstruct(proj.project(col));
            for (std::size_t i = 0; i < n; ++i)
                CHECK(rec[i] == doctest::Approx(col[i]).epsilon(1e-10));
        }
    }
    SUBCASE("identity columns span the full space")
    {
        const std::size_t n = 5;
        SnapshotMatrix snaps;
        for (std::size_t c = 0; c < n; ++c) {
            std::vector<double> col(n, 0.0);
            col[c] = 1.0;
            snaps.columns.push_back(col);
            snaps.times.push_back(static_cast<double>(c));
        }
        const auto basis = pod_basis(snaps, static_cast<int>(n));
        const Projector proj(basis);
        const auto f = random_field(n, gen);
        const auto rec = proj.reconstruct(proj.project(f));
        for (std::size_t i = 0; i < n; ++i)
            CHECK(rec[i] == doctest::Approx(f[i]).epsilon(1e-10));
    }
    SUBCASE("modes orthonormal, sign convention fixed")
    {
        SnapshotMatrix snaps;
        for (int c = 0; c < 20; ++c) {
            snaps.columns.push_back(random_field(9, gen));
            snaps.times.push_back(c);
        }
        const auto basis = pod_basis(snaps, 4);
        for (int i = 0; i < 4; ++i) {
            double mx = 0.0;
            for (int k = 0; k < 4; ++k) {
                double d = 0.0;
                for (std::size_t r = 0; r < 9; ++r)
                    d += basis.modes[i][r] * basis.modes[k][r];
                CHECK(d == doctest::Approx(i == k ? 1.0 : 0.0).epsilon(1e-10));
            }
            for (double v : basis.modes[i])
                mx = std::max(mx, std::abs(v));
            bool found = false;
            for (double v : basis.modes[i])
                if (v == mx)
                    found = true;
            CHECK(found); // largest-magnitude entry is positive
        }
    }
    SUBCASE("bad arguments")
    {
        SnapshotMatrix empty;
        CHECK_THROWS_AS(pod_basis(empty, 1), std::invalid_argument);
        SnapshotMatrix one;
        one.columns.push_back({1.0, 2.0});
        one.times.push_back(0.0);
        CHECK_THROWS_AS(pod_basis(one, 2), std::invalid_argument);
    }
}

TEST_CASE("projection")
{
    const auto grid = uniform_grid(10);
    const auto basis = chebyshev_basis(4, grid);
    SUBCASE("constant field hits T0 only")
    {
        const std::vector<double> b(grid.size(), 3.25);
        const auto z = project(b, basis);
        CHECK(z[0] == doctest::Approx(3.25).epsilon(1e-12));
        for (std::size_t j = 1; j < z.size(); ++j)
            CHECK(z[j] == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("basis mode projects to a unit vector")
    {
        const auto z = project(basis.modes[2], basis);
        for (std::size_t j = 0; j < z.size(); ++j)
            CHECK(z[j] == doctest::Approx(j == 2 ? 1.0 : 0.0).epsilon(1e-12));
    }
    SUBCASE("x^3 is represented exactly with 4 modes")
    {
        std::vector<double> b(grid.size());
        for (std::size_t i = 0; i < b.size(); ++i)
            b[i] = std::pow(grid.nodes[i], 3);
        const Projector proj(basis);
        const auto rec = proj.reconstruct(proj.project(b));
        for (std::size_t i = 0; i < b.size(); ++i)
            CHECK(rec[i] == doctest::Approx(b[i]).epsilon(1e-12));
    }
    SUBCASE("project-reconstruct is idempotent")
    {
        std::mt19937_64 gen(23);
        const auto f = random_field(grid.size(), gen);
        const Projector proj(basis);
        const auto once = proj.reconstruct(proj.project(f));
        const auto twice = proj.reconstruct(proj.project(once));
        for (std::size_t i = 0; i < f.size(); ++i)
            CHECK(twice[i] == doctest::Approx(once[i]).epsilon(1e-10));
    }
    SUBCASE("reconstruct shape checks")
    {
        CHECK_THROWS_AS(reconstruct(basis, {1.0, 2.0}), ShapeError);
        std::vector<double> zero(4, 0.0);
        const auto f = reconstruct(basis, zero);
        for (double v : f)
            CHECK(v == 0.0);
        const std::vector<double> e1{0.0, 1.0, 0.0, 0.0};
        CHECK(reconstruct(basis, e1) == grid.nodes); // T1 = x
    }
    SUBCASE("rank-deficient basis is a singular-system error")
    {
        ApproximationBasis bad = basis;
        bad.modes[3] = bad.modes[2];
        CHECK_THROWS_AS(Projector{bad}, NumericalError);
    }
}

TEST_CASE("coefficient ranges, normalization, quantization")
{
    const auto grid = uniform_grid(8);
    const auto basis = chebyshev_basis(3, grid);
    std::mt19937_64 gen(29);

    SUBCASE("identical snapshots give degenerate ranges")
    {
        SnapshotMatrix snaps;
        const auto f = random_field(grid.size(), gen);
        snaps.columns = {f, f};
        snaps.times = {0.0, 1.0};
        const auto r = coefficient_ranges(snaps, basis);
        for (std::size_t j = 0; j < r.size(); ++j)
            CHECK(r.min[j] == doctest::Approx(r.max[j]));
    }
    SUBCASE("b and -b give symmetric ranges")
    {
        SnapshotMatrix snaps;
        const auto f = random_field(grid.size(), gen);
        auto g = f;
        for (double& v : g)
            v = -v;
        snaps.columns = {f, g};
        snaps.times = {0.0, 1.0};
        const auto r = coefficient_ranges(snaps, basis);
        for (std::size_t j = 0; j < r.size(); ++j)
            CHECK(r.min[j] == doctest::Approx(-r.max[j]).epsilon(1e-12));
    }
    SUBCASE("single snapshot is rejected")
    {
        SnapshotMatrix snaps;
        snaps.columns = {random_field(grid.size(), gen)};
        snaps.times = {0.0};
        CHECK_THROWS_AS(coefficient_ranges(snaps, basis), std::invalid_argument);
    }

    CoefficientRanges ranges;
    ranges.min = {-1.0, 0.5, 2.0};
    ranges.max = {1.0, 0.5, 6.0};

    SUBCASE("normalize endpoints and midpoint")
    {
        const auto zb = normalize({-1.0, 0.5, 4.0}, ranges);
        CHECK(zb[0] == doctest::Approx(0.0));
        CHECK(zb[1] == doctest::Approx(0.5)); // degenerate range
        CHECK(zb[2] == doctest::Approx(0.5));
        const auto zb2 = normalize({1.0, 0.5, 6.0}, ranges);
        CHECK(zb2[0] == doctest::Approx(1.0));
        CHECK(zb2[2] == doctest::Approx(1.0));
    }
    SUBCASE("out-of-range input clamps and reports")
    {
        std::uint64_t clamps = 0;
        const auto zb = normalize({-2.0, 0.5, 7.0}, ranges, &clamps);
        CHECK(zb[0] == 0.0);
        CHECK(zb[2] == 1.0);
        CHECK(clamps == 2);
    }
    SUBCASE("normalize-denormalize round trip")
    {
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        for (int k = 0; k < 200; ++k) {
            const std::vector<double> z{-1.0 + 2.0 * dist(gen), 0.5, 2.0 + 4.0 * dist(gen)};
            const auto back = denormalize(normalize(z, ranges), ranges);
            for (std::size_t j = 0; j < z.size(); ++j)
                CHECK(back[j] == doctest::Approx(z[j]).epsilon(1e-12));
        }
    }
    SUBCASE("quantize")
    {
        CHECK(quantize({0.123}, 1e-2)[0] == doctest::Approx(0.12));
        CHECK(quantize({0.123456}, 1e-6)[0] == doctest::Approx(0.123456));
        CHECK_THROWS_AS(quantize({0.5}, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(quantize({0.5}, 1.5), std::invalid_argument);
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        for (int k = 0; k < 1000; ++k) {
            const double z = dist(gen);
            const double q = quantize({z}, 1e-3)[0];
            CHECK(std::abs(q - z) <= 5e-4 + 1e-15);
        }
    }
}

TEST_CASE("basis file round trip")
{
    const auto dir = std::filesystem::temp_directory_path() / "pgdheat_test_bases";
    std::filesystem::create_directories(dir);
    const auto grid = chebyshev_points(6);
    auto basis = legendre_basis(4, grid);
    SnapshotMatrix snaps;
    std::mt19937_64 gen(31);
    for (int c = 0; c < 5; ++c) {
        snaps.columns.push_back(random_field(grid.size(), gen));
        snaps.times.push_back(c);
    }
    basis.ranges = coefficient_ranges(snaps, basis);

    const auto path = dir / "basis.json";
    save_basis(basis, path);
    const auto loaded = load_basis(path);
    CHECK(loaded.kind == basis.kind);
    CHECK(loaded.grid.kind == basis.grid.kind);
    CHECK(loaded.grid.nodes == basis.grid.nodes);
    CHECK(loaded.modes == basis.modes);
    CHECK(loaded.ranges.min == basis.ranges.min);
    CHECK(loaded.ranges.max == basis.ranges.max);

    CHECK_THROWS_AS(load_basis(dir / "missing.json"), IoError);
    std::filesystem::remove_all(dir);
}
