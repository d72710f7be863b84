#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "pgdheat/bases.hpp"
#include "pgdheat/fdm.hpp"
#include "pgdheat/physics.hpp"

namespace pgdheat {

/// Uniform node set over one PGD parameter coordinate.
struct ParameterDomain {
    double lo = 0.0;
    double delta = 1.0;
    int count = 2; // nodes

    double hi() const { return lo + (count - 1) * delta; }
    double node(int i) const { return lo + i * delta; }

    /// Smallest delta-aligned domain covering [lo, hi]; bounds snapped outward.
    static ParameterDomain spanning(double lo, double hi, double delta);

    /// [0, 1] with the spacing snapped so the endpoints are nodes.
    static ParameterDomain unit(double delta);
};

struct StoppingCriteria {
    double eps_fixed_point = 1e-6;  // alternating-directions fixed point
    double eps_enrichment = 1e-8;   // new-mode amplitude vs mode 1
    int max_fixed_point_iters = 100;
    int max_modes = 60;
};

/// One separated functional product. Parameter factors are unit-norm; the
/// amplitude lives in the spatial factor.
struct PgdMode {
    std::vector<double> space;              // X_m on the spatial grid
    std::vector<double> bc_in;              // E_m on the b_in nodes
    std::vector<double> bc_out;             // F_m on the b_out nodes
    std::vector<std::vector<double>> coeff; // G_m^j on the zbar_j nodes
};

struct PgdBuildInfo {
    StoppingCriteria criteria;
    std::uint64_t seed = 0;
    std::vector<int> fixed_point_iters;          // per accepted mode
    std::vector<std::uint8_t> fixed_point_converged;
    std::vector<double> mode_amplitudes;         // |X_m| per accepted mode
    double build_seconds = 0.0; // not serialized
};

/// The offline product: tabulated factors over all parameter grids plus the
/// metadata needed to rebuild or reuse them. Immutable after build.
struct PgdModel {
    double a = 0.0;
    double bi_in = 0.0;
    double bi_out = 0.0;
    BasisKind basis_kind = BasisKind::Chebyshev;
    SpatialGrid grid;
    ParameterDomain dom_b_in;
    ParameterDomain dom_b_out;
    std::vector<ParameterDomain> dom_zbar; // one per basis mode
    CoefficientRanges ranges;              // zeta <-> zbar map used online
    std::vector<PgdMode> modes;
    PgdBuildInfo info;

    int mode_count() const { return static_cast<int>(modes.size()); }
    int basis_mode_count() const { return static_cast<int>(dom_zbar.size()); }
};

/// Offline phase: greedy rank-one enrichment on the Galerkin weak form of
/// y - a y'' = sum_j Psi_j zeta_j(zbar_j) with Robin boundary parameters.
/// Factor updates alternate until the spatial factor settles (eps_fixed_point);
/// enrichment stops at eps_enrichment or max_modes. Deterministic given seed.
/// The basis must carry coefficient ranges.
PgdModel build_pgd(double a,
                   double bi_in,
                   double bi_out,
                   const ApproximationBasis& basis,
                   const ParameterDomain& dom_b_in,
                   const ParameterDomain& dom_b_out,
                   double dzeta,
                   const StoppingCriteria& criteria,
                   std::uint64_t seed);

enum class EvalMode {
    Linear,      // piecewise-linear interpolation on each parameter grid
    NearestNode, // raw table lookup
};

/// Online lookup: sum over modes of X_m E_m(b_in) F_m(b_out) prod_j G_m^j(zbar_j).
/// Out-of-domain parameters are clamped; *clamp_events counts them when given.
/// mode_truncation < 0 uses all modes.
std::vector<double> evaluate(const PgdModel& model,
                             double b_in,
                             double b_out,
                             std::span<const double> zbar,
                             EvalMode mode = EvalMode::Linear,
                             int mode_truncation = -1,
                             std::uint64_t* clamp_events = nullptr);

struct SimulateResult {
    FieldSeries series;
    std::uint64_t zeta_clamp_events = 0;   // projections outside the training ranges
    std::uint64_t domain_clamp_events = 0; // abacus reads outside the parameter domains
};

/// Online phase time march: at each step the current profile is projected on
/// the basis, normalized, quantized to the zbar grid, and the abacus is read
/// with the step's boundary data.
SimulateResult simulate(const PgdModel& model,
                        const ApproximationBasis& basis,
                        const DimensionlessProblem& problem,
                        const BoundarySignals& signals,
                        double dt,
                        int steps,
                        std::vector<double> initial,
                        EvalMode mode = EvalMode::Linear);

/// Model file: JSON envelope, factor tables base64-encoded (bit-exact round
/// trip), mandatory format-version field.
void save_pgd(const PgdModel& model, const std::filesystem::path& path);
PgdModel load_pgd(const std::filesystem::path& path);

} // namespace pgdheat
