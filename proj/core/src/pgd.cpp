#include "pgdheat/pgd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include "pgdheat/errors.hpp"
#include "step_operator.hpp"

namespace pgdheat {

ParameterDomain ParameterDomain::spanning(double lo, double hi, double delta)
{
    if (!(delta > 0.0))
        throw std::invalid_argument("ParameterDomain: delta must be positive");
    if (!(lo < hi))
        throw std::invalid_argument("ParameterDomain: lo must be below hi");
    ParameterDomain d;
    d.delta = delta;
    d.lo = std::floor(lo / delta + 1e-9) * delta;
    const double span = hi - d.lo;
    d.count = static_cast<int>(std::ceil(span / delta - 1e-9)) + 1;
    if (d.count < 2)
        d.count = 2;
    return d;
}

ParameterDomain ParameterDomain::unit(double delta)
{
    if (!(delta > 0.0 && delta <= 1.0))
        throw std::invalid_argument("ParameterDomain: delta must be in (0, 1]");
    ParameterDomain d;
    d.lo = 0.0;
    d.count = static_cast<int>(std::llround(1.0 / delta)) + 1;
    if (d.count < 2)
        d.count = 2;
    d.delta = 1.0 / (d.count - 1); // snapped so 1.0 is a node
    return d;
}

namespace {

// Deterministic uniform [0,1) independent of distribution implementations.
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed) : gen_(seed) {}
    double next() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    void fill(std::vector<double>& v)
    {
        for (double& x : v)
            x = next();
    }

private:
    std::mt19937_64 gen_;
};

std::vector<double> domain_nodes(const ParameterDomain& d)
{
    std::vector<double> nodes(static_cast<std::size_t>(d.count));
    for (int i = 0; i < d.count; ++i)
        nodes[static_cast<std::size_t>(i)] = d.node(i);
    return nodes;
}

std::vector<double> trapezoid_weights(const ParameterDomain& d)
{
    std::vector<double> w(static_cast<std::size_t>(d.count), d.delta);
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += a[i] * b[i];
    return acc;
}

// Weighted inner product <f, p>_w; empty p stands for the all-ones factor.
double wdot(const std::vector<double>& w,
            const std::vector<double>& f,
            const std::vector<double>& p)
{
    double acc = 0.0;
    if (p.empty()) {
        for (std::size_t i = 0; i < f.size(); ++i)
            acc += w[i] * f[i];
    } else {
        for (std::size_t i = 0; i < f.size(); ++i)
            acc += w[i] * f[i] * p[i];
    }
    return acc;
}

double norm2(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

// One rank-one right-hand-side contribution; empty parameter vectors are ones.
struct RhsTerm {
    std::vector<double> xvec;
    std::vector<double> pin;
    std::vector<double> pout;
    std::vector<std::vector<double>> pz; // per zbar coordinate
};

} // namespace

PgdModel build_pgd(double a,
                   double bi_in,
                   double bi_out,
                   const ApproximationBasis& basis,
                   const ParameterDomain& dom_b_in,
                   const ParameterDomain& dom_b_out,
                   double dzeta,
                   const StoppingCriteria& criteria,
                   std::uint64_t seed)
{
    const auto t_start = std::chrono::steady_clock::now();
    if (a <= 0.0)
        throw std::invalid_argument("build_pgd: coefficient a must be positive");
    if (criteria.max_fixed_point_iters < 1 || criteria.max_modes < 1)
        throw std::invalid_argument("build_pgd: iteration caps must be >= 1");
    if (!(criteria.eps_fixed_point > 0.0 && criteria.eps_fixed_point < 1.0) ||
        !(criteria.eps_enrichment > 0.0 && criteria.eps_enrichment < 1.0))
        throw std::invalid_argument("build_pgd: tolerances must be in (0, 1)");
    const int n_basis = basis.mode_count();
    if (n_basis < 1)
        throw std::invalid_argument("build_pgd: basis has no modes");
    if (basis.ranges.size() != static_cast<std::size_t>(n_basis))
        throw std::invalid_argument("build_pgd: basis carries no coefficient ranges");

    const std::size_t nx = basis.grid.size();
    const auto op = detail::assemble_step_operator(basis.grid, a, false, false, bi_out, bi_in);

    PgdModel model;
    model.a = a;
    model.bi_in = bi_in;
    model.bi_out = bi_out;
    model.basis_kind = basis.kind;
    model.grid = basis.grid;
    model.dom_b_in = dom_b_in;
    model.dom_b_out = dom_b_out;
    model.dom_zbar.assign(static_cast<std::size_t>(n_basis), ParameterDomain::unit(dzeta));
    model.ranges = basis.ranges;
    model.info.criteria = criteria;
    model.info.seed = seed;

    const auto gin = domain_nodes(dom_b_in);
    const auto gout = domain_nodes(dom_b_out);
    const auto gz = domain_nodes(model.dom_zbar.front());
    const auto win = trapezoid_weights(dom_b_in);
    const auto wout = trapezoid_weights(dom_b_out);
    const auto wz = trapezoid_weights(model.dom_zbar.front());

    // Rank-one decomposition of the weak-form right-hand side:
    // mass-weighted source modes with the affine zeta(zbar) map on their own
    // coordinate, plus the two boundary-data terms.
    std::vector<RhsTerm> terms;
    terms.reserve(static_cast<std::size_t>(n_basis) + 2);
    for (int j = 0; j < n_basis; ++j) {
        RhsTerm t;
        t.xvec.resize(nx);
        for (std::size_t i = 0; i < nx; ++i)
            t.xvec[i] = op.mass[i] * basis.modes[static_cast<std::size_t>(j)][i];
        t.pz.assign(static_cast<std::size_t>(n_basis), {});
        const double lo = basis.ranges.min[static_cast<std::size_t>(j)];
        const double width = basis.ranges.max[static_cast<std::size_t>(j)] - lo;
        auto& map = t.pz[static_cast<std::size_t>(j)];
        map.resize(gz.size());
        for (std::size_t i = 0; i < gz.size(); ++i)
            map[i] = lo + width * gz[i];
        terms.push_back(std::move(t));
    }
    {
        RhsTerm t; // right-face Robin data enters as +a b_in at the last row
        t.xvec.assign(nx, 0.0);
        t.xvec[nx - 1] = a;
        t.pin = gin;
        t.pz.assign(static_cast<std::size_t>(n_basis), {});
        terms.push_back(std::move(t));
    }
    {
        RhsTerm t; // left-face Robin data enters as -a b_out at the first row
        t.xvec.assign(nx, 0.0);
        t.xvec[0] = -a;
        t.pout = gout;
        t.pz.assign(static_cast<std::size_t>(n_basis), {});
        terms.push_back(std::move(t));
    }

    UniformSource rng(seed);
    std::vector<std::vector<double>> applied_prev; // A X_i per accepted mode

    const std::size_t n_terms = terms.size();
    std::vector<double> term_px(n_terms), term_pi(n_terms), term_po(n_terms);
    std::vector<std::vector<double>> term_pz(n_terms,
                                             std::vector<double>(static_cast<std::size_t>(n_basis)));

    double first_amplitude = -1.0;
    for (int m = 0; m < criteria.max_modes; ++m) {
        std::vector<double> r(nx), s(gin.size()), t(gout.size());
        std::vector<std::vector<double>> w(static_cast<std::size_t>(n_basis),
                                           std::vector<double>(gz.size()));
        rng.fill(r);
        rng.fill(s);
        rng.fill(t);
        for (auto& wj : w)
            rng.fill(wj);

        const std::size_t n_prev = model.modes.size();
        std::vector<double> prev_px(n_prev), prev_pi(n_prev), prev_po(n_prev);
        std::vector<std::vector<double>> prev_pz(n_prev,
                                                 std::vector<double>(static_cast<std::size_t>(n_basis)));

        auto refresh_zeta_dir = [&](int j) {
            for (std::size_t k = 0; k < n_terms; ++k)
                term_pz[k][static_cast<std::size_t>(j)] =
                    wdot(wz, w[static_cast<std::size_t>(j)], terms[k].pz[static_cast<std::size_t>(j)]);
            for (std::size_t i = 0; i < n_prev; ++i)
                prev_pz[i][static_cast<std::size_t>(j)] =
                    wdot(wz, w[static_cast<std::size_t>(j)],
                         model.modes[i].coeff[static_cast<std::size_t>(j)]);
        };
        auto refresh_in_dir = [&]() {
            for (std::size_t k = 0; k < n_terms; ++k)
                term_pi[k] = wdot(win, s, terms[k].pin);
            for (std::size_t i = 0; i < n_prev; ++i)
                prev_pi[i] = wdot(win, s, model.modes[i].bc_in);
        };
        auto refresh_out_dir = [&]() {
            for (std::size_t k = 0; k < n_terms; ++k)
                term_po[k] = wdot(wout, t, terms[k].pout);
            for (std::size_t i = 0; i < n_prev; ++i)
                prev_po[i] = wdot(wout, t, model.modes[i].bc_out);
        };
        refresh_in_dir();
        refresh_out_dir();
        for (int j = 0; j < n_basis; ++j)
            refresh_zeta_dir(j);

        int iters = 0;
        bool converged = false;
        bool dead_mode = false;
        std::vector<double> r_applied;
        for (int it = 0; it < criteria.max_fixed_point_iters; ++it) {
            ++iters;
            const std::vector<double> r_before = r;

            // Spatial factor: tridiagonal Galerkin solve with the parameter
            // directions frozen.
            {
                const double cs = wdot(win, s, s);
                const double ct = wdot(wout, t, t);
                double cw = 1.0;
                for (int j = 0; j < n_basis; ++j)
                    cw *= wdot(wz, w[static_cast<std::size_t>(j)], w[static_cast<std::size_t>(j)]);
                const double cpar = cs * ct * cw;
                if (cpar == 0.0) {
                    dead_mode = true;
                    break;
                }
                std::vector<double> rhs(nx, 0.0);
                for (std::size_t k = 0; k < n_terms; ++k) {
                    double g = term_pi[k] * term_po[k];
                    for (int j = 0; j < n_basis; ++j)
                        g *= term_pz[k][static_cast<std::size_t>(j)];
                    for (std::size_t i = 0; i < nx; ++i)
                        rhs[i] += g * terms[k].xvec[i];
                }
                for (std::size_t p = 0; p < n_prev; ++p) {
                    double g = prev_pi[p] * prev_po[p];
                    for (int j = 0; j < n_basis; ++j)
                        g *= prev_pz[p][static_cast<std::size_t>(j)];
                    for (std::size_t i = 0; i < nx; ++i)
                        rhs[i] -= g * applied_prev[p][i];
                }
                for (double& v : rhs)
                    v /= cpar;
                op.solve(rhs);
                r = std::move(rhs);
            }
            r_applied = op.apply(r);
            double cx = dot(r, r_applied);
            if (cx <= 0.0 || !std::isfinite(cx)) {
                dead_mode = true;
                break;
            }
            std::vector<double> term_rx(n_terms), prev_rx(n_prev);
            auto refresh_x = [&]() {
                for (std::size_t k = 0; k < n_terms; ++k)
                    term_rx[k] = dot(r, terms[k].xvec);
                for (std::size_t i = 0; i < n_prev; ++i)
                    prev_rx[i] = dot(r, applied_prev[i]);
            };
            refresh_x();

            // One closed-form pointwise update per parameter direction; the
            // trapezoid weight cancels between the two sides.
            auto direction_update = [&](std::vector<double>& factor,
                                        double denom_other,
                                        auto term_p, auto prev_p) {
                for (std::size_t b = 0; b < factor.size(); ++b) {
                    double acc = 0.0;
                    for (std::size_t k = 0; k < n_terms; ++k)
                        acc += term_p(k, b);
                    for (std::size_t p = 0; p < n_prev; ++p)
                        acc -= prev_p(p, b);
                    factor[b] = acc / denom_other;
                }
                const double nrm = norm2(factor);
                if (nrm > 0.0) {
                    for (double& v : factor)
                        v /= nrm;
                    for (double& v : r)
                        v *= nrm;
                    for (double& v : r_applied)
                        v *= nrm;
                    for (std::size_t k = 0; k < n_terms; ++k)
                        term_rx[k] *= nrm;
                    for (std::size_t p = 0; p < n_prev; ++p)
                        prev_rx[p] *= nrm;
                    cx *= nrm * nrm;
                }
            };

            // b_in direction
            {
                const double ct = wdot(wout, t, t);
                double cw = 1.0;
                for (int j = 0; j < n_basis; ++j)
                    cw *= wdot(wz, w[static_cast<std::size_t>(j)], w[static_cast<std::size_t>(j)]);
                const double den = cx * ct * cw;
                if (den == 0.0) {
                    dead_mode = true;
                    break;
                }
                direction_update(
                    s, den,
                    [&](std::size_t k, std::size_t b) {
                        double g = term_rx[k] * term_po[k];
                        for (int j = 0; j < n_basis; ++j)
                            g *= term_pz[k][static_cast<std::size_t>(j)];
                        return g * (terms[k].pin.empty() ? 1.0 : terms[k].pin[b]);
                    },
                    [&](std::size_t p, std::size_t b) {
                        double g = prev_rx[p] * prev_po[p];
                        for (int j = 0; j < n_basis; ++j)
                            g *= prev_pz[p][static_cast<std::size_t>(j)];
                        return g * model.modes[p].bc_in[b];
                    });
                refresh_in_dir();
            }

            // b_out direction
            {
                const double cs = wdot(win, s, s);
                double cw = 1.0;
                for (int j = 0; j < n_basis; ++j)
                    cw *= wdot(wz, w[static_cast<std::size_t>(j)], w[static_cast<std::size_t>(j)]);
                const double den = cx * cs * cw;
                if (den == 0.0) {
                    dead_mode = true;
                    break;
                }
                direction_update(
                    t, den,
                    [&](std::size_t k, std::size_t b) {
                        double g = term_rx[k] * term_pi[k];
                        for (int j = 0; j < n_basis; ++j)
                            g *= term_pz[k][static_cast<std::size_t>(j)];
                        return g * (terms[k].pout.empty() ? 1.0 : terms[k].pout[b]);
                    },
                    [&](std::size_t p, std::size_t b) {
                        double g = prev_rx[p] * prev_pi[p];
                        for (int j = 0; j < n_basis; ++j)
                            g *= prev_pz[p][static_cast<std::size_t>(j)];
                        return g * model.modes[p].bc_out[b];
                    });
                refresh_out_dir();
            }

            // zbar directions
            for (int jj = 0; jj < n_basis && !dead_mode; ++jj) {
                const double cs = wdot(win, s, s);
                const double ct = wdot(wout, t, t);
                double cw = 1.0;
                for (int j = 0; j < n_basis; ++j)
                    if (j != jj)
                        cw *= wdot(wz, w[static_cast<std::size_t>(j)], w[static_cast<std::size_t>(j)]);
                const double den = cx * cs * ct * cw;
                if (den == 0.0) {
                    dead_mode = true;
                    break;
                }
                direction_update(
                    w[static_cast<std::size_t>(jj)], den,
                    [&](std::size_t k, std::size_t b) {
                        double g = term_rx[k] * term_pi[k] * term_po[k];
                        for (int j = 0; j < n_basis; ++j)
                            if (j != jj)
                                g *= term_pz[k][static_cast<std::size_t>(j)];
                        const auto& p = terms[k].pz[static_cast<std::size_t>(jj)];
                        return g * (p.empty() ? 1.0 : p[b]);
                    },
                    [&](std::size_t p, std::size_t b) {
                        double g = prev_rx[p] * prev_pi[p] * prev_po[p];
                        for (int j = 0; j < n_basis; ++j)
                            if (j != jj)
                                g *= prev_pz[p][static_cast<std::size_t>(j)];
                        return g * model.modes[p].coeff[static_cast<std::size_t>(jj)][b];
                    });
                refresh_zeta_dir(jj);
            }
            if (dead_mode)
                break;

            const double base = norm2(r_before);
            double diff = 0.0;
            for (std::size_t i = 0; i < nx; ++i) {
                const double d = r[i] - r_before[i];
                diff += d * d;
            }
            const double change = base > 0.0 ? std::sqrt(diff) / base : 1.0;
            if (change < criteria.eps_fixed_point) {
                converged = true;
                break;
            }
        }

        const double amplitude = dead_mode ? 0.0 : norm2(r);
        if (!std::isfinite(amplitude))
            throw NumericalError("build_pgd: non-finite mode amplitude");
        if (first_amplitude < 0.0) {
            if (amplitude == 0.0)
                break; // homogeneous problem: nothing to enrich
            first_amplitude = amplitude;
        } else if (amplitude == 0.0 || amplitude / first_amplitude < criteria.eps_enrichment) {
            break;
        }

        PgdMode mode;
        mode.space = std::move(r);
        mode.bc_in = std::move(s);
        mode.bc_out = std::move(t);
        mode.coeff = std::move(w);
        model.modes.push_back(std::move(mode));
        applied_prev.push_back(op.apply(model.modes.back().space));
        model.info.fixed_point_iters.push_back(iters);
        model.info.fixed_point_converged.push_back(converged ? 1 : 0);
        model.info.mode_amplitudes.push_back(amplitude);
    }

    model.info.build_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return model;
}

namespace {

struct Located {
    int index;
    double weight; // value = v[index] (1-weight) + v[index+1] weight
};

Located locate(const ParameterDomain& d, double p, EvalMode mode, std::uint64_t* clamp_events)
{
    double pos = (p - d.lo) / d.delta;
    if (pos < 0.0) {
        if (clamp_events)
            ++*clamp_events;
        pos = 0.0;
    } else if (pos > d.count - 1) {
        if (clamp_events)
            ++*clamp_events;
        pos = d.count - 1;
    }
    if (mode == EvalMode::NearestNode)
        pos = std::round(pos);
    int i = static_cast<int>(pos);
    if (i > d.count - 2)
        i = d.count - 2;
    return {i, pos - i};
}

double pick(const std::vector<double>& v, const Located& loc)
{
    return v[static_cast<std::size_t>(loc.index)] * (1.0 - loc.weight) +
           v[static_cast<std::size_t>(loc.index) + 1] * loc.weight;
}

} // namespace

std::vector<double> evaluate(const PgdModel& model,
                             double b_in,
                             double b_out,
                             std::span<const double> zbar,
                             EvalMode mode,
                             int mode_truncation,
                             std::uint64_t* clamp_events)
{
    const int n_basis = model.basis_mode_count();
    if (static_cast<int>(zbar.size()) != n_basis)
        throw ShapeError("evaluate: zbar length does not match the model's basis mode count");

    const Located li = locate(model.dom_b_in, b_in, mode, clamp_events);
    const Located lo = locate(model.dom_b_out, b_out, mode, clamp_events);
    std::vector<Located> lz(static_cast<std::size_t>(n_basis));
    for (int j = 0; j < n_basis; ++j)
        lz[static_cast<std::size_t>(j)] =
            locate(model.dom_zbar[static_cast<std::size_t>(j)], zbar[static_cast<std::size_t>(j)],
                   mode, clamp_events);

    const int m_use = mode_truncation < 0
                          ? model.mode_count()
                          : std::min(mode_truncation, model.mode_count());
    std::vector<double> out(model.grid.size(), 0.0);
    for (int m = 0; m < m_use; ++m) {
        const auto& md = model.modes[static_cast<std::size_t>(m)];
        double g = pick(md.bc_in, li) * pick(md.bc_out, lo);
        for (int j = 0; j < n_basis; ++j)
            g *= pick(md.coeff[static_cast<std::size_t>(j)], lz[static_cast<std::size_t>(j)]);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += g * md.space[i];
    }
    return out;
}

SimulateResult simulate(const PgdModel& model,
                        const ApproximationBasis& basis,
                        const DimensionlessProblem& problem,
                        const BoundarySignals& signals,
                        double dt,
                        int steps,
                        std::vector<double> initial,
                        EvalMode mode)
{
    if (dt <= 0.0)
        throw std::invalid_argument("simulate: dt must be positive");
    if (steps < 0)
        throw std::invalid_argument("simulate: steps must be >= 0");
    if (basis.mode_count() != model.basis_mode_count())
        throw ShapeError("simulate: basis mode count does not match the model");
    if (basis.grid.size() != model.grid.size())
        throw ShapeError("simulate: basis grid does not match the model grid");
    if (initial.size() != model.grid.size())
        throw ShapeError("simulate: initial field length does not match grid");
    const std::size_t need = static_cast<std::size_t>(steps);
    if (signals.u_out.size() < need || signals.u_in.size() < need || signals.q.size() < need)
        throw ShapeError("simulate: signals shorter than the time grid");

    const Projector projector(basis);
    const double dzeta = model.dom_zbar.empty() ? 1.0 : model.dom_zbar.front().delta;

    SimulateResult result;
    result.series.grid = model.grid;
    result.series.times.reserve(need + 1);
    result.series.profiles.reserve(need + 1);
    result.series.times.push_back(0.0);
    result.series.profiles.push_back(initial);

    std::vector<double> u = std::move(initial);
    for (int n = 0; n < steps; ++n) {
        const auto tn = static_cast<std::size_t>(n);
        const auto zeta = projector.project(u);
        auto zbar = normalize(zeta, model.ranges, &result.zeta_clamp_events);
        zbar = quantize(std::move(zbar), dzeta);
        const double b_out = -problem.bi_out * signals.u_out[tn] - signals.q[tn];
        const double b_in = problem.bi_in * signals.u_in[tn];
        u = evaluate(model, b_in, b_out, zbar, mode, -1, &result.domain_clamp_events);
        result.series.times.push_back((n + 1) * dt);
        result.series.profiles.push_back(u);
    }
    return result;
}

} // namespace pgdheat
