#include "flowcomm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace flowcomm {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/** Model-dependent per-component structure shared by all runs. */
struct FlowStructure {
    std::vector<std::vector<std::uint32_t>> components;
    std::vector<double> shift;        // operator diagonal per node
    std::vector<double> perron;       // per-component unit Perron entries (nonconservative)
    std::vector<double> comp_lambda;  // lambda_max(W) per component (nonconservative)
    ModelKind model = ModelKind::conservative;
    AlphaMode alpha_mode = AlphaMode::per_component;
};

FlowStructure analyze_flow(const Graph& g, ModelKind model, AlphaMode mode) {
    FlowStructure flow;
    flow.model = model;
    flow.alpha_mode = mode;
    flow.components = connected_components(g);
    if (model == ModelKind::conservative) {
        flow.shift = g.degrees();
        return flow;
    }
    flow.perron.assign(g.num_nodes(), 0.0);
    flow.comp_lambda.reserve(flow.components.size());
    for (const auto& comp : flow.components) {
        auto sub = g.induced(comp);
        auto pair = largest_adjacency_eigenpair(sub.graph);
        flow.comp_lambda.push_back(pair.lambda_max);
        for (std::size_t i = 0; i < comp.size(); ++i)
            flow.perron[comp[i]] = pair.vector[i];
    }
    flow.shift.assign(g.num_nodes(), 0.0);
    if (mode == AlphaMode::per_component) {
        for (std::size_t c = 0; c < flow.components.size(); ++c)
            for (auto i : flow.components[c])
                flow.shift[i] = flow.comp_lambda[c];
    } else {
        const double alpha =
            *std::max_element(flow.comp_lambda.begin(), flow.comp_lambda.end());
        flow.shift.assign(g.num_nodes(), alpha);
    }
    return flow;
}

/** Steady state given per-component alpha values (replicator). Components
 *  with alpha above lambda_max decay to zero; alpha below lambda_max has no
 *  steady state. */
SteadyState replicator_steady(const FlowStructure& flow, std::span<const double> theta0,
                              std::span<const double> alpha_per_comp) {
    SteadyState out;
    out.kind = SteadyState::Kind::centrality_proportional;
    out.opinions.assign(theta0.size(), 0.0);
    for (std::size_t c = 0; c < flow.components.size(); ++c) {
        const double alpha = alpha_per_comp[c];
        const double lam = flow.comp_lambda[c];
        if (alpha > lam + kAlphaTol)
            continue; // decaying component, steady value zero
        if (alpha < lam - kAlphaTol) {
            std::ostringstream msg;
            msg << "steady_state: alpha=" << alpha << " is below lambda_max=" << lam
                << " of a component, so opinions diverge and no steady state exists"
                << " (see alpha_regime)";
            throw Error(msg.str());
        }
        double proj = 0.0;
        for (auto i : flow.components[c])
            proj += flow.perron[i] * theta0[i];
        for (auto i : flow.components[c])
            out.opinions[i] = proj * flow.perron[i];
    }
    return out;
}

SteadyState steady_from_flow(const FlowStructure& flow, std::span<const double> theta0) {
    if (flow.model == ModelKind::conservative) {
        SteadyState out;
        out.kind = SteadyState::Kind::consensus;
        out.opinions.assign(theta0.size(), 0.0);
        for (const auto& comp : flow.components) {
            double mean = 0.0;
            for (auto i : comp)
                mean += theta0[i];
            mean /= static_cast<double>(comp.size());
            for (auto i : comp)
                out.opinions[i] = mean;
        }
        return out;
    }
    std::vector<double> alpha(flow.components.size());
    for (std::size_t c = 0; c < flow.components.size(); ++c)
        alpha[c] = flow.shift[flow.components[c].front()];
    return replicator_steady(flow, theta0, alpha);
}

void check_theta_size(std::span<const double> theta0, const Graph& g) {
    if (theta0.size() != g.num_nodes())
        throw Error("opinion vector length does not match node count");
}

} // namespace

std::size_t TrajectoryBundle::snapshot_index(std::size_t step) const {
    auto it = std::find(snapshot_steps.begin(), snapshot_steps.end(), step);
    if (it == snapshot_steps.end())
        throw Error("no snapshot recorded at step " + std::to_string(step));
    return static_cast<std::size_t>(it - snapshot_steps.begin());
}

std::vector<double> init_opinions(std::size_t n, SplitMix64& rng) {
    if (n == 0)
        throw Error("init_opinions: need at least one node");
    std::vector<double> theta(n);
    for (auto& x : theta)
        x = rng.uniform(-std::numbers::pi, std::numbers::pi);
    return theta;
}

OpinionState step_euler(OperatorKind kind, const Graph& g, const OpinionState& s,
                        double h) {
    check_theta_size(s.opinions, g);
    ShiftedAdjacencyOperator op(g, kind);
    OpinionState next;
    next.opinions.resize(s.opinions.size());
    op.apply(s.opinions, next.opinions);
    for (std::size_t i = 0; i < next.opinions.size(); ++i) {
        next.opinions[i] = s.opinions[i] - h * next.opinions[i];
        if (!std::isfinite(next.opinions[i]))
            throw Error("step_euler: non-finite opinion value (instability)");
    }
    next.time = s.time + h;
    return next;
}

namespace {

TrajectoryBundle simulate_impl(const SimulationConfig& cfg, const Graph& g,
                               std::span<const std::vector<double>> initial) {
    if (g.num_nodes() == 0)
        throw Error("simulate: graph has no nodes");
    if (cfg.num_runs < 1)
        throw Error("simulate: num_runs must be >= 1");
    if (!initial.empty()) {
        if (initial.size() != cfg.num_runs)
            throw Error("simulate: need one initial opinion vector per run");
        for (const auto& theta0 : initial)
            check_theta_size(theta0, g);
    }

    auto flow = analyze_flow(g, cfg.model, cfg.alpha_mode);
    ShiftedAdjacencyOperator op(g, flow.shift);
    const double lambda_op = largest_operator_eigenvalue(op);

    double h = cfg.step_size;
    if (h == 0.0)
        h = lambda_op > 0.0 ? 1.0 / (2.0 * lambda_op) : 1.0;
    if (!(h > 0.0))
        throw Error("simulate: step size must be positive");
    if (lambda_op > 0.0 && h >= 2.0 / lambda_op) {
        std::ostringstream msg;
        msg << "simulate: step size " << h << " violates the stability bound "
            << 2.0 / lambda_op;
        throw Error(msg.str());
    }

    TrajectoryBundle bundle;
    bundle.config = cfg;
    bundle.config.step_size = h;
    bundle.snapshot_steps = cfg.snapshot_steps;
    std::sort(bundle.snapshot_steps.begin(), bundle.snapshot_steps.end());
    bundle.snapshot_steps.erase(
        std::unique(bundle.snapshot_steps.begin(), bundle.snapshot_steps.end()),
        bundle.snapshot_steps.end());
    if (!bundle.snapshot_steps.empty() && bundle.snapshot_steps.back() > cfg.num_steps)
        throw Error("simulate: snapshot step " +
                    std::to_string(bundle.snapshot_steps.back()) +
                    " exceeds num_steps=" + std::to_string(cfg.num_steps));
    bundle.config.snapshot_steps = bundle.snapshot_steps;
    bundle.runs.resize(cfg.num_runs);

    const auto n = g.num_nodes();
    const auto& snaps = bundle.snapshot_steps;

    auto run_one = [&](std::size_t y) {
        SplitMix64 rng(cfg.seed ^ static_cast<std::uint64_t>(y));
        std::vector<double> theta =
            initial.empty() ? init_opinions(n, rng) : initial[y];

        RunTrajectory traj;
        traj.steady = steady_from_flow(flow, theta);
        traj.snapshots.reserve(snaps.size());

        std::size_t next_snap = 0;
        if (next_snap < snaps.size() && snaps[next_snap] == 0) {
            traj.snapshots.push_back({theta, 0.0});
            ++next_snap;
        }
        std::vector<double> work(n);
        for (std::size_t step = 1; step <= cfg.num_steps; ++step) {
            op.apply(theta, work);
            bool finite = true;
            for (std::size_t i = 0; i < n; ++i) {
                theta[i] -= h * work[i];
                finite = finite && std::isfinite(theta[i]);
            }
            if (!finite) {
                std::ostringstream msg;
                msg << "simulate: instability, non-finite opinion at run " << y
                    << " step " << step << " (step size " << h << ")";
                throw Error(msg.str());
            }
            if (next_snap < snaps.size() && snaps[next_snap] == step) {
                traj.snapshots.push_back({theta, static_cast<double>(step) * h});
                ++next_snap;
            }
        }
        bundle.runs[y] = std::move(traj);
    };

    std::size_t workers = cfg.num_workers;
    if (workers == 0) {
        workers = std::thread::hardware_concurrency();
        if (workers == 0)
            workers = 1;
    }
    workers = std::min<std::size_t>(workers, cfg.num_runs);

    if (workers <= 1) {
        for (std::size_t y = 0; y < cfg.num_runs; ++y)
            run_one(y);
    } else {
        std::mutex error_mutex;
        std::exception_ptr first_error;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t y = w; y < cfg.num_runs; y += workers) {
                    try {
                        run_one(y);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error)
                            first_error = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (auto& t : pool)
            t.join();
        if (first_error)
            std::rethrow_exception(first_error);
    }
    return bundle;
}

} // namespace

TrajectoryBundle simulate(const SimulationConfig& cfg, const Graph& g) {
    return simulate_impl(cfg, g, {});
}

TrajectoryBundle simulate(const SimulationConfig& cfg, const Graph& g,
                          std::span<const std::vector<double>> initial) {
    if (initial.empty())
        throw Error("simulate: explicit initial opinions must not be empty");
    return simulate_impl(cfg, g, initial);
}

SteadyState steady_state(ModelKind model, const Graph& g, std::span<const double> theta0,
                         AlphaMode alpha_mode) {
    check_theta_size(theta0, g);
    auto flow = analyze_flow(g, model, alpha_mode);
    return steady_from_flow(flow, theta0);
}

SteadyState steady_state(OperatorKind kind, const Graph& g,
                         std::span<const double> theta0) {
    check_theta_size(theta0, g);
    if (kind.family == OperatorKind::Family::laplacian)
        return steady_state(ModelKind::conservative, g, theta0);
    auto flow = analyze_flow(g, ModelKind::nonconservative, AlphaMode::per_component);
    std::vector<double> alpha(flow.components.size(), kind.alpha);
    return replicator_steady(flow, theta0, alpha);
}

std::vector<double> exact_evolution(const ShiftedAdjacencyOperator& op,
                                    std::span<const double> theta0, double time,
                                    std::size_t dense_threshold) {
    if (op.size() > dense_threshold)
        throw Error("exact_evolution: graph exceeds dense threshold of " +
                    std::to_string(dense_threshold) + " nodes");
    if (theta0.size() != op.size())
        throw Error("exact_evolution: opinion vector length does not match node count");
    const auto n = op.size();
    auto dec = dense_eigendecomposition(op);
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        std::span<const double> v(dec.vectors_colmajor.data() + k * n, n);
        const double c = dot(v, theta0) * std::exp(-dec.eigenvalues[k] * time);
        for (std::size_t i = 0; i < n; ++i)
            out[i] += c * v[i];
    }
    return out;
}

std::vector<double> exact_evolution(OperatorKind kind, const Graph& g,
                                    std::span<const double> theta0, double time,
                                    std::size_t dense_threshold) {
    check_theta_size(theta0, g);
    ShiftedAdjacencyOperator op(g, kind);
    return exact_evolution(op, theta0, time, dense_threshold);
}

AlphaRegimeReport alpha_regime(const Graph& g, double alpha,
                               std::span<const double> theta0, double horizon) {
    check_theta_size(theta0, g);
    if (!(horizon > 0.0))
        throw Error("alpha_regime: probe horizon must be positive");
    auto pair = largest_adjacency_eigenpair(g); // also rejects disconnected graphs
    const double n0 = norm(theta0);
    const double proj = dot(pair.vector, theta0);
    if (std::abs(proj) <= 1e-12 * std::max(1.0, n0))
        throw Error("alpha_regime: theta0 is orthogonal to the Perron vector, "
                    "the dominant mode is absent and the regime is undefined");

    AlphaRegimeReport report;
    report.lambda_max = pair.lambda_max;
    report.horizon = horizon;
    if (alpha > pair.lambda_max + kAlphaTol)
        report.regime = AlphaRegime::decaying;
    else if (alpha < pair.lambda_max - kAlphaTol)
        report.regime = AlphaRegime::diverging;
    else
        report.regime = AlphaRegime::steady;

    const auto kind = OperatorKind::replicator(alpha);
    std::vector<double> probed;
    if (g.num_nodes() <= kDenseThreshold) {
        probed = exact_evolution(kind, g, theta0, horizon);
    } else {
        ShiftedAdjacencyOperator op(g, kind);
        const double lambda_op = largest_operator_eigenvalue(op);
        const double h_max = lambda_op > 0.0 ? 1.0 / (2.0 * lambda_op) : 1.0;
        const auto steps = static_cast<std::size_t>(std::ceil(horizon / h_max));
        const double h = horizon / static_cast<double>(steps);
        OpinionState s{{theta0.begin(), theta0.end()}, 0.0};
        for (std::size_t i = 0; i < steps; ++i)
            s = step_euler(kind, g, s, h);
        probed = std::move(s.opinions);
    }
    const double n1 = norm(probed);
    report.norm_ratio = n0 > 0.0 ? std::pow(n1 / n0, 1.0 / horizon) : 1.0;
    return report;
}

} // namespace flowcomm
