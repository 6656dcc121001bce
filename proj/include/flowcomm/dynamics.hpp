#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "flowcomm/graph.hpp"
#include "flowcomm/operators.hpp"
#include "flowcomm/rng.hpp"

namespace flowcomm {

/** Tolerance for deciding alpha == lambda_max in regime classification and
 *  steady-state checks. */
inline constexpr double kAlphaTol = 1e-6;

/** Steady-state entries smaller than this mark incident edges' similarity
 *  as undefined (the Eq.-5-style ratio would blow up). */
inline constexpr double kSteadyZeroTol = 1e-12;

enum class ModelKind { conservative, nonconservative };

/** How the replicator's alpha treats disconnected graphs: one alpha per
 *  component (default), or the single global lambda_max, which sends every
 *  smaller component to zero. */
enum class AlphaMode { per_component, global };

struct SimulationConfig {
    ModelKind model = ModelKind::conservative;
    AlphaMode alpha_mode = AlphaMode::per_component;
    double step_size = 0.0;   // 0 selects 1/(2 lambda_max) of the operator
    std::size_t num_steps = 100;
    std::size_t num_runs = 100;
    std::uint64_t seed = 0;
    std::vector<std::size_t> snapshot_steps; // ascending, each <= num_steps
    std::size_t num_workers = 0;             // 0 = hardware concurrency
};

struct OpinionState {
    std::vector<double> opinions;
    double time = 0.0;
};

struct SteadyState {
    enum class Kind { consensus, centrality_proportional };
    std::vector<double> opinions;
    Kind kind = Kind::consensus;
};

struct RunTrajectory {
    std::vector<OpinionState> snapshots; // aligned with snapshot_steps
    SteadyState steady;
};

/** Snapshots and steady states for all runs. Run y depends only on
 *  (seed, y), so bundles are bitwise-identical at any worker count. */
struct TrajectoryBundle {
    SimulationConfig config;                 // step_size resolved
    std::vector<std::size_t> snapshot_steps;
    std::vector<RunTrajectory> runs;

    /** Index into snapshots for a step; Error if not recorded. */
    std::size_t snapshot_index(std::size_t step) const;
};

/** i.i.d. uniform opinions on [-pi, pi]. */
std::vector<double> init_opinions(std::size_t n, SplitMix64& rng);

/** One explicit-Euler step under the chosen operator; time advances by h. */
OpinionState step_euler(OperatorKind kind, const Graph& g, const OpinionState& s,
                        double h);

/** Y independent Euler trajectories with per-run seeding seed^y, snapshots
 *  at the requested steps and the analytic steady state attached per run.
 *  Non-finite opinions abort with the offending run and step. */
TrajectoryBundle simulate(const SimulationConfig& cfg, const Graph& g);

/** Same, but with caller-provided initial opinions (one vector per run). */
TrajectoryBundle simulate(const SimulationConfig& cfg, const Graph& g,
                          std::span<const std::vector<double>> initial);

/** Analytic steady state.
 *
 * Conservative: per component, the mean of theta0 over the component.
 * Non-conservative with the canonical alpha: per component, (v.theta0) v
 * for the component's unit Perron vector v; under AlphaMode::global,
 * components whose lambda_max is below the global alpha decay to zero.
 */
SteadyState steady_state(ModelKind model, const Graph& g, std::span<const double> theta0,
                         AlphaMode alpha_mode = AlphaMode::per_component);

/** Steady state for an explicit operator choice. A replicator alpha below
 *  some component's lambda_max has no steady state and raises Error. */
SteadyState steady_state(OperatorKind kind, const Graph& g, std::span<const double> theta0);

/** theta(t) = sum_i v_i exp(-lambda_i t) (v_i . theta0) via dense
 *  eigendecomposition; test oracle, so N must stay within dense_threshold. */
std::vector<double> exact_evolution(OperatorKind kind, const Graph& g,
                                    std::span<const double> theta0, double time,
                                    std::size_t dense_threshold = kDenseThreshold);
std::vector<double> exact_evolution(const ShiftedAdjacencyOperator& op,
                                    std::span<const double> theta0, double time,
                                    std::size_t dense_threshold = kDenseThreshold);

enum class AlphaRegime { decaying, steady, diverging };

struct AlphaRegimeReport {
    AlphaRegime regime = AlphaRegime::steady;
    double lambda_max = 0.0;         // of W on the (connected) graph
    double norm_ratio = 1.0;         // ||theta(horizon)|| / ||theta0||, per unit time
    double horizon = 0.0;
};

/** Classifies the replicator's long-term behavior for a given alpha by the
 *  sign of lambda_max - alpha (tolerance kAlphaTol), cross-checked by an
 *  empirical norm ratio over the probe horizon. Requires connected g and
 *  theta0 not orthogonal to the Perron vector. */
AlphaRegimeReport alpha_regime(const Graph& g, double alpha,
                               std::span<const double> theta0, double horizon = 10.0);

} // namespace flowcomm
