#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "flowcomm/graph.hpp"

namespace flowcomm {

/** Dense eigendecomposition is allowed up to this node count; above it the
 *  iterative Krylov path is used. */
inline constexpr std::size_t kDenseThreshold = 512;

/** Selects one of the two flow operators: the Laplacian D - W of the
 *  conservative model, or the replicator alpha*I - W of the non-conservative
 *  one. On the canonical path alpha equals lambda_max(W) of the component
 *  the operator acts on. */
struct OperatorKind {
    enum class Family { laplacian, replicator };

    Family family = Family::laplacian;
    double alpha = 0.0; // replicator only

    static OperatorKind laplacian() { return {Family::laplacian, 0.0}; }
    static OperatorKind replicator(double alpha) { return {Family::replicator, alpha}; }
    bool is_replicator() const { return family == Family::replicator; }
};

/** Matrix-free symmetric operator diag(shift) - W.
 *
 * shift = degrees gives the Laplacian; shift = alpha (possibly varying by
 * component) gives the replicator. Row accumulation order is fixed by the
 * graph's sorted adjacency, so results are bitwise-deterministic.
 */
class ShiftedAdjacencyOperator {
public:
    ShiftedAdjacencyOperator(const Graph& g, OperatorKind kind);
    ShiftedAdjacencyOperator(const Graph& g, std::vector<double> shift);

    std::size_t size() const { return shift_.size(); }
    const Graph& graph() const { return *graph_; }
    const std::vector<double>& shift() const { return shift_; }

    /** y = (diag(shift) - W) x */
    void apply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> apply(std::span<const double> x) const;

    /** Gershgorin bounds on the eigenvalue range. */
    double eigenvalue_upper_bound() const;
    double eigenvalue_lower_bound() const;

private:
    const Graph* graph_;
    std::vector<double> shift_;
};

/** Lx or Rx without materializing a dense matrix. */
std::vector<double> apply_operator(OperatorKind kind, const Graph& g,
                                   std::span<const double> x);

/** Largest adjacency eigenvalue and its positive unit eigenvector
 *  (eigenvector centrality). */
struct PerronPair {
    double lambda_max = 0.0;
    std::vector<double> vector; // strictly positive, unit Euclidean norm
};

/** Power iteration for the Perron pair of W on a connected graph.
 *
 * Starts from the all-ones vector and iterates on W + cI (c = max degree) so
 * that bipartite spectra, where -lambda_max ties lambda_max in magnitude,
 * still converge. Stops when successive Rayleigh quotients differ by < tol
 * and the residual is small; non-convergence raises Error with the last
 * residual.
 */
PerronPair largest_adjacency_eigenpair(const Graph& g, double tol = 1e-12,
                                       std::size_t max_iters = 100000);

/** Ascending eigenvalues with per-value residuals ||Av - lambda v|| for
 *  unit v. A value is converged when its residual is at most `tol`. */
struct SpectralSummary {
    std::vector<double> eigenvalues;
    std::vector<double> residuals;
    double tol = 0.0; // absolute residual bound the solver aimed for
    bool converged(std::size_t i) const { return residuals.at(i) <= tol; }
    bool all_converged() const;
};

/** k algebraically smallest eigenvalues of the chosen operator.
 *
 * Uses an exact dense decomposition when N <= dense_threshold and a Lanczos
 * iteration with full reorthogonalization and locking above it (restarting
 * recovers multiplicities). On non-convergence the best available values are
 * returned with their residuals; callers detect partial results via
 * converged()/all_converged().
 */
SpectralSummary smallest_eigenvalues(OperatorKind kind, const Graph& g, std::size_t k,
                                     double tol = 1e-9,
                                     std::size_t dense_threshold = kDenseThreshold);

/** Community count estimated from the low end of a spectrum.
 *
 * Scans ratios lambda_{i+1}/max(lambda_i, 1e-12) over prefix lengths i and
 * returns the maximizing prefix as C, with the raw ratio as the gap. Exact
 * zeros (<= 1e-9) need special handling: ratios inside the zero bucket score
 * 0, and the step out of it scores a fixed boundary value of 20 rather than
 * the astronomically large raw ratio, so a genuinely dominant gap further up
 * (e.g. weakly bridged cliques) can still win. An all-equal spectrum has no
 * gap and reports C=1, gap=0.
 */
struct CommunitySignature {
    std::size_t count = 1;
    double gap = 0.0;
};
CommunitySignature community_count_signature(const SpectralSummary& summary);

/** Dense spectral decomposition of diag(shift) - W; requires
 *  size <= kDenseThreshold. Eigenvectors are unit columns, ascending order. */
struct DenseEigen {
    std::vector<double> eigenvalues;        // ascending
    std::vector<double> vectors_colmajor;   // column k at [k*N, (k+1)*N)
};
DenseEigen dense_eigendecomposition(const ShiftedAdjacencyOperator& op);

/** Estimate of the largest eigenvalue of diag(shift) - W via power iteration
 *  on a nonnegative shift of the operator; falls back to the Gershgorin
 *  upper bound when the iteration stalls. Never underestimates by more than
 *  the requested tolerance allows; used for Euler step-size selection. */
double largest_operator_eigenvalue(const ShiftedAdjacencyOperator& op,
                                   double tol = 1e-10, std::size_t max_iters = 20000);

} // namespace flowcomm
