#include "flowcomm/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "flowcomm/rng.hpp"

namespace flowcomm {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void scale_vec(std::span<double> a, double c) {
    for (auto& x : a)
        x *= c;
}

// y -= (q . y) q for unit q
void orthogonalize_against(std::span<double> y, std::span<const double> q) {
    const double c = dot(q, y);
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] -= c * q[i];
}

std::vector<double> shift_for(const Graph& g, OperatorKind kind) {
    if (kind.family == OperatorKind::Family::laplacian)
        return g.degrees();
    if (!std::isfinite(kind.alpha))
        throw Error("replicator alpha must be finite");
    return std::vector<double>(g.num_nodes(), kind.alpha);
}

} // namespace

ShiftedAdjacencyOperator::ShiftedAdjacencyOperator(const Graph& g, OperatorKind kind)
    : graph_(&g), shift_(shift_for(g, kind)) {}

ShiftedAdjacencyOperator::ShiftedAdjacencyOperator(const Graph& g, std::vector<double> shift)
    : graph_(&g), shift_(std::move(shift)) {
    if (shift_.size() != g.num_nodes())
        throw Error("operator shift length does not match node count");
}

void ShiftedAdjacencyOperator::apply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != size() || y.size() != size())
        throw Error("operator apply: vector length does not match node count");
    graph_->adjacency_multiply(x, y);
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] = shift_[i] * x[i] - y[i];
}

std::vector<double> ShiftedAdjacencyOperator::apply(std::span<const double> x) const {
    std::vector<double> y(size());
    apply(x, y);
    return y;
}

double ShiftedAdjacencyOperator::eigenvalue_upper_bound() const {
    double b = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        b = std::max(b, shift_[i] + graph_->degree(static_cast<std::uint32_t>(i)));
    return b;
}

double ShiftedAdjacencyOperator::eigenvalue_lower_bound() const {
    if (size() == 0)
        return 0.0;
    double b = shift_[0] - graph_->degree(0);
    for (std::size_t i = 1; i < size(); ++i)
        b = std::min(b, shift_[i] - graph_->degree(static_cast<std::uint32_t>(i)));
    return b;
}

std::vector<double> apply_operator(OperatorKind kind, const Graph& g,
                                   std::span<const double> x) {
    return ShiftedAdjacencyOperator(g, kind).apply(x);
}

PerronPair largest_adjacency_eigenpair(const Graph& g, double tol, std::size_t max_iters) {
    if (g.num_nodes() == 0)
        throw Error("largest_adjacency_eigenpair: empty graph");
    if (max_iters < 1)
        throw Error("largest_adjacency_eigenpair: max_iters must be >= 1");
    if (connected_components(g).size() != 1)
        throw Error("largest_adjacency_eigenpair: graph is not connected");

    const auto n = g.num_nodes();
    if (n == 1)
        return {0.0, {1.0}};

    // Iterate on W + cI: same eigenvectors, spectrum shifted positive so the
    // dominant magnitude is unique even on bipartite graphs.
    const double c = g.max_degree();
    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> w(n);
    double rayleigh_prev = 0.0;
    double residual = 0.0;
    for (std::size_t it = 0; it < max_iters; ++it) {
        g.adjacency_multiply(v, w);
        const double rayleigh = dot(v, w); // v is unit, so this is v'Wv
        residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = w[i] - rayleigh * v[i];
            residual += r * r;
        }
        residual = std::sqrt(residual);
        const double scale = std::max(1.0, std::abs(rayleigh) + c);
        if (it > 0 && std::abs(rayleigh - rayleigh_prev) < tol &&
            residual <= std::max(tol, 1e-10) * scale) {
            for (auto& x : v)
                x = std::abs(x);
            scale_vec(v, 1.0 / norm(v));
            return {rayleigh, std::move(v)};
        }
        rayleigh_prev = rayleigh;
        for (std::size_t i = 0; i < n; ++i)
            w[i] += c * v[i];
        const double nw = norm(w);
        if (!(nw > 0.0))
            throw Error("largest_adjacency_eigenpair: iterate collapsed to zero");
        for (std::size_t i = 0; i < n; ++i)
            v[i] = w[i] / nw;
    }
    std::ostringstream msg;
    msg << "largest_adjacency_eigenpair: no convergence in " << max_iters
        << " iterations (last residual " << residual << ")";
    throw Error(msg.str());
}

bool SpectralSummary::all_converged() const {
    for (double r : residuals)
        if (!(r <= tol))
            return false;
    return true;
}

DenseEigen dense_eigendecomposition(const ShiftedAdjacencyOperator& op) {
    const auto n = op.size();
    if (n > kDenseThreshold)
        throw Error("dense_eigendecomposition: graph exceeds dense threshold of " +
                    std::to_string(kDenseThreshold) + " nodes");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
    const auto& g = op.graph();
    for (const auto& e : g.edges()) {
        m(e.u, e.v) = -e.weight;
        m(e.v, e.u) = -e.weight;
    }
    for (std::size_t i = 0; i < n; ++i)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = op.shift()[i];

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success)
        throw Error("dense_eigendecomposition: eigensolver failed");

    DenseEigen out;
    out.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    out.vectors_colmajor.resize(n * n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            out.vectors_colmajor[k * n + i] =
                solver.eigenvectors()(static_cast<Eigen::Index>(i),
                                      static_cast<Eigen::Index>(k));
    return out;
}

namespace {

double exact_residual(const ShiftedAdjacencyOperator& op, std::span<const double> v,
                      double lambda) {
    auto av = op.apply(v);
    double r = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double d = av[i] - lambda * v[i];
        r += d * d;
    }
    const double nv = norm(v);
    return nv > 0.0 ? std::sqrt(r) / nv : 0.0;
}

SpectralSummary smallest_dense(const ShiftedAdjacencyOperator& op, std::size_t k,
                               double tol_abs) {
    auto dec = dense_eigendecomposition(op);
    const auto n = op.size();
    SpectralSummary out;
    out.tol = tol_abs;
    out.eigenvalues.assign(dec.eigenvalues.begin(), dec.eigenvalues.begin() + k);
    out.residuals.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::span<const double> v(dec.vectors_colmajor.data() + i * n, n);
        out.residuals.push_back(exact_residual(op, v, dec.eigenvalues[i]));
    }
    return out;
}

struct RitzPair {
    double value = 0.0;
    std::vector<double> vector;
    double residual = 0.0;
};

/** One Lanczos pass with full reorthogonalization, deflated against locked
 *  eigenvectors. Returns Ritz pairs from the low end of the spectrum. */
std::vector<RitzPair> lanczos_pass(const ShiftedAdjacencyOperator& op,
                                   const std::vector<std::vector<double>>& locked,
                                   std::size_t steps, std::uint64_t seed,
                                   std::size_t want) {
    const auto n = op.size();
    SplitMix64 rng(seed);
    std::vector<std::vector<double>> basis;
    std::vector<double> alpha, beta;

    std::vector<double> q(n);
    for (auto& x : q)
        x = rng.uniform(-1.0, 1.0);
    for (const auto& l : locked)
        orthogonalize_against(q, l);
    double nq = norm(q);
    if (!(nq > 1e-300))
        return {};
    scale_vec(q, 1.0 / nq);
    basis.push_back(q);

    for (std::size_t j = 0; j < steps; ++j) {
        auto w = op.apply(basis[j]);
        const double a = dot(basis[j], w);
        alpha.push_back(a);
        for (std::size_t i = 0; i < w.size(); ++i)
            w[i] -= a * basis[j][i];
        if (j > 0)
            for (std::size_t i = 0; i < w.size(); ++i)
                w[i] -= beta[j - 1] * basis[j - 1][i];
        // Full reorthogonalization, twice, against locked and current basis.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& l : locked)
                orthogonalize_against(w, l);
            for (const auto& b : basis)
                orthogonalize_against(w, b);
        }
        const double nb = norm(w);
        if (nb < 1e-12 * std::max(1.0, std::abs(a))) {
            break; // invariant subspace exhausted
        }
        if (j + 1 < steps) {
            beta.push_back(nb);
            scale_vec(w, 1.0 / nb);
            basis.push_back(std::move(w));
        }
    }

    const auto m = alpha.size();
    if (m == 0)
        return {};
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                              static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
        t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = alpha[i];
        if (i + 1 < m && i < beta.size()) {
            t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = beta[i];
            t(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = beta[i];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t);
    if (solver.info() != Eigen::Success)
        throw Error("smallest_eigenvalues: tridiagonal eigensolver failed");

    std::vector<RitzPair> out;
    const auto take = std::min(want, m);
    for (std::size_t r = 0; r < take; ++r) {
        RitzPair pair;
        pair.value = solver.eigenvalues()(static_cast<Eigen::Index>(r));
        pair.vector.assign(n, 0.0);
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const double s = solver.eigenvectors()(static_cast<Eigen::Index>(j),
                                                   static_cast<Eigen::Index>(r));
            for (std::size_t i = 0; i < n; ++i)
                pair.vector[i] += s * basis[j][i];
        }
        const double nv = norm(pair.vector);
        if (nv > 1e-300)
            scale_vec(pair.vector, 1.0 / nv);
        pair.residual = exact_residual(op, pair.vector, pair.value);
        out.push_back(std::move(pair));
    }
    return out;
}

SpectralSummary smallest_lanczos(const ShiftedAdjacencyOperator& op, std::size_t k,
                                 double tol_abs) {
    const auto n = op.size();
    std::vector<std::vector<double>> locked_vecs;
    std::vector<double> locked_vals;
    std::vector<double> locked_res;

    const std::size_t max_rounds = 60;
    std::uint64_t seed = 0x1f0c5d1eb4a2c953ULL;
    std::vector<RitzPair> last_unconverged;

    // Each pass deflates what is already locked, so it samples the low end
    // of the remaining spectrum. Locking stops only once the remaining
    // spectrum provably starts at or above our current k-th smallest value;
    // stopping at k locked pairs alone would miss repeated low eigenvalues.
    for (std::size_t round = 0; round < max_rounds; ++round) {
        const auto remaining = k > locked_vals.size() ? k - locked_vals.size() : 0;
        const auto free_dim = n - locked_vecs.size();
        if (free_dim == 0)
            break;
        const auto steps = std::min(free_dim, std::max<std::size_t>(2 * remaining + 24, 48));
        auto ritz = lanczos_pass(op, locked_vecs, steps, seed + round, remaining + 4);
        if (ritz.empty())
            continue;
        last_unconverged.clear();
        double pass_min_converged = std::numeric_limits<double>::infinity();
        for (auto& pair : ritz) {
            if (pair.residual <= tol_abs) {
                pass_min_converged = std::min(pass_min_converged, pair.value);
                locked_vals.push_back(pair.value);
                locked_res.push_back(pair.residual);
                locked_vecs.push_back(std::move(pair.vector));
            } else {
                last_unconverged.push_back(std::move(pair));
            }
        }
        if (locked_vals.size() >= k && std::isfinite(pass_min_converged)) {
            auto sorted = locked_vals;
            std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
            const double kth = sorted[k - 1];
            if (pass_min_converged >= kth - tol_abs)
                break;
        }
    }

    // Fill any shortfall with the best unconverged Ritz values; their
    // residuals exceed tol, which is how callers detect partial results.
    for (auto& pair : last_unconverged) {
        if (locked_vals.size() >= k)
            break;
        locked_vals.push_back(pair.value);
        locked_res.push_back(pair.residual);
        locked_vecs.push_back(std::move(pair.vector));
    }

    std::vector<std::size_t> order(locked_vals.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return locked_vals[a] < locked_vals[b];
    });

    SpectralSummary out;
    out.tol = tol_abs;
    const auto take = std::min(k, order.size());
    for (std::size_t i = 0; i < take; ++i) {
        out.eigenvalues.push_back(locked_vals[order[i]]);
        out.residuals.push_back(locked_res[order[i]]);
    }
    return out;
}

} // namespace

SpectralSummary smallest_eigenvalues(OperatorKind kind, const Graph& g, std::size_t k,
                                     double tol, std::size_t dense_threshold) {
    const auto n = g.num_nodes();
    if (k > n)
        throw Error("smallest_eigenvalues: k=" + std::to_string(k) +
                    " exceeds node count N=" + std::to_string(n));
    if (k == 0)
        return {};
    ShiftedAdjacencyOperator op(g, kind);
    const double scale =
        std::max({1.0, std::abs(op.eigenvalue_upper_bound()),
                  std::abs(op.eigenvalue_lower_bound())});
    const double tol_abs = tol * scale;
    if (n <= std::min(dense_threshold, kDenseThreshold))
        return smallest_dense(op, k, tol_abs);
    return smallest_lanczos(op, k, tol_abs);
}

CommunitySignature community_count_signature(const SpectralSummary& summary) {
    const auto& ev = summary.eigenvalues;
    if (ev.size() < 2)
        throw Error("community_count_signature: need at least 2 eigenvalues");

    const double spread = ev.back() - ev.front();
    if (spread <= 1e-12 * std::max(1.0, std::abs(ev.back())))
        return {1, 0.0};

    constexpr double zero_tol = 1e-9;        // exact-zero bucket
    constexpr double eps = 1e-12;            // ratio denominator floor
    constexpr double boundary_score = 20.0;  // score for the zero -> nonzero step

    auto is_zero = [&](double x) { return x <= zero_tol; };

    std::size_t best = 1;
    double best_score = -1.0;
    for (std::size_t i = 0; i + 1 < ev.size(); ++i) {
        const double lo = ev[i];
        const double hi = ev[i + 1];
        double score;
        if (is_zero(hi))
            score = 0.0;
        else if (is_zero(lo))
            score = boundary_score;
        else
            score = hi / std::max(lo, eps);
        if (score > best_score) {
            best_score = score;
            best = i + 1;
        }
    }
    const double gap = ev[best] / std::max(ev[best - 1], eps);
    return {best, gap};
}

double largest_operator_eigenvalue(const ShiftedAdjacencyOperator& op, double tol,
                                   std::size_t max_iters) {
    const auto n = op.size();
    if (n == 0)
        throw Error("largest_operator_eigenvalue: empty operator");
    if (n == 1)
        return op.shift()[0];

    // Power iteration on op - lo*I, which is positive semidefinite, so the
    // Rayleigh quotient increases monotonically toward the top eigenvalue.
    const double lo = op.eigenvalue_lower_bound();
    const double hi = op.eigenvalue_upper_bound();
    SplitMix64 rng(0x9d2c5680u);
    std::vector<double> v(n);
    for (auto& x : v)
        x = rng.uniform(-1.0, 1.0);
    scale_vec(v, 1.0 / norm(v));
    std::vector<double> w(n);
    double rayleigh_prev = lo;
    for (std::size_t it = 0; it < max_iters; ++it) {
        op.apply(v, w);
        for (std::size_t i = 0; i < n; ++i)
            w[i] -= lo * v[i];
        const double rayleigh = dot(v, w) + lo;
        if (it > 0 && std::abs(rayleigh - rayleigh_prev) <=
                          tol * std::max(1.0, std::abs(rayleigh)))
            return rayleigh;
        rayleigh_prev = rayleigh;
        const double nw = norm(w);
        if (!(nw > 1e-300))
            return hi; // iterate hit an exact kernel direction; be conservative
        for (std::size_t i = 0; i < n; ++i)
            v[i] = w[i] / nw;
    }
    return hi; // no convergence; Gershgorin bound is always safe
}

} // namespace flowcomm
