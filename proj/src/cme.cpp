#include "parrep/cme.hpp"

#include <Eigen/SparseLU>
#include <queue>

#include "parrep/errors.hpp"

namespace parrep {

long StateBox::size() const {
    long n = 1;
    for (int i = 0; i < lo.size(); ++i) {
        if (hi[i] < lo[i]) throw Error("state box has empty range for species " + std::to_string(i));
        n *= hi[i] - lo[i] + 1;
    }
    return n;
}

long StateBox::index_of(const State& x) const {
    long idx = 0;
    for (int i = 0; i < lo.size(); ++i) {
        if (x[i] < lo[i] || x[i] > hi[i]) return -1;
        idx = idx * (hi[i] - lo[i] + 1) + (x[i] - lo[i]);
    }
    return idx;
}

State StateBox::state_of(long index) const {
    State x(lo.size());
    for (int i = static_cast<int>(lo.size()) - 1; i >= 0; --i) {
        const long span = hi[i] - lo[i] + 1;
        x[i] = lo[i] + static_cast<int>(index % span);
        index /= span;
    }
    return x;
}

TruncatedGenerator build_truncated_generator(const ReactionNetwork& net, const StateBox& box) {
    const long n = box.size();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(n * (net.n_reactions() + 1));
    for (long i = 0; i < n; ++i) {
        const State x = box.state_of(i);
        double diag = 0.0;
        for (int j = 0; j < net.n_reactions(); ++j) {
            const double lambda = evaluate_propensity(net, j, x);
            if (lambda <= 0.0) continue;
            const long target = box.index_of(x + net.reactions[j].stoich);
            if (target < 0) continue;  // reflecting truncation: drop outflow
            triplets.emplace_back(i, target, lambda);
            diag += lambda;
        }
        if (diag != 0.0) triplets.emplace_back(i, i, -diag);
    }
    Eigen::SparseMatrix<double> q(n, n);
    q.setFromTriplets(triplets.begin(), triplets.end());
    return {box, q};
}

namespace {

// Strong connectivity via BFS along Q and Q^T from state 0.
bool strongly_connected(const Eigen::SparseMatrix<double>& q) {
    const long n = q.rows();
    const Eigen::SparseMatrix<double> qt = q.transpose();
    for (const auto* m : {&q, &qt}) {
        std::vector<char> seen(n, 0);
        std::queue<long> frontier;
        frontier.push(0);
        seen[0] = 1;
        long count = 1;
        while (!frontier.empty()) {
            const long u = frontier.front();
            frontier.pop();
            for (Eigen::SparseMatrix<double>::InnerIterator it(*m, u); it; ++it) {
                // column-major storage: iterate column u, rows are sources;
                // use the transpose pair so both directions are covered
                const long v = it.row();
                if (it.value() > 0.0 && !seen[v]) {
                    seen[v] = 1;
                    ++count;
                    frontier.push(v);
                }
            }
        }
        if (count != n) return false;
    }
    return true;
}

struct BorderedSolver {
    // Q^T with the last row replaced by ones: the normalized stationary
    // system.  Shared by the stationary solve and all sensitivity solves.
    Eigen::SparseMatrix<double> a;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;

    explicit BorderedSolver(const Eigen::SparseMatrix<double>& q) {
        const long n = q.rows();
        std::vector<Eigen::Triplet<double>> triplets;
        triplets.reserve(q.nonZeros() + n);
        for (long col = 0; col < q.outerSize(); ++col) {
            for (Eigen::SparseMatrix<double>::InnerIterator it(q, col); it; ++it) {
                if (it.col() == n - 1) continue;  // row n-1 of Q^T
                triplets.emplace_back(it.col(), it.row(), it.value());
            }
        }
        for (long j = 0; j < n; ++j) triplets.emplace_back(n - 1, j, 1.0);
        a.resize(n, n);
        a.setFromTriplets(triplets.begin(), triplets.end());
        lu.compute(a);
        if (lu.info() != Eigen::Success)
            throw SingularSystemError("bordered stationary system is rank-deficient");
    }

    // One step of iterative refinement keeps the residual near round-off.
    Vector solve(const Vector& rhs) const {
        Vector x = lu.solve(rhs);
        x += lu.solve(rhs - a * x);
        return x;
    }
};

}  // namespace

StationarySolution stationary_solve(const TruncatedGenerator& gen) {
    const long n = gen.q.rows();
    if (n == 1) return {Vector::Ones(1), 0.0, 1.0};
    if (!strongly_connected(gen.q))
        throw ReducibleError("truncated state box is not strongly connected");

    BorderedSolver solver(gen.q);
    Vector rhs = Vector::Zero(n);
    rhs[n - 1] = 1.0;
    Vector pi = solver.solve(rhs);

    StationarySolution sol;
    sol.pi = pi;
    sol.residual = (gen.q.transpose() * pi).lpNorm<Eigen::Infinity>();
    for (long i = 0; i < n; ++i) {
        const State x = gen.box.state_of(i);
        bool face = false;
        for (int s = 0; s < x.size(); ++s) {
            if (x[s] == gen.box.lo[s] || x[s] == gen.box.hi[s]) face = true;
        }
        if (face) sol.boundary_mass += pi[i];
    }
    return sol;
}

double stationary_moment(const TruncatedGenerator& gen, const StationarySolution& sol,
                         const std::function<double(const State&)>& f) {
    double m = 0.0;
    for (long i = 0; i < gen.q.rows(); ++i) m += f(gen.box.state_of(i)) * sol.pi[i];
    return m;
}

double stationary_moment(const TruncatedGenerator& gen, const StationarySolution& sol,
                         const Observable& f) {
    return stationary_moment(gen, sol, [&f](const State& x) { return f(x); });
}

Vector stationary_sensitivity(const ReactionNetwork& net, const StateBox& box,
                              const std::function<double(const State&)>& f) {
    const TruncatedGenerator gen = build_truncated_generator(net, box);
    const long n = box.size();
    if (!strongly_connected(gen.q))
        throw ReducibleError("truncated state box is not strongly connected");
    BorderedSolver solver(gen.q);
    Vector rhs0 = Vector::Zero(n);
    rhs0[n - 1] = 1.0;
    const Vector pi = solver.solve(rhs0);

    Vector fv(n);
    for (long i = 0; i < n; ++i) fv[i] = f(box.state_of(i));

    const int l = net.n_params();
    Vector result(l);
    for (int k = 0; k < l; ++k) {
        // dQ/dc_k, truncated the same way as Q
        std::vector<Eigen::Triplet<double>> triplets;
        for (long i = 0; i < n; ++i) {
            const State x = box.state_of(i);
            const Matrix grad = propensity_gradients(net, x);
            double diag = 0.0;
            for (int j = 0; j < net.n_reactions(); ++j) {
                const double g = grad(j, k);
                if (g == 0.0) continue;
                const long target = box.index_of(x + net.reactions[j].stoich);
                if (target < 0) continue;
                triplets.emplace_back(i, target, g);
                diag += g;
            }
            if (diag != 0.0) triplets.emplace_back(i, i, -diag);
        }
        Eigen::SparseMatrix<double> dq(n, n);
        dq.setFromTriplets(triplets.begin(), triplets.end());

        Vector rhs = -(dq.transpose() * pi);
        rhs[n - 1] = 0.0;  // sum of dpi is zero
        const Vector dpi = solver.solve(rhs);
        result[k] = fv.dot(dpi);
    }
    return result;
}

Matrix stationary_fim(const ReactionNetwork& net, const TruncatedGenerator& gen,
                      const StationarySolution& sol) {
    const int l = net.n_params();
    Matrix fim = Matrix::Zero(l, l);
    for (long i = 0; i < gen.q.rows(); ++i) {
        const State x = gen.box.state_of(i);
        const Vector lambda = evaluate_propensities(net, x);
        const Matrix grad = propensity_gradients(net, x);
        for (int j = 0; j < net.n_reactions(); ++j) {
            if (lambda[j] <= 0.0) continue;
            const Vector g = grad.row(j).transpose() / lambda[j];
            fim.noalias() += (sol.pi[i] * lambda[j]) * (g * g.transpose());
        }
    }
    return fim;
}

}  // namespace parrep
