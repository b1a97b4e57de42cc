#pragma once

#include <Eigen/SparseCore>
#include <functional>
#include <vector>

#include "parrep/model.hpp"
#include "parrep/observable.hpp"

namespace parrep {

/// Finite state box with inclusive per-species bounds, enumerated
/// lexicographically (last species fastest).
struct StateBox {
    State lo;
    State hi;

    long size() const;
    /// -1 when the state lies outside the box.
    long index_of(const State& x) const;
    State state_of(long index) const;
};

/// Generator of the chain restricted to the box with reflecting truncation:
/// transitions leaving the box are dropped from both the off-diagonal and
/// the diagonal, so every row sums to zero up to floating-point re-association.
struct TruncatedGenerator {
    StateBox box;
    Eigen::SparseMatrix<double> q;  // row x, col y
};

TruncatedGenerator build_truncated_generator(const ReactionNetwork& net, const StateBox& box);

struct StationarySolution {
    Vector pi;
    double residual = 0.0;  // ||pi^T Q||_inf
    /// Probability on the faces of the box; the truncation is trustworthy
    /// only when this is tiny.
    double boundary_mass = 0.0;
};

/// Solves pi^T Q = 0, sum(pi) = 1 by sparse LU on the normalized system.
/// Reducible when the box is not strongly connected under Q.
StationarySolution stationary_solve(const TruncatedGenerator& gen);

double stationary_moment(const TruncatedGenerator& gen, const StationarySolution& sol,
                         const std::function<double(const State&)>& f);
double stationary_moment(const TruncatedGenerator& gen, const StationarySolution& sol,
                         const Observable& f);

/// d pi(f) / d c_k for every parameter, from the differentiated stationary
/// CME: dpi^T Q = -pi^T dQ/dc_k with sum(dpi) = 0.  One bordered sparse
/// factorization is shared across all parameters.
Vector stationary_sensitivity(const ReactionNetwork& net, const StateBox& box,
                              const std::function<double(const State&)>& f);

/// CME-weighted path-space FIM, sum_x pi(x) sum_j lambda_j g_j g_j^T; the
/// independent oracle for the Monte Carlo FIM estimator.
Matrix stationary_fim(const ReactionNetwork& net, const TruncatedGenerator& gen,
                      const StationarySolution& sol);

}  // namespace parrep
