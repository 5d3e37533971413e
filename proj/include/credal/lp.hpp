#pragma once

#include <vector>

namespace credal::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterLimit };

struct Result {
    Status status = Status::IterLimit;
    double objective = 0.0;      // c.x at the optimum (maximization)
    double infeasibility = 0.0;  // phase-1 residual when Infeasible
    std::vector<double> x;
};

/// Maximize c.x subject to A x = b, x >= 0. Dense two-phase simplex with a
/// Bland fallback against cycling; intended for the small systems produced
/// by convex-combination and polytope-feasibility tests.
Result maximize(const std::vector<std::vector<double>>& A, const std::vector<double>& b, const std::vector<double>& c,
                double tol = 1e-9);

/// Phase 1 only: decides feasibility of {A x = b, x >= 0}. The result's
/// infeasibility field carries the residual actually achieved.
Result feasibility(const std::vector<std::vector<double>>& A, const std::vector<double>& b, double tol = 1e-9);

}  // namespace credal::lp
