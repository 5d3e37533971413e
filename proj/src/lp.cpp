#include "credal/lp.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace credal::lp {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr int kBlandAfter = 400;
constexpr int kHardIterCap = 50000;

// Full-tableau simplex, minimization convention. Columns 0..n-1 are the
// structural variables, n..n+m-1 the artificials, last column the rhs.
struct Tableau {
    int m, n;  // constraint rows, structural columns
    std::vector<double> t;
    int cols;
    std::vector<double> obj1, obj2;  // reduced-cost rows, phase 1 and 2
    double rhs1 = 0.0, rhs2 = 0.0;   // negated objective values
    std::vector<int> basis;          // basic variable per row

    double& at(int r, int c) { return t[static_cast<size_t>(r) * cols + c]; }

    Tableau(const std::vector<std::vector<double>>& A, const std::vector<double>& b, const std::vector<double>& c2)
        : m(static_cast<int>(A.size())), n(m ? static_cast<int>(A[0].size()) : 0) {
        cols = n + m + 1;
        t.assign(static_cast<size_t>(m) * cols, 0.0);
        obj1.assign(cols - 1, 0.0);
        obj2.assign(cols - 1, 0.0);
        basis.resize(m);
        for (int r = 0; r < m; ++r) {
            const double sign = b[r] < 0.0 ? -1.0 : 1.0;
            for (int j = 0; j < n; ++j) at(r, j) = sign * A[r][j];
            at(r, n + r) = 1.0;
            at(r, cols - 1) = sign * b[r];
            basis[r] = n + r;
        }
        // Phase-1 cost: minimize the artificial sum, pre-reduced against the
        // artificial basis. Phase-2 cost (minimize -c2) starts unreduced; the
        // artificial basis has zero phase-2 cost, so it is already reduced.
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int r = 0; r < m; ++r) s += at(r, j);
            obj1[j] = -s;
        }
        rhs1 = 0.0;
        for (int r = 0; r < m; ++r) rhs1 -= at(r, cols - 1);
        for (int j = 0; j < n && j < static_cast<int>(c2.size()); ++j) obj2[j] = -c2[j];
    }

    void pivot(int pr, int pc) {
        const double pv = at(pr, pc);
        for (int j = 0; j < cols; ++j) at(pr, j) /= pv;
        for (int r = 0; r < m; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (int j = 0; j < cols; ++j) at(r, j) -= f * at(pr, j);
            at(r, pc) = 0.0;
        }
        auto reduce = [&](std::vector<double>& obj, double& rhs) {
            const double f = obj[pc];
            if (f == 0.0) return;
            for (int j = 0; j < cols - 1; ++j) obj[j] -= f * at(pr, j);
            rhs -= f * at(pr, cols - 1);
            obj[pc] = 0.0;
        };
        reduce(obj1, rhs1);
        reduce(obj2, rhs2);
        basis[pr] = pc;
    }

    // One simplex phase; col_limit excludes artificials in phase 2.
    Status run(std::vector<double>& obj, double& rhs, int col_limit, int& iters) {
        for (;;) {
            if (++iters > kHardIterCap) return Status::IterLimit;
            const bool bland = iters > kBlandAfter;
            int pc = -1;
            double best = -kPivotEps;
            for (int j = 0; j < col_limit; ++j) {
                if (obj[j] < best) {
                    pc = j;
                    if (bland) break;
                    best = obj[j];
                }
            }
            if (pc < 0) return Status::Optimal;
            int pr = -1;
            double ratio = std::numeric_limits<double>::infinity();
            for (int r = 0; r < m; ++r) {
                const double a = at(r, pc);
                if (a <= kPivotEps) continue;
                const double q = at(r, cols - 1) / a;
                if (q < ratio - 1e-12 || (q < ratio + 1e-12 && (pr < 0 || basis[r] < basis[pr]))) {
                    ratio = q;
                    pr = r;
                }
            }
            if (pr < 0) return Status::Unbounded;
            pivot(pr, pc);
        }
    }

    std::vector<double> solution() const {
        std::vector<double> x(n, 0.0);
        for (int r = 0; r < m; ++r)
            if (basis[r] < n) x[basis[r]] = t[static_cast<size_t>(r) * cols + cols - 1];
        return x;
    }
};

Result solve(const std::vector<std::vector<double>>& A, const std::vector<double>& b, const std::vector<double>& c,
             bool phase2, double tol) {
    if (A.size() != b.size()) throw std::invalid_argument("lp: A/b size mismatch");
    Result res;
    if (A.empty()) {
        res.status = Status::Optimal;
        return res;
    }
    Tableau tab(A, b, c);
    int iters = 0;

    Status s1 = tab.run(tab.obj1, tab.rhs1, tab.cols - 1, iters);
    if (s1 != Status::Optimal) {
        // Phase 1 is bounded below by zero, so Unbounded can only be numeric noise.
        res.status = s1 == Status::Unbounded ? Status::IterLimit : s1;
        return res;
    }
    const double resid = -tab.rhs1;  // minimized artificial sum
    res.infeasibility = std::max(0.0, resid);
    if (resid > tol) {
        res.status = Status::Infeasible;
        return res;
    }

    // Drive leftover artificials out of the basis where a structural pivot
    // exists; a row with none is redundant and stays inert.
    for (int r = 0; r < tab.m; ++r) {
        if (tab.basis[r] < tab.n) continue;
        int pc = -1;
        for (int j = 0; j < tab.n; ++j)
            if (std::abs(tab.at(r, j)) > 1e-9) {
                pc = j;
                break;
            }
        if (pc >= 0) tab.pivot(r, pc);
    }

    if (phase2) {
        Status s2 = tab.run(tab.obj2, tab.rhs2, tab.n, iters);
        if (s2 != Status::Optimal) {
            res.status = s2;
            res.x = tab.solution();
            return res;
        }
        res.objective = tab.rhs2;  // rhs2 tracks -(min -c.x) = max c.x
    }
    res.status = Status::Optimal;
    res.x = tab.solution();
    return res;
}

}  // namespace

Result maximize(const std::vector<std::vector<double>>& A, const std::vector<double>& b, const std::vector<double>& c,
                double tol) {
    return solve(A, b, c, true, tol);
}

Result feasibility(const std::vector<std::vector<double>>& A, const std::vector<double>& b, double tol) {
    return solve(A, b, std::vector<double>(A.empty() ? 0 : A[0].size(), 0.0), false, tol);
}

}  // namespace credal::lp
