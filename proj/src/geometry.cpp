#include "credal/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>

#include "credal/lp.hpp"

namespace credal {
namespace {

bool lex_less(const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

bool near_duplicate(const Vec& a, const Vec& b, double tol) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::fabs(a[i] - b[i]) > tol) return false;
    return true;
}

// Two Gram-Schmidt passes; the second pass cleans up the cancellation the
// first one leaves behind on nearly dependent inputs.
void reorthogonalize(Vec& v, const std::vector<Vec>& basis) {
    for (int pass = 0; pass < 2; ++pass)
        for (const Vec& b : basis) {
            double c = dot(v, b);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
        }
}

// Ranks of the points under lexicographic coordinate order. Used to break
// distance ties without depending on input order.
std::vector<int> lex_ranks(const std::vector<Vec>& pts) {
    std::vector<int> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (lex_less(pts[a], pts[b])) return true;
        if (lex_less(pts[b], pts[a])) return false;
        return a < b;
    });
    std::vector<int> rank(pts.size());
    for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = (int)k;
    return rank;
}

std::optional<Vec> solve_linear(std::vector<Vec> M, Vec rhs) {
    const int d = (int)rhs.size();
    for (int col = 0; col < d; ++col) {
        int piv = col;
        for (int r = col + 1; r < d; ++r)
            if (std::fabs(M[r][col]) > std::fabs(M[piv][col])) piv = r;
        if (std::fabs(M[piv][col]) < 1e-12) return std::nullopt;
        std::swap(M[piv], M[col]);
        std::swap(rhs[piv], rhs[col]);
        for (int r = col + 1; r < d; ++r) {
            double f = M[r][col] / M[col][col];
            if (f == 0.0) continue;
            for (int c2 = col; c2 < d; ++c2) M[r][c2] -= f * M[col][c2];
            rhs[r] -= f * rhs[col];
        }
    }
    Vec x(d);
    for (int r = d - 1; r >= 0; --r) {
        double s = rhs[r];
        for (int c2 = r + 1; c2 < d; ++c2) s -= M[r][c2] * x[c2];
        x[r] = s / M[r][r];
    }
    return x;
}

}  // namespace

double distance(Metric metric, const Vec& p, const Vec& q) {
    if (p.size() != q.size()) throw std::invalid_argument("distance: dimension mismatch");
    if (metric == Metric::Euclidean) {
        double s = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            double d = p[i] - q[i];
            s += d * d;
        }
        return std::sqrt(s);
    }
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        s += (p[i] - q[i]) * (std::log(p[i] + kEpsKl) - std::log(q[i] + kEpsKl));
    return s < 0.0 ? 0.0 : s;
}

FullRankEmbedding full_rank_embedding(const PointSet& ps, double tol) {
    if (ps.points.empty()) throw std::invalid_argument("full_rank_embedding: empty point set");
    FullRankEmbedding out;
    out.chart.origin = ps.points.front();
    for (const Vec& p : ps.points) {
        Vec d = sub(p, out.chart.origin);
        reorthogonalize(d, out.chart.basis);
        double nn = norm(d);
        if (nn > tol) {
            for (double& x : d) x /= nn;
            out.chart.basis.push_back(std::move(d));
        }
    }
    out.rank = (int)out.chart.basis.size();
    out.embedded.dim = out.rank;
    out.embedded.points.reserve(ps.points.size());
    for (const Vec& p : ps.points) {
        Vec d = sub(p, out.chart.origin);
        Vec c(out.rank);
        for (int r = 0; r < out.rank; ++r) c[r] = dot(out.chart.basis[r], d);
        out.embedded.points.push_back(std::move(c));
    }
    return out;
}

PointSet remove_redundant_vertices(const PointSet& ps, double tol) {
    PointSet out;
    out.dim = ps.dim;
    std::vector<Vec> pts = ps.points;
    std::sort(pts.begin(), pts.end(), lex_less);
    std::vector<Vec> uniq;
    for (Vec& p : pts) {
        bool dup = false;
        for (const Vec& q : uniq)
            if (near_duplicate(p, q, kEpsDup)) {
                dup = true;
                break;
            }
        if (!dup) uniq.push_back(std::move(p));
    }
    const int n = (int)uniq.size();
    if (n <= 1) {
        out.points = std::move(uniq);
        return out;
    }

    PointSet ups;
    ups.dim = ps.dim;
    ups.points = uniq;
    FullRankEmbedding fre = full_rank_embedding(ups, tol);
    if (fre.rank == 0) {
        out.points.push_back(std::move(uniq.front()));
        return out;
    }
    if (n <= fre.rank + 1) {
        // affinely independent, every point is extreme
        out.points = std::move(uniq);
        return out;
    }

    const auto& y = fre.embedded.points;
    std::vector<char> keep(n, 1), certified(n, 0);
    // A point that strictly attains a coordinate extreme cannot be a convex
    // combination of the others, so its membership LP is skipped.
    for (int r = 0; r < fre.rank; ++r) {
        int lo = 0, hi = 0;
        bool lo_unique = true, hi_unique = true;
        for (int i = 1; i < n; ++i) {
            if (y[i][r] < y[lo][r]) {
                lo = i;
                lo_unique = true;
            } else if (y[i][r] == y[lo][r]) {
                lo_unique = false;
            }
            if (y[i][r] > y[hi][r]) {
                hi = i;
                hi_unique = true;
            } else if (y[i][r] == y[hi][r]) {
                hi_unique = false;
            }
        }
        if (lo_unique) certified[lo] = 1;
        if (hi_unique) certified[hi] = 1;
    }

    const int cols = n - 1;
    for (int i = 0; i < n; ++i) {
        if (certified[i]) continue;
        std::vector<Vec> A(fre.rank + 1, Vec(cols));
        Vec b(fre.rank + 1);
        for (int r = 0; r < fre.rank; ++r) b[r] = y[i][r];
        b[fre.rank] = 1.0;
        int cj = 0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            for (int r = 0; r < fre.rank; ++r) A[r][cj] = y[j][r];
            A[fre.rank][cj] = 1.0;
            ++cj;
        }
        lp::Result res = lp::feasibility(A, b, tol);
        if (res.status == lp::Status::Optimal) keep[i] = 0;
    }

    for (int i = 0; i < n; ++i)
        if (keep[i]) out.points.push_back(std::move(uniq[i]));
    return out;
}

bool in_hull(const Vec& x, const PointSet& ps, double tol) {
    if (ps.points.empty()) return false;
    if ((int)x.size() != ps.dim) throw std::invalid_argument("in_hull: dimension mismatch");
    FullRankEmbedding fre = full_rank_embedding(ps, tol);
    Vec d = sub(x, fre.chart.origin);
    Vec c(fre.rank);
    for (int r = 0; r < fre.rank; ++r) c[r] = dot(fre.chart.basis[r], d);
    Vec resid = d;
    for (int r = 0; r < fre.rank; ++r)
        for (std::size_t t = 0; t < resid.size(); ++t) resid[t] -= c[r] * fre.chart.basis[r][t];
    if (norm(resid) > tol * (1.0 + norm(x))) return false;

    const int n = (int)ps.points.size();
    std::vector<Vec> A(fre.rank + 1, Vec(n));
    Vec b(fre.rank + 1);
    for (int r = 0; r < fre.rank; ++r) {
        for (int j = 0; j < n; ++j) A[r][j] = fre.embedded.points[j][r];
        b[r] = c[r];
    }
    for (int j = 0; j < n; ++j) A[fre.rank][j] = 1.0;
    b[fre.rank] = 1.0;
    lp::Result res = lp::feasibility(A, b, tol);
    return res.status == lp::Status::Optimal;
}

bool certify_vertex(const Vec& x, const PointSet& ps, double tol) {
    PointSet others;
    others.dim = ps.dim;
    for (const Vec& p : ps.points)
        if (!near_duplicate(p, x, kEpsDup)) others.points.push_back(p);
    if (others.points.empty()) return true;
    return !in_hull(x, others, tol);
}

std::pair<int, int> pairwise_min_distance(const PointSet& ps, Metric metric) {
    const int n = (int)ps.points.size();
    if (n < 2) throw std::invalid_argument("pairwise_min_distance: need at least two points");
    std::vector<int> rank = lex_ranks(ps.points);
    double best = std::numeric_limits<double>::infinity();
    int bi = 0, bj = 1, bri = 0, brj = 0;
    bool have = false;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double d = distance(metric, ps.points[i], ps.points[j]);
            int ri = std::min(rank[i], rank[j]);
            int rj = std::max(rank[i], rank[j]);
            bool better = !have || d < best ||
                          (d == best && (ri < bri || (ri == bri && rj < brj)));
            if (better) {
                best = d;
                bi = i;
                bj = j;
                bri = ri;
                brj = rj;
                have = true;
            }
        }
    return {bi, bj};
}

namespace {

// True when [y_i, y_j] spans an edge of the hull: no other point can carry
// weight in any convex representation of the segment midpoint.
bool spans_edge(const FullRankEmbedding& fre, int i, int j) {
    const auto& y = fre.embedded.points;
    const int n = (int)y.size();
    const int r = fre.rank;
    if (n <= 2) return true;
    if (r == 0) return false;
    Vec mid(r);
    for (int t = 0; t < r; ++t) mid[t] = 0.5 * (y[i][t] + y[j][t]);
    std::vector<Vec> A(r + 1, Vec(n));
    Vec b(r + 1), c(n, 1.0);
    for (int t = 0; t < r; ++t) {
        for (int z = 0; z < n; ++z) A[t][z] = y[z][t];
        b[t] = mid[t];
    }
    for (int z = 0; z < n; ++z) A[r][z] = 1.0;
    b[r] = 1.0;
    c[i] = 0.0;
    c[j] = 0.0;
    lp::Result res = lp::maximize(A, b, c, kEpsFeas);
    return res.status == lp::Status::Optimal && res.objective <= 1e-7;
}

std::pair<int, int> closest_edge_pair(const PointSet& cur, Metric metric) {
    const int n = (int)cur.points.size();
    FullRankEmbedding fre = full_rank_embedding(cur, kEpsFeas);
    if (fre.rank == 0) return {-1, -1};
    std::vector<int> rank = lex_ranks(cur.points);
    struct Cand {
        double d;
        int ri, rj, i, j;
    };
    std::vector<Cand> cands;
    cands.reserve((std::size_t)n * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            cands.push_back({distance(metric, cur.points[i], cur.points[j]),
                             std::min(rank[i], rank[j]), std::max(rank[i], rank[j]), i, j});
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.d != b.d) return a.d < b.d;
        if (a.ri != b.ri) return a.ri < b.ri;
        return a.rj < b.rj;
    });
    for (const Cand& c : cands)
        if (spans_edge(fre, c.i, c.j)) return {c.i, c.j};
    return {-1, -1};
}

}  // namespace

PointSet k_reduction(const PointSet& ps, int k, const KReductionOptions& opt) {
    if (k < 1) throw std::invalid_argument("k_reduction: k must be at least 1");
    PointSet cur = remove_redundant_vertices(ps);
    bool merged = false;
    while ((int)cur.points.size() > k) {
        std::pair<int, int> pick{-1, -1};
        if (opt.edge_restricted) pick = closest_edge_pair(cur, opt.metric);
        if (pick.first < 0) pick = pairwise_min_distance(cur, opt.metric);
        const Vec a = cur.points[pick.first];
        const Vec b = cur.points[pick.second];
        Vec mid(cur.dim);
        for (int t = 0; t < cur.dim; ++t) mid[t] = 0.5 * (a[t] + b[t]);
        if (opt.trace) opt.trace->push_back({a, b, mid});
        cur.points.erase(cur.points.begin() + pick.second);
        cur.points.erase(cur.points.begin() + pick.first);
        cur.points.push_back(std::move(mid));
        merged = true;
    }
    // Euclidean midpoints of a closest pair stay extreme on full-rank sets,
    // but degenerate and sym-KL merges can land inside the hull; one final
    // pruning pass restores the vertex invariant. Edge-restricted merges
    // produce facet-supported midpoints, so they skip it.
    if (merged && !opt.edge_restricted) cur = remove_redundant_vertices(cur);
    return cur;
}

PointSet k_reduction(const PointSet& ps, int k, Metric metric) {
    KReductionOptions opt;
    opt.metric = metric;
    return k_reduction(ps, k, opt);
}

HPolytope v_to_h(const PointSet& ps, double tol) {
    if (ps.points.empty()) throw std::invalid_argument("v_to_h: empty point set");
    const int d = ps.dim;
    PointSet hull = remove_redundant_vertices(ps, tol);
    FullRankEmbedding fre = full_rank_embedding(hull, tol);
    const int r = fre.rank;
    const int n = (int)hull.points.size();
    const auto& y = fre.embedded.points;

    HPolytope hp;
    hp.dim = d;
    hp.embedding = fre.chart;

    const double facet_tol = 1e-7;
    std::vector<std::pair<Vec, double>> chart_facets;
    auto add_facet = [&](Vec nvec, double bound) {
        for (const auto& f : chart_facets) {
            bool same = std::fabs(f.second - bound) <= 1e-6;
            for (int t = 0; same && t < r; ++t)
                if (std::fabs(f.first[t] - nvec[t]) > 1e-6) same = false;
            if (same) return;
        }
        chart_facets.emplace_back(std::move(nvec), bound);
    };

    if (r == 1) {
        double lo = y[0][0], hi = y[0][0];
        for (const Vec& p : y) {
            lo = std::min(lo, p[0]);
            hi = std::max(hi, p[0]);
        }
        add_facet(Vec{1.0}, hi);
        add_facet(Vec{-1.0}, -lo);
    } else if (r >= 2) {
        std::vector<int> idx(r);
        std::iota(idx.begin(), idx.end(), 0);
        std::uint64_t work = 0;
        while (true) {
            if (++work > 5000000) throw std::runtime_error("v_to_h: facet enumeration too large");
            // hyperplane through the chosen r points, if they span one
            std::vector<Vec> onb;
            bool degenerate = false;
            for (int s = 1; s < r; ++s) {
                Vec dvec = sub(y[idx[s]], y[idx[0]]);
                reorthogonalize(dvec, onb);
                double nn = norm(dvec);
                if (nn <= 1e-9) {
                    degenerate = true;
                    break;
                }
                for (double& x : dvec) x /= nn;
                onb.push_back(std::move(dvec));
            }
            if (!degenerate) {
                Vec normal;
                double best_resid = 0.0;
                for (int t = 0; t < r; ++t) {
                    Vec e(r, 0.0);
                    e[t] = 1.0;
                    reorthogonalize(e, onb);
                    double nn = norm(e);
                    if (nn > best_resid) {
                        best_resid = nn;
                        for (double& x : e) x /= nn;
                        normal = std::move(e);
                    }
                }
                if (best_resid > 1e-9) {
                    double w = dot(normal, y[idx[0]]);
                    double maxv = w, minv = w;
                    for (const Vec& p : y) {
                        double v = dot(normal, p);
                        maxv = std::max(maxv, v);
                        minv = std::min(minv, v);
                    }
                    if (maxv - w <= facet_tol) add_facet(normal, maxv);
                    if (w - minv <= facet_tol) {
                        Vec neg(r);
                        for (int t = 0; t < r; ++t) neg[t] = -normal[t];
                        add_facet(std::move(neg), -minv);
                    }
                }
            }
            int t = r - 1;
            while (t >= 0 && idx[t] == n - r + t) --t;
            if (t < 0) break;
            ++idx[t];
            for (int s = t + 1; s < r; ++s) idx[s] = idx[s - 1] + 1;
        }
    }

    for (const auto& f : chart_facets) {
        HRow row;
        row.coeffs.assign(d, 0.0);
        for (int s = 0; s < r; ++s)
            for (int t = 0; t < d; ++t) row.coeffs[t] += f.first[s] * fre.chart.basis[s][t];
        row.bound = f.second + dot(row.coeffs, fre.chart.origin);
        hp.rows.push_back(std::move(row));
    }

    // Pin the affine hull: every direction orthogonal to both the all-ones
    // vector and the chart basis gets an equality, written as two rows.
    std::vector<Vec> span;
    Vec ones(d, 1.0 / std::sqrt((double)d));
    span.push_back(std::move(ones));
    for (const Vec& b : fre.chart.basis) {
        Vec v = b;
        reorthogonalize(v, span);
        double nn = norm(v);
        if (nn > 1e-6) {
            for (double& x : v) x /= nn;
            span.push_back(std::move(v));
        }
    }
    for (int t = 0; t < d && (int)span.size() < d; ++t) {
        Vec e(d, 0.0);
        e[t] = 1.0;
        reorthogonalize(e, span);
        double nn = norm(e);
        if (nn <= 1e-6) continue;
        for (double& x : e) x /= nn;
        double level = dot(e, fre.chart.origin);
        HRow up, down;
        up.coeffs = e;
        up.bound = level;
        down.coeffs.resize(d);
        for (int s = 0; s < d; ++s) down.coeffs[s] = -e[s];
        down.bound = -level;
        hp.rows.push_back(std::move(up));
        hp.rows.push_back(std::move(down));
        span.push_back(std::move(e));
    }
    return hp;
}

bool satisfies(const HPolytope& hp, const Vec& x, double tol) {
    if ((int)x.size() != hp.dim) return false;
    double s = 0.0;
    for (double v : x) {
        if (!(v >= -tol)) return false;
        s += v;
    }
    if (std::fabs(s - 1.0) > tol) return false;
    for (const HRow& row : hp.rows)
        if (dot(row.coeffs, x) > row.bound + tol) return false;
    return true;
}

PointSet h_to_v(const HPolytope& hp, double tol) {
    const int d = hp.dim;
    if (d < 1) throw std::invalid_argument("h_to_v: dimension must be positive");
    const int m = (int)hp.rows.size();
    for (const HRow& row : hp.rows)
        if ((int)row.coeffs.size() != d)
            throw std::invalid_argument("h_to_v: row dimension mismatch");

    // Feasibility probe with slack variables; classifies an empty system
    // before any enumeration work happens.
    Vec probe_point;
    {
        std::vector<Vec> A(m + 1, Vec(d + m, 0.0));
        Vec b(m + 1);
        for (int i = 0; i < m; ++i) {
            for (int t = 0; t < d; ++t) A[i][t] = hp.rows[i].coeffs[t];
            A[i][d + i] = 1.0;
            b[i] = hp.rows[i].bound;
        }
        for (int t = 0; t < d; ++t) A[m][t] = 1.0;
        b[m] = 1.0;
        lp::Result res = lp::feasibility(A, b, tol);
        if (res.status == lp::Status::Infeasible) {
            lp::Result relaxed = lp::feasibility(A, b, 10.0 * tol);
            throw InfeasibleSystem(relaxed.status != lp::Status::Optimal);
        }
        if (res.status == lp::Status::Optimal)
            probe_point.assign(res.x.begin(), res.x.begin() + d);
    }

    PointSet out;
    out.dim = d;
    auto try_candidate = [&](Vec x) {
        double s = 0.0;
        for (double& v : x) {
            if (v < 0.0 && v >= -tol) v = 0.0;
            s += v;
        }
        if (s > 0.0 && std::fabs(s - 1.0) <= tol)
            for (double& v : x) v /= s;
        if (!satisfies(hp, x, tol)) return;
        for (const Vec& q : out.points)
            if (near_duplicate(x, q, kEpsDup)) return;
        out.points.push_back(std::move(x));
    };

    if (d == 1) {
        try_candidate(Vec{1.0});
    } else {
        // Each vertex solves sum x = 1 together with d-1 active constraints
        // drawn from the rows and the coordinate bounds.
        const int pool = m + d;
        const int pick = d - 1;
        std::vector<int> idx(pick);
        std::iota(idx.begin(), idx.end(), 0);
        std::uint64_t work = 0;
        bool overflow = pool < pick;
        while (!overflow) {
            if (++work > 2000000) throw std::runtime_error("h_to_v: constraint enumeration too large");
            std::vector<Vec> M(d, Vec(d));
            Vec rhs(d);
            M[0].assign(d, 1.0);
            rhs[0] = 1.0;
            for (int s = 0; s < pick; ++s) {
                int c = idx[s];
                if (c < m) {
                    M[s + 1] = hp.rows[c].coeffs;
                    rhs[s + 1] = hp.rows[c].bound;
                } else {
                    M[s + 1].assign(d, 0.0);
                    M[s + 1][c - m] = 1.0;
                    rhs[s + 1] = 0.0;
                }
            }
            if (auto x = solve_linear(std::move(M), std::move(rhs))) try_candidate(std::move(*x));
            int t = pick - 1;
            while (t >= 0 && idx[t] == pool - pick + t) --t;
            if (t < 0) break;
            ++idx[t];
            for (int s = t + 1; s < pick; ++s) idx[s] = idx[s - 1] + 1;
        }
    }

    if (out.points.empty() && !probe_point.empty()) try_candidate(std::move(probe_point));
    if (out.points.empty()) throw InfeasibleSystem(false);
    return remove_redundant_vertices(out, tol);
}

}  // namespace credal
