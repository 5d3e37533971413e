#include "credal/preprocess.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>

#include "credal/geometry.hpp"

namespace credal {

CredalSet merge_states(const CredalSet& set, int kept_state) {
    if (kept_state < 0 || kept_state >= set.dim)
        throw std::invalid_argument("merge_states: state " + std::to_string(kept_state) + " out of range");
    PointSet mapped;
    mapped.dim = 2;
    mapped.points.reserve(set.vertices.size());
    for (const Vec& v : set.vertices) {
        double p = v[kept_state];
        mapped.points.push_back({p, 1.0 - p});
    }
    PointSet hull = remove_redundant_vertices(mapped);
    CredalSet out;
    out.dim = 2;
    out.vertices = std::move(hull.points);
    return out;
}

RequisiteResult requisite_graph(const CredalNetwork& net, const Query& query) {
    const int n = net.size();
    if (query.target < 0 || query.target >= n)
        throw std::invalid_argument("requisite_graph: target id out of range");
    std::vector<int> ev_state(n, -1);
    for (const auto& [v, s] : query.evidence) {
        if (v < 0 || v >= n) throw std::invalid_argument("requisite_graph: evidence id out of range");
        if (s < 0 || s >= net.cards[v])
            throw std::invalid_argument("requisite_graph: evidence state out of range for variable " + std::to_string(v));
        if (v == query.target) throw std::invalid_argument("requisite_graph: target cannot be observed");
        ev_state[v] = s;
    }

    std::vector<char> alive(n, 1);
    std::vector<int> cards = net.cards;

    // Drop barren leaves until a fixpoint: unobserved non-targets without
    // live children contribute nothing to the query.
    {
        bool changed = true;
        while (changed) {
            changed = false;
            std::vector<int> live_children(n, 0);
            for (int v = 0; v < n; ++v) {
                if (!alive[v]) continue;
                for (int p : net.dag.parents[v])
                    if (alive[p]) ++live_children[p];
            }
            for (int v = 0; v < n; ++v) {
                if (!alive[v] || v == query.target || ev_state[v] >= 0) continue;
                if (live_children[v] == 0) {
                    alive[v] = 0;
                    changed = true;
                }
            }
        }
    }

    struct WTable {
        std::vector<int> parents;
        std::vector<CredalSet> sets;
    };
    std::vector<WTable> work(n);
    for (int v = 0; v < n; ++v) {
        if (!alive[v]) continue;
        work[v].parents = net.tables[v].parents;
        work[v].sets = net.tables[v].sets;
    }

    // Cut arcs leaving observed variables: each child keeps only the table
    // slice matching the observed parent states.
    for (int v = 0; v < n; ++v) {
        if (!alive[v]) continue;
        const auto& oldpar = work[v].parents;
        bool has_observed = std::any_of(oldpar.begin(), oldpar.end(), [&](int p) { return ev_state[p] >= 0; });
        if (!has_observed) continue;
        std::vector<int> newpar, newcards, oldcards;
        for (int p : oldpar) oldcards.push_back(cards[p]);
        for (int p : oldpar)
            if (ev_state[p] < 0) {
                newpar.push_back(p);
                newcards.push_back(cards[p]);
            }
        std::vector<CredalSet> newsets(config_count(newcards));
        for (std::int64_t idx = 0; idx < (std::int64_t)newsets.size(); ++idx) {
            std::vector<int> newstates = config_unindex(idx, newcards);
            std::vector<int> full(oldpar.size());
            int next = 0;
            for (std::size_t t = 0; t < oldpar.size(); ++t)
                full[t] = ev_state[oldpar[t]] >= 0 ? ev_state[oldpar[t]] : newstates[next++];
            newsets[idx] = work[v].sets[config_index(full, oldcards)];
        }
        work[v].parents = std::move(newpar);
        work[v].sets = std::move(newsets);
    }

    // Binarize observed variables with three or more states: observation
    // versus its negation (the summed mass of the other states). The
    // observed state becomes state 0.
    for (int v = 0; v < n; ++v) {
        if (!alive[v] || ev_state[v] < 0 || cards[v] < 3) continue;
        for (CredalSet& cs : work[v].sets) {
            PointSet mapped;
            mapped.dim = 2;
            mapped.points.reserve(cs.vertices.size());
            for (const Vec& vx : cs.vertices) {
                double rest = 0.0;
                for (int s = 0; s < cs.dim; ++s)
                    if (s != ev_state[v]) rest += vx[s];
                mapped.points.push_back({vx[ev_state[v]], rest});
            }
            PointSet hull = remove_redundant_vertices(mapped);
            cs.dim = 2;
            cs.vertices = std::move(hull.points);
        }
        cards[v] = 2;
        ev_state[v] = 0;
    }

    // Keep the connected component of the target in the cut graph.
    {
        std::vector<std::vector<int>> adj(n);
        for (int v = 0; v < n; ++v) {
            if (!alive[v]) continue;
            for (int p : work[v].parents) {
                adj[v].push_back(p);
                adj[p].push_back(v);
            }
        }
        std::vector<char> reached(n, 0);
        std::queue<int> bfs;
        bfs.push(query.target);
        reached[query.target] = 1;
        while (!bfs.empty()) {
            int v = bfs.front();
            bfs.pop();
            for (int u : adj[v])
                if (alive[u] && !reached[u]) {
                    reached[u] = 1;
                    bfs.push(u);
                }
        }
        for (int v = 0; v < n; ++v)
            if (!reached[v]) alive[v] = 0;
    }

    RequisiteResult out;
    out.var_map.assign(n, -1);
    for (int v = 0; v < n; ++v)
        if (alive[v]) {
            out.var_map[v] = (int)out.new_to_old.size();
            out.new_to_old.push_back(v);
        }
    const int m = (int)out.new_to_old.size();
    out.reduced.cards.resize(m);
    out.reduced.dag.parents.resize(m);
    out.reduced.tables.resize(m);
    for (int id = 0; id < m; ++id) {
        int v = out.new_to_old[id];
        out.reduced.cards[id] = cards[v];
        std::vector<int> par;
        par.reserve(work[v].parents.size());
        for (int p : work[v].parents) par.push_back(out.var_map[p]);
        out.reduced.dag.parents[id] = par;
        out.reduced.tables[id].child = id;
        out.reduced.tables[id].parents = std::move(par);
        out.reduced.tables[id].sets = std::move(work[v].sets);
    }
    out.query.target = out.var_map[query.target];
    for (const auto& [v, s] : query.evidence) {
        if (out.var_map[v] < 0) {
            ++out.dropped_evidence;
            continue;
        }
        out.query.evidence[out.var_map[v]] = ev_state[v];
    }
    return out;
}

}  // namespace credal
