#include "credal/inference.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace credal {
namespace {

constexpr std::int64_t kTableCountCap = 1000000;

std::int64_t table_length(const CredalFactor& f) { return config_count(f.cards); }

void validate_query(const CredalNetwork& net, const Query& q) {
    const int n = net.size();
    if (q.target < 0 || q.target >= n) throw std::invalid_argument("query: target id out of range");
    for (const auto& [v, s] : q.evidence) {
        if (v < 0 || v >= n) throw std::invalid_argument("query: evidence id out of range");
        if (s < 0 || s >= net.cards[v]) throw std::invalid_argument("query: evidence state out of range");
        if (v == q.target) throw std::invalid_argument("query: target cannot be observed");
    }
}

void reduce_tables(CredalFactor& f, const ReductionPolicy& policy) {
    PointSet ps;
    ps.dim = (int)table_length(f);
    ps.points = std::move(f.tables);
    if (policy.mode == ReductionPolicy::Mode::KReduce) {
        if (policy.k < 1) throw std::invalid_argument("reduction policy: k must be >= 1");
        f.tables = k_reduction(ps, policy.k, policy.metric).points;
    } else {
        f.tables = remove_redundant_vertices(ps).points;
    }
}

}  // namespace

CredalFactor factor_from_table(const ConditionalCredalTable& t, const std::vector<int>& net_cards) {
    CredalFactor f;
    f.scope = t.parents;
    f.scope.push_back(t.child);
    for (int v : f.scope) {
        if (v < 0 || v >= (int)net_cards.size())
            throw std::invalid_argument("factor_from_table: variable id out of range");
        f.cards.push_back(net_cards[v]);
    }
    const int child_card = net_cards[t.child];
    const std::int64_t nconf = (std::int64_t)t.sets.size();
    std::int64_t count = 1;
    for (const CredalSet& cs : t.sets) {
        if (cs.vertices.empty()) throw std::invalid_argument("factor_from_table: empty credal set");
        count *= (std::int64_t)cs.vertices.size();
        if (count > kTableCountCap) throw std::runtime_error("factor_from_table: selection space too large");
    }
    const std::int64_t tlen = nconf * child_card;
    std::vector<int> choice(nconf, 0);
    f.tables.reserve(count);
    for (;;) {
        Vec table(tlen);
        for (std::int64_t c = 0; c < nconf; ++c) {
            const Vec& vx = t.sets[c].vertices[choice[c]];
            for (int s = 0; s < child_card; ++s) table[c * child_card + s] = vx[s];
        }
        f.tables.push_back(std::move(table));
        std::int64_t i = nconf - 1;
        while (i >= 0) {
            if (++choice[i] < (int)t.sets[i].vertices.size()) break;
            choice[i] = 0;
            --i;
        }
        if (i < 0) break;
    }
    return f;
}

CredalFactor combine(const CredalFactor& f, const CredalFactor& g, const ReductionPolicy& policy) {
    CredalFactor out;
    for (std::size_t i = 0; i < f.scope.size(); ++i)
        for (std::size_t j = 0; j < g.scope.size(); ++j)
            if (f.scope[i] == g.scope[j] && f.cards[i] != g.cards[j])
                throw std::invalid_argument("combine: cardinality mismatch on variable " + std::to_string(f.scope[i]));
    out.scope = f.scope;
    for (std::size_t j = 0; j < g.scope.size(); ++j)
        if (std::find(out.scope.begin(), out.scope.end(), g.scope[j]) == out.scope.end())
            out.scope.push_back(g.scope[j]);
    std::sort(out.scope.begin(), out.scope.end());
    out.cards.resize(out.scope.size());
    for (std::size_t t = 0; t < out.scope.size(); ++t) {
        int v = out.scope[t];
        auto fi = std::find(f.scope.begin(), f.scope.end(), v);
        out.cards[t] = fi != f.scope.end() ? f.cards[fi - f.scope.begin()]
                                           : g.cards[std::find(g.scope.begin(), g.scope.end(), v) - g.scope.begin()];
    }

    // Strides of each union variable inside f's and g's own layouts.
    auto strides_in = [](const CredalFactor& h, const std::vector<int>& scope) {
        std::vector<std::int64_t> st(scope.size(), 0);
        std::vector<std::int64_t> own(h.scope.size());
        std::int64_t acc = 1;
        for (std::size_t i = h.scope.size(); i-- > 0;) {
            own[i] = acc;
            acc *= h.cards[i];
        }
        for (std::size_t t = 0; t < scope.size(); ++t) {
            auto it = std::find(h.scope.begin(), h.scope.end(), scope[t]);
            if (it != h.scope.end()) st[t] = own[it - h.scope.begin()];
        }
        return st;
    };
    const std::vector<std::int64_t> sf = strides_in(f, out.scope);
    const std::vector<std::int64_t> sg = strides_in(g, out.scope);

    const std::int64_t total = config_count(out.cards);
    std::vector<std::int64_t> fidx(total), gidx(total);
    {
        std::vector<int> states(out.scope.size(), 0);
        for (std::int64_t idx = 0; idx < total; ++idx) {
            std::int64_t a = 0, b = 0;
            for (std::size_t t = 0; t < states.size(); ++t) {
                a += states[t] * sf[t];
                b += states[t] * sg[t];
            }
            fidx[idx] = a;
            gidx[idx] = b;
            for (std::size_t t = states.size(); t-- > 0;) {
                if (++states[t] < out.cards[t]) break;
                states[t] = 0;
            }
        }
    }

    const std::int64_t pre = (std::int64_t)f.tables.size() * (std::int64_t)g.tables.size();
    if (pre > kTableCountCap) throw std::runtime_error("combine: table count too large");
    if (policy.mode == ReductionPolicy::Mode::KReduce) {
        if (policy.k < 1) throw std::invalid_argument("reduction policy: k must be >= 1");
        if (pre > (std::int64_t)policy.k * policy.k)
            throw std::logic_error("combine: pre-reduction table count exceeds k^2");
    }
    out.tables.reserve(pre);
    for (const Vec& tf : f.tables)
        for (const Vec& tg : g.tables) {
            Vec t(total);
            for (std::int64_t idx = 0; idx < total; ++idx) t[idx] = tf[fidx[idx]] * tg[gidx[idx]];
            out.tables.push_back(std::move(t));
        }
    reduce_tables(out, policy);
    return out;
}

CredalFactor marginalize_out(const CredalFactor& f, int v) {
    auto it = std::find(f.scope.begin(), f.scope.end(), v);
    if (it == f.scope.end()) throw std::invalid_argument("marginalize_out: variable not in scope");
    const std::size_t pos = it - f.scope.begin();
    CredalFactor out;
    out.scope = f.scope;
    out.cards = f.cards;
    out.scope.erase(out.scope.begin() + pos);
    out.cards.erase(out.cards.begin() + pos);
    const std::int64_t in_len = table_length(f);
    const std::int64_t out_len = config_count(out.cards);
    // in index = prefix * (card_v * suffix_len) + s * suffix_len + suffix
    std::int64_t suffix_len = 1;
    for (std::size_t t = pos + 1; t < f.cards.size(); ++t) suffix_len *= f.cards[t];
    const int card_v = f.cards[pos];
    out.tables.reserve(f.tables.size());
    for (const Vec& tin : f.tables) {
        Vec tout(out_len, 0.0);
        for (std::int64_t idx = 0; idx < in_len; ++idx) {
            const std::int64_t suffix = idx % suffix_len;
            const std::int64_t prefix = idx / (suffix_len * card_v);
            tout[prefix * suffix_len + suffix] += tin[idx];
        }
        out.tables.push_back(std::move(tout));
    }
    return out;
}

CredalFactor restrict_evidence(const CredalFactor& f, int v, int state) {
    auto it = std::find(f.scope.begin(), f.scope.end(), v);
    if (it == f.scope.end()) throw std::invalid_argument("restrict_evidence: variable not in scope");
    const std::size_t pos = it - f.scope.begin();
    if (state < 0 || state >= f.cards[pos]) throw std::invalid_argument("restrict_evidence: state out of range");
    CredalFactor out;
    out.scope = f.scope;
    out.cards = f.cards;
    out.scope.erase(out.scope.begin() + pos);
    out.cards.erase(out.cards.begin() + pos);
    const std::int64_t out_len = config_count(out.cards);
    std::int64_t suffix_len = 1;
    for (std::size_t t = pos + 1; t < f.cards.size(); ++t) suffix_len *= f.cards[t];
    const int card_v = f.cards[pos];
    out.tables.reserve(f.tables.size());
    for (const Vec& tin : f.tables) {
        Vec tout(out_len);
        for (std::int64_t idx = 0; idx < out_len; ++idx) {
            const std::int64_t suffix = idx % suffix_len;
            const std::int64_t prefix = idx / suffix_len;
            tout[idx] = tin[(prefix * card_v + state) * suffix_len + suffix];
        }
        out.tables.push_back(std::move(tout));
    }
    return out;
}

std::vector<int> elimination_order(const CredalNetwork& net, const Query& q) {
    const int n = net.size();
    if (q.target < 0 || q.target >= n) throw std::invalid_argument("elimination_order: target out of range");
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    auto connect = [&](int a, int b) {
        if (a != b) adj[a][b] = adj[b][a] = 1;
    };
    for (const auto& t : net.tables) {
        std::vector<int> clique = t.parents;
        clique.push_back(t.child);
        for (std::size_t i = 0; i < clique.size(); ++i)
            for (std::size_t j = i + 1; j < clique.size(); ++j) connect(clique[i], clique[j]);
    }
    std::vector<char> done(n, 0);
    std::vector<int> order;
    order.reserve(n - 1);
    while ((int)order.size() < n - 1) {
        int best = -1, best_fill = 0, best_deg = 0;
        for (int v = 0; v < n; ++v) {
            if (done[v] || v == q.target) continue;
            std::vector<int> nb;
            for (int u = 0; u < n; ++u)
                if (!done[u] && adj[v][u]) nb.push_back(u);
            int fill = 0;
            for (std::size_t i = 0; i < nb.size(); ++i)
                for (std::size_t j = i + 1; j < nb.size(); ++j)
                    if (!adj[nb[i]][nb[j]]) ++fill;
            const int deg = (int)nb.size();
            if (best < 0 || fill < best_fill || (fill == best_fill && (deg < best_deg || (deg == best_deg && v < best)))) {
                best = v;
                best_fill = fill;
                best_deg = deg;
            }
        }
        std::vector<int> nb;
        for (int u = 0; u < n; ++u)
            if (!done[u] && adj[best][u]) nb.push_back(u);
        for (std::size_t i = 0; i < nb.size(); ++i)
            for (std::size_t j = i + 1; j < nb.size(); ++j) connect(nb[i], nb[j]);
        done[best] = 1;
        order.push_back(best);
    }
    return order;
}

IntervalResult credal_ve(const CredalNetwork& net, const Query& q, const ReductionPolicy& policy) {
    const auto t0 = std::chrono::steady_clock::now();
    validate_query(net, q);
    if (policy.mode == ReductionPolicy::Mode::KReduce && policy.k < 1)
        throw std::invalid_argument("reduction policy: k must be >= 1");

    std::vector<CredalFactor> factors;
    factors.reserve(net.size());
    for (const auto& t : net.tables) {
        CredalFactor f = factor_from_table(t, net.cards);
        for (const auto& [v, s] : q.evidence)
            if (std::find(f.scope.begin(), f.scope.end(), v) != f.scope.end()) f = restrict_evidence(f, v, s);
        reduce_tables(f, policy);
        factors.push_back(std::move(f));
    }

    for (int v : elimination_order(net, q)) {
        std::vector<CredalFactor> bucket;
        for (std::size_t i = 0; i < factors.size();) {
            if (std::find(factors[i].scope.begin(), factors[i].scope.end(), v) != factors[i].scope.end()) {
                bucket.push_back(std::move(factors[i]));
                factors.erase(factors.begin() + i);
            } else {
                ++i;
            }
        }
        if (bucket.empty()) continue;
        CredalFactor cur = std::move(bucket.front());
        for (std::size_t i = 1; i < bucket.size(); ++i) cur = combine(cur, bucket[i], policy);
        factors.push_back(marginalize_out(cur, v));
    }

    CredalFactor fin = std::move(factors.front());
    for (std::size_t i = 1; i < factors.size(); ++i) fin = combine(fin, factors[i], policy);
    if (fin.scope != std::vector<int>{q.target})
        throw std::logic_error("credal_ve: final factor scope is not the target");

    const int card_t = net.cards[q.target];
    IntervalResult out;
    out.lower.assign(card_t, std::numeric_limits<double>::infinity());
    out.upper.assign(card_t, -std::numeric_limits<double>::infinity());
    const bool marginal = q.evidence.empty();
    for (const Vec& table : fin.tables) {
        double sum = 0.0;
        for (double x : table) sum += x;
        if (marginal) {
            if (std::fabs(sum - 1.0) > 1e-6) throw std::logic_error("credal_ve: final marginal table is not normalized");
            for (int s = 0; s < card_t; ++s) {
                out.lower[s] = std::min(out.lower[s], table[s]);
                out.upper[s] = std::max(out.upper[s], table[s]);
            }
        } else {
            if (sum <= kEpsZero) {
                ++out.dropped_tables;
                continue;
            }
            for (int s = 0; s < card_t; ++s) {
                const double val = table[s] / sum;
                out.lower[s] = std::min(out.lower[s], val);
                out.upper[s] = std::max(out.upper[s], val);
            }
        }
    }
    if (!marginal && out.dropped_tables == (int)fin.tables.size()) throw ZeroEvidenceError();
    for (int s = 0; s < card_t; ++s) {
        out.lower[s] = std::clamp(out.lower[s], 0.0, 1.0);
        out.upper[s] = std::clamp(out.upper[s], 0.0, 1.0);
    }
    out.method = policy.mode == ReductionPolicy::Mode::KReduce ? "k" + std::to_string(policy.k) : "exact";
    out.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

IntervalResult brute_force_oracle(const CredalNetwork& net, const Query& q, std::int64_t cap) {
    const auto t0 = std::chrono::steady_clock::now();
    validate_query(net, q);
    const int n = net.size();

    // One selection slot per (variable, parent configuration).
    std::vector<int> slot_base(n, 0);
    std::vector<const std::vector<Vec>*> slot_verts;
    std::int64_t selections = 1;
    for (int v = 0; v < n; ++v) {
        slot_base[v] = (int)slot_verts.size();
        for (const CredalSet& cs : net.tables[v].sets) {
            if (cs.vertices.empty()) throw std::invalid_argument("brute_force_oracle: empty credal set");
            slot_verts.push_back(&cs.vertices);
            selections *= (std::int64_t)cs.vertices.size();
            if (selections > cap) throw std::runtime_error("brute_force_oracle: selection space exceeds cap");
        }
    }
    const std::int64_t nconf = config_count(net.cards);
    if (nconf > cap) throw std::runtime_error("brute_force_oracle: joint space exceeds cap");

    // Precompute, per evidence-consistent joint configuration, the (slot,
    // state) pair of every variable plus the target state.
    std::vector<std::vector<int>> pcards(n);
    for (int v = 0; v < n; ++v)
        for (int p : net.tables[v].parents) pcards[v].push_back(net.cards[p]);
    struct Entry {
        int target_state;
        std::vector<std::pair<int, int>> lookup;  // (slot, child state)
    };
    std::vector<Entry> entries;
    for (std::int64_t cfg = 0; cfg < nconf; ++cfg) {
        std::vector<int> states = config_unindex(cfg, net.cards);
        bool consistent = true;
        for (const auto& [v, s] : q.evidence)
            if (states[v] != s) {
                consistent = false;
                break;
            }
        if (!consistent) continue;
        Entry e;
        e.target_state = states[q.target];
        e.lookup.reserve(n);
        for (int v = 0; v < n; ++v) {
            std::vector<int> pstates;
            pstates.reserve(pcards[v].size());
            for (int p : net.tables[v].parents) pstates.push_back(states[p]);
            const std::int64_t pc = config_index(pstates, pcards[v]);
            e.lookup.emplace_back(slot_base[v] + (int)pc, states[v]);
        }
        entries.push_back(std::move(e));
    }

    const int card_t = net.cards[q.target];
    IntervalResult out;
    out.lower.assign(card_t, std::numeric_limits<double>::infinity());
    out.upper.assign(card_t, -std::numeric_limits<double>::infinity());
    int survived = 0;
    std::vector<int> choice(slot_verts.size(), 0);
    Vec post(card_t);
    for (;;) {
        std::fill(post.begin(), post.end(), 0.0);
        for (const Entry& e : entries) {
            double p = 1.0;
            for (const auto& [slot, state] : e.lookup) p *= (*slot_verts[slot])[choice[slot]][state];
            post[e.target_state] += p;
        }
        double tot = 0.0;
        for (double x : post) tot += x;
        if (tot > kEpsZero) {
            ++survived;
            for (int s = 0; s < card_t; ++s) {
                const double val = post[s] / tot;
                out.lower[s] = std::min(out.lower[s], val);
                out.upper[s] = std::max(out.upper[s], val);
            }
        } else {
            ++out.dropped_tables;
        }
        std::int64_t i = (std::int64_t)choice.size() - 1;
        while (i >= 0) {
            if (++choice[i] < (int)slot_verts[i]->size()) break;
            choice[i] = 0;
            --i;
        }
        if (i < 0) break;
    }
    if (survived == 0) throw ZeroEvidenceError();
    out.method = "oracle";
    out.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace credal
