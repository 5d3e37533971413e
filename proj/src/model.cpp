#include "credal/model.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace credal {

std::vector<std::vector<int>> Dag::children() const {
    std::vector<std::vector<int>> ch(parents.size());
    for (int v = 0; v < size(); ++v)
        for (int p : parents[v])
            if (p >= 0 && p < size()) ch[p].push_back(v);
    return ch;
}

std::optional<std::vector<int>> Dag::topological_order() const {
    const int n = size();
    std::vector<int> indeg(n, 0);
    for (int v = 0; v < n; ++v) indeg[v] = static_cast<int>(parents[v].size());
    auto ch = children();
    // Min-id first for a deterministic order.
    std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.push(v);
    std::vector<int> order;
    order.reserve(n);
    while (!ready.empty()) {
        int v = ready.top();
        ready.pop();
        order.push_back(v);
        for (int c : ch[v])
            if (--indeg[c] == 0) ready.push(c);
    }
    if (static_cast<int>(order.size()) != n) return std::nullopt;
    return order;
}

namespace {

bool duplicate_within(const Vec& a, const Vec& b, double tol) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
}

}  // namespace

std::vector<std::string> validate_network(const CredalNetwork& net) {
    std::vector<std::string> out;
    auto add = [&out](const std::string& s) { out.push_back(s); };
    const int n = net.size();

    if (net.dag.size() != n) add("dag lists " + std::to_string(net.dag.size()) + " variables, network has " + std::to_string(n));
    if (static_cast<int>(net.tables.size()) != n)
        add("network has " + std::to_string(net.tables.size()) + " tables for " + std::to_string(n) + " variables");

    for (int v = 0; v < n; ++v)
        if (net.cards[v] < 2) add("variable " + std::to_string(v) + ": cardinality " + std::to_string(net.cards[v]) + " < 2");

    for (int v = 0; v < net.dag.size(); ++v) {
        std::vector<int> seen;
        for (int p : net.dag.parents[v]) {
            if (p < 0 || p >= n)
                add("variable " + std::to_string(v) + ": parent id " + std::to_string(p) + " out of range");
            else if (p == v)
                add("variable " + std::to_string(v) + ": self-loop");
            if (std::find(seen.begin(), seen.end(), p) != seen.end())
                add("variable " + std::to_string(v) + ": duplicate parent " + std::to_string(p));
            seen.push_back(p);
        }
    }
    if (net.dag.size() == n && !net.dag.topological_order()) add("graph has a directed cycle");

    for (int i = 0; i < static_cast<int>(net.tables.size()) && i < n; ++i) {
        const auto& t = net.tables[i];
        const std::string loc = "table " + std::to_string(i);
        if (t.child != i) add(loc + ": child is " + std::to_string(t.child) + ", expected " + std::to_string(i));
        if (i < net.dag.size() && t.parents != net.dag.parents[i]) add(loc + ": parent list disagrees with the graph");

        std::int64_t expect = 1;
        bool parents_ok = true;
        for (int p : t.parents) {
            if (p < 0 || p >= n) {
                parents_ok = false;
                break;
            }
            expect *= net.cards[p];
        }
        if (!parents_ok) continue;
        if (static_cast<std::int64_t>(t.sets.size()) != expect)
            add(loc + ": " + std::to_string(t.sets.size()) + " credal sets for " + std::to_string(expect) + " parent configurations");

        const int d = net.cards[i];
        for (size_t c = 0; c < t.sets.size(); ++c) {
            const auto& cs = t.sets[c];
            const std::string sloc = loc + ", config " + std::to_string(c);
            if (cs.dim != d) add(sloc + ": set dimension " + std::to_string(cs.dim) + " != child cardinality " + std::to_string(d));
            if (cs.vertices.empty()) add(sloc + ": empty credal set");
            for (size_t k = 0; k < cs.vertices.size(); ++k) {
                const auto& vx = cs.vertices[k];
                const std::string vloc = sloc + ", vertex " + std::to_string(k);
                if (static_cast<int>(vx.size()) != cs.dim) {
                    add(vloc + ": length " + std::to_string(vx.size()) + " != " + std::to_string(cs.dim));
                    continue;
                }
                double sum = 0.0;
                for (double x : vx) {
                    if (!std::isfinite(x)) add(vloc + ": non-finite entry");
                    if (x < -kEpsNorm) add(vloc + ": negative entry " + std::to_string(x));
                    sum += x;
                }
                if (std::abs(sum - 1.0) > kEpsNorm) {
                    std::ostringstream os;
                    os << vloc << ": |sum-1| = " << std::abs(sum - 1.0) << " exceeds tolerance";
                    add(os.str());
                }
                for (size_t j = 0; j < k; ++j)
                    if (duplicate_within(vx, cs.vertices[j], kEpsDup))
                        add(vloc + ": duplicate of vertex " + std::to_string(j));
            }
        }
    }
    return out;
}

std::int64_t config_index(std::span<const int> states, std::span<const int> cards) {
    if (states.size() != cards.size()) throw std::invalid_argument("config_index: states/cards size mismatch");
    std::int64_t idx = 0;
    for (size_t i = 0; i < states.size(); ++i) {
        if (states[i] < 0 || states[i] >= cards[i])
            throw std::out_of_range("config_index: state " + std::to_string(states[i]) + " out of range for cardinality " +
                                    std::to_string(cards[i]));
        idx = idx * cards[i] + states[i];
    }
    return idx;
}

std::vector<int> config_unindex(std::int64_t index, std::span<const int> cards) {
    std::vector<int> states(cards.size(), 0);
    for (size_t i = cards.size(); i-- > 0;) {
        states[i] = static_cast<int>(index % cards[i]);
        index /= cards[i];
    }
    return states;
}

std::int64_t config_count(std::span<const int> cards) {
    std::int64_t n = 1;
    for (int c : cards) n *= c;
    return n;
}

}  // namespace credal
