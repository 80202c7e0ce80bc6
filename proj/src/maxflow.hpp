#pragma once

#include <algorithm>
#include <limits>
#include <queue>
#include <vector>

namespace ellnewton::detail {

// Dinic on integer capacities.
class MaxFlow {
public:
    explicit MaxFlow(int n) : adj_(n), level_(n), it_(n) {}

    int add_edge(int u, int v, long cap) {
        adj_[u].push_back(int(edges_.size()));
        edges_.push_back({v, cap});
        adj_[v].push_back(int(edges_.size()));
        edges_.push_back({u, 0});
        return int(edges_.size()) - 2;
    }

    long run(int s, int t) {
        long total = 0;
        while (bfs(s, t)) {
            std::fill(it_.begin(), it_.end(), 0);
            while (long f = dfs(s, t, std::numeric_limits<long>::max())) total += f;
        }
        return total;
    }

    long flow(int e) const { return edges_[e ^ 1].cap; }

private:
    struct Edge {
        int to;
        long cap;
    };
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> level_;
    std::vector<std::size_t> it_;

    bool bfs(int s, int t) {
        std::fill(level_.begin(), level_.end(), -1);
        std::queue<int> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int e : adj_[u])
                if (edges_[e].cap > 0 && level_[edges_[e].to] < 0) {
                    level_[edges_[e].to] = level_[u] + 1;
                    q.push(edges_[e].to);
                }
        }
        return level_[t] >= 0;
    }

    long dfs(int u, int t, long f) {
        if (u == t) return f;
        for (auto& i = it_[u]; i < adj_[u].size(); ++i) {
            int e = adj_[u][i];
            auto& ed = edges_[e];
            if (ed.cap <= 0 || level_[ed.to] != level_[u] + 1) continue;
            if (long g = dfs(ed.to, t, std::min(f, ed.cap))) {
                ed.cap -= g;
                edges_[e ^ 1].cap += g;
                return g;
            }
        }
        return 0;
    }
};

}  // namespace ellnewton::detail
