#include "mdag/dsep.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace mdag {

std::string to_string(TripleKind k) {
    switch (k) {
        case TripleKind::chain: return "chain";
        case TripleKind::fork: return "fork";
        case TripleKind::collider: return "collider";
    }
    return "?";
}

namespace {

// c plus every ancestor of c: the set that opens colliders.
std::vector<bool> collider_openers(const MDag& g, const std::vector<NodeId>& c) {
    std::vector<bool> open(g.node_count(), false);
    std::vector<NodeId> stack;
    for (NodeId v : c) {
        if (!open[v.value]) {
            open[v.value] = true;
            stack.push_back(v);
        }
    }
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (NodeId p : g.parents(v)) {
            if (!open[p.value]) {
                open[p.value] = true;
                stack.push_back(p);
            }
        }
    }
    return open;
}

}  // namespace

bool d_separated(const MDag& g,
                 const std::vector<NodeId>& a,
                 const std::vector<NodeId>& b,
                 const std::vector<NodeId>& c) {
    auto check_all = [&g](const std::vector<NodeId>& v) {
        for (NodeId x : v) {
            (void)g.display_name(x);  // throws on unknown node
        }
    };
    check_all(a);
    check_all(b);
    check_all(c);
    for (NodeId x : a) {
        for (NodeId y : b) {
            if (x == y) throw GraphError("d_separated: endpoint sets must be disjoint");
        }
    }

    std::vector<bool> in_c(g.node_count(), false);
    for (NodeId v : c) in_c[v.value] = true;

    // Conditioned endpoints are separated from everything by convention.
    std::vector<NodeId> sources, targets;
    for (NodeId v : a) {
        if (!in_c[v.value]) sources.push_back(v);
    }
    for (NodeId v : b) {
        if (!in_c[v.value]) targets.push_back(v);
    }
    if (sources.empty() || targets.empty()) return true;

    std::vector<bool> is_target(g.node_count(), false);
    for (NodeId v : targets) is_target[v.value] = true;

    const std::vector<bool> anc_c = collider_openers(g, c);

    // Bayes-ball reachability over (node, direction) states. "up" means the
    // trail arrived from a child, "down" from a parent.
    enum Dir : int { up = 0, down = 1 };
    std::vector<bool> visited(g.node_count() * 2, false);
    std::deque<std::pair<NodeId, int>> queue;
    for (NodeId s : sources) queue.emplace_back(s, up);

    while (!queue.empty()) {
        auto [v, dir] = queue.front();
        queue.pop_front();
        std::size_t key = v.value * 2 + dir;
        if (visited[key]) continue;
        visited[key] = true;

        if (!in_c[v.value] && is_target[v.value]) return false;

        if (dir == up && !in_c[v.value]) {
            for (NodeId p : g.parents(v)) queue.emplace_back(p, up);
            for (NodeId ch : g.children(v)) queue.emplace_back(ch, down);
        } else if (dir == down) {
            if (!in_c[v.value]) {
                for (NodeId ch : g.children(v)) queue.emplace_back(ch, down);
            }
            if (anc_c[v.value]) {
                for (NodeId p : g.parents(v)) queue.emplace_back(p, up);
            }
        }
    }
    return true;
}

namespace {

struct PathSearch {
    const MDag& g;
    std::vector<bool> in_c;
    std::vector<bool> anc_c;
    NodeId target;
    std::size_t max_paths;
    std::vector<PathWitness> found;
    bool truncated = false;

    std::vector<NodeId> nodes;
    std::vector<bool> forward;
    std::vector<bool> on_path;

    // Neighbors in skeleton order: parents then children, each id-sorted,
    // de-duplicated against the path so far.
    void dfs(NodeId v) {
        if (truncated) return;
        if (v == target) {
            emit();
            return;
        }
        auto step = [&](NodeId next, bool fwd) {
            if (truncated || on_path[next.value]) return;
            nodes.push_back(next);
            forward.push_back(fwd);
            on_path[next.value] = true;
            dfs(next);
            on_path[next.value] = false;
            nodes.pop_back();
            forward.pop_back();
        };
        for (NodeId p : g.parents(v)) step(p, false);
        for (NodeId ch : g.children(v)) step(ch, true);
    }

    void emit() {
        PathWitness w;
        w.nodes = nodes;
        w.forward = forward;
        w.open = true;
        for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
            bool into_prev = forward[i - 1];   // nodes[i-1] -> nodes[i]
            bool out_next = forward[i];        // nodes[i] -> nodes[i+1]
            TripleKind kind;
            if (into_prev && !out_next) {
                kind = TripleKind::collider;
            } else if (!into_prev && out_next) {
                kind = TripleKind::fork;
            } else {
                kind = TripleKind::chain;
            }
            bool open = kind == TripleKind::collider ? anc_c[nodes[i].value]
                                                     : !in_c[nodes[i].value];
            w.inner.push_back({nodes[i], kind, open});
            if (!open) w.open = false;
        }
        if (!w.open) return;
        if (found.size() == max_paths) {
            truncated = true;
            return;
        }
        found.push_back(std::move(w));
    }
};

}  // namespace

PathWitnessList open_paths(const MDag& g, NodeId a, NodeId b,
                           const std::vector<NodeId>& c, std::size_t max_paths) {
    (void)g.display_name(a);
    (void)g.display_name(b);
    for (NodeId v : c) (void)g.display_name(v);
    if (a == b) throw GraphError("open_paths: endpoints must differ");

    PathSearch search{g, std::vector<bool>(g.node_count(), false),
                      collider_openers(g, c), b, max_paths};
    for (NodeId v : c) search.in_c[v.value] = true;
    // Conditioned endpoints are separated by convention.
    if (search.in_c[a.value] || search.in_c[b.value]) return {};

    search.on_path.assign(g.node_count(), false);
    search.on_path[a.value] = true;
    search.nodes.push_back(a);
    search.dfs(a);
    return {std::move(search.found), search.truncated};
}

std::optional<PathWitness> shortest_open_path(const MDag& g,
                                              const std::vector<NodeId>& from,
                                              const std::vector<NodeId>& to,
                                              const std::vector<NodeId>& c) {
    std::optional<PathWitness> best;
    auto render_key = [&g](const PathWitness& w) {
        std::vector<std::string> names;
        names.reserve(w.nodes.size());
        for (NodeId v : w.nodes) names.push_back(g.display_name(v));
        return names;
    };
    for (NodeId s : from) {
        for (NodeId t : to) {
            if (s == t) continue;
            PathWitnessList list = open_paths(g, s, t, c, 1024);
            for (auto& w : list.paths) {
                if (!best || w.length() < best->length() ||
                    (w.length() == best->length() && render_key(w) < render_key(*best))) {
                    best = std::move(w);
                }
            }
        }
    }
    return best;
}

std::string render_path(const MDag& g, const PathWitness& w) {
    auto node_text = [&g](NodeId v) {
        if (g.is_indicator(v)) {
            return "R_" + g.display_name(g.indicator_owner(v));
        }
        return g.display_name(v);
    };
    std::ostringstream out;
    for (std::size_t i = 0; i < w.nodes.size(); ++i) {
        if (i > 0) out << (w.forward[i - 1] ? " -> " : " <- ");
        out << node_text(w.nodes[i]);
    }
    return out.str();
}

}  // namespace mdag
