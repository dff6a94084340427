#include "mdag/graph.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>

namespace mdag {

std::string to_string(VariableStatus s) {
    switch (s) {
        case VariableStatus::complete: return "complete";
        case VariableStatus::incomplete: return "incomplete";
        case VariableStatus::unmeasured: return "unmeasured";
    }
    return "?";
}

std::string to_string(VariableRole r) {
    switch (r) {
        case VariableRole::exposure: return "exposure";
        case VariableRole::outcome: return "outcome";
        case VariableRole::covariate: return "covariate";
        case VariableRole::auxiliary: return "auxiliary";
        case VariableRole::other: return "other";
    }
    return "?";
}

namespace {

bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    }
    return true;
}

// "R[X]" -> ("X", true); anything else -> (text, false).
std::pair<std::string, bool> split_endpoint(const std::string& text) {
    if (text.size() > 3 && text.rfind("R[", 0) == 0 && text.back() == ']') {
        return {text.substr(2, text.size() - 3), true};
    }
    return {text, false};
}

}  // namespace

MDag MDag::build(std::string name,
                 std::vector<VariableDecl> variables,
                 std::vector<EdgeDecl> edges,
                 AnalysisSpec analysis) {
    MDag g;
    g.name_ = std::move(name);

    // Substantive nodes.
    for (const auto& decl : variables) {
        if (!valid_identifier(decl.name)) {
            throw GraphError("invalid variable name '" + decl.name + "'");
        }
        if (g.by_name_.count(decl.name)) {
            throw GraphError("duplicate variable '" + decl.name + "'");
        }
        Node n;
        n.name = decl.name;
        n.kind = NodeKind::substantive;
        n.status = decl.status;
        g.by_name_.emplace(n.name, static_cast<std::uint32_t>(g.nodes_.size()));
        g.nodes_.push_back(std::move(n));
    }

    // Analysis spec resolution and role assignment.
    auto resolve = [&](const std::string& nm, const char* what) -> NodeId {
        auto it = g.by_name_.find(nm);
        if (it == g.by_name_.end()) {
            throw GraphError(std::string(what) + " '" + nm + "' is not a declared variable");
        }
        return NodeId{it->second};
    };
    if (analysis.exposure.empty() || analysis.outcome.empty()) {
        throw GraphError("analysis target must name an outcome and an exposure");
    }
    g.exposure_ = resolve(analysis.exposure, "exposure");
    g.outcome_ = resolve(analysis.outcome, "outcome");
    if (g.exposure_ == g.outcome_) {
        throw GraphError("exposure and outcome must be distinct variables");
    }
    auto assign_role = [&](NodeId v, VariableRole r) {
        Node& n = g.nodes_[v.value];
        if (n.role != VariableRole::other) {
            throw GraphError("variable '" + n.name + "' appears in more than one analysis role");
        }
        n.role = r;
    };
    assign_role(g.exposure_, VariableRole::exposure);
    assign_role(g.outcome_, VariableRole::outcome);
    for (const auto& nm : analysis.covariates) {
        NodeId v = resolve(nm, "covariate");
        assign_role(v, VariableRole::covariate);
        g.covariates_.push_back(v);
    }
    for (const auto& nm : analysis.auxiliaries) {
        NodeId v = resolve(nm, "auxiliary");
        assign_role(v, VariableRole::auxiliary);
        g.auxiliaries_.push_back(v);
    }

    // Unmeasured variables can never be conditioned on or imputed, so they
    // may not hold an analysis-model or auxiliary role.
    for (const auto& n : g.nodes_) {
        if (n.status == VariableStatus::unmeasured && n.role != VariableRole::other) {
            throw GraphError("unmeasured variable '" + n.name + "' cannot be " +
                             to_string(n.role));
        }
    }
    // Declared role annotations must agree with the analysis spec.
    for (const auto& decl : variables) {
        if (!decl.declared_role) continue;
        const Node& n = g.nodes_[g.by_name_.at(decl.name)];
        if (*decl.declared_role != n.role) {
            throw GraphError("variable '" + decl.name + "' declared as " +
                             to_string(*decl.declared_role) + " but the analysis target makes it " +
                             to_string(n.role));
        }
    }

    // Synthesize a response indicator for every measured incomplete variable,
    // even when no edge touches it.
    for (std::uint32_t i = 0; i < g.nodes_.size(); ++i) {
        if (g.nodes_[i].kind != NodeKind::substantive) continue;
        if (g.nodes_[i].status != VariableStatus::incomplete) continue;
        Node r;
        r.name = "R[" + g.nodes_[i].name + "]";
        r.kind = NodeKind::response_indicator;
        r.owner = NodeId{i};
        NodeId rid{static_cast<std::uint32_t>(g.nodes_.size())};
        g.nodes_[i].indicator = rid;
        g.by_name_.emplace(r.name, rid.value);
        g.nodes_.push_back(std::move(r));
    }

    // Edges.
    auto resolve_endpoint = [&](const std::string& text) -> NodeId {
        auto [varname, indicator] = split_endpoint(text);
        auto it = g.by_name_.find(varname);
        if (it == g.by_name_.end()) {
            throw GraphError("unknown variable '" + varname + "' in edge endpoint");
        }
        NodeId v{it->second};
        if (!indicator) return v;
        const Node& owner = g.nodes_[v.value];
        if (owner.kind != NodeKind::substantive) {
            throw GraphError("malformed endpoint '" + text + "'");
        }
        if (owner.status != VariableStatus::incomplete) {
            throw GraphError("variable '" + varname + "' is " + to_string(owner.status) +
                             " and has no response indicator");
        }
        return owner.indicator;
    };
    std::vector<std::pair<std::uint32_t, std::uint32_t>> seen_edges;
    for (const auto& e : edges) {
        NodeId from = resolve_endpoint(e.from);
        NodeId to = resolve_endpoint(e.to);
        if (from == to) {
            throw GraphError("self-edge on '" + g.nodes_[from.value].name + "'");
        }
        if (g.nodes_[from.value].kind == NodeKind::response_indicator) {
            throw GraphError("edge out of response indicator '" + g.nodes_[from.value].name +
                             "': indicators are sinks");
        }
        auto key = std::make_pair(from.value, to.value);
        if (std::find(seen_edges.begin(), seen_edges.end(), key) != seen_edges.end()) {
            throw GraphError("duplicate edge " + g.nodes_[from.value].name + " -> " +
                             g.nodes_[to.value].name);
        }
        seen_edges.push_back(key);
        g.nodes_[from.value].children.push_back(to);
        g.nodes_[to.value].parents.push_back(from);
    }
    for (auto& n : g.nodes_) {
        std::sort(n.parents.begin(), n.parents.end());
        std::sort(n.children.begin(), n.children.end());
    }

    // Acyclicity via Kahn's algorithm; on failure, report one cycle by name.
    std::vector<std::uint32_t> indeg(g.nodes_.size(), 0);
    for (std::uint32_t i = 0; i < g.nodes_.size(); ++i) {
        indeg[i] = static_cast<std::uint32_t>(g.nodes_[i].parents.size());
    }
    std::deque<std::uint32_t> ready;
    for (std::uint32_t i = 0; i < g.nodes_.size(); ++i) {
        if (indeg[i] == 0) ready.push_back(i);
    }
    while (!ready.empty()) {
        std::uint32_t v = ready.front();
        ready.pop_front();
        g.topo_.push_back(NodeId{v});
        for (NodeId ch : g.nodes_[v].children) {
            if (--indeg[ch.value] == 0) ready.push_back(ch.value);
        }
    }
    if (g.topo_.size() != g.nodes_.size()) {
        // Walk parents from any leftover node until a repeat names the cycle.
        std::uint32_t start = 0;
        while (indeg[start] == 0) ++start;
        std::vector<std::uint32_t> trail{start};
        std::uint32_t cur = start;
        for (;;) {
            std::uint32_t next = UINT32_MAX;
            for (NodeId p : g.nodes_[cur].parents) {
                if (indeg[p.value] > 0) { next = p.value; break; }
            }
            auto it = std::find(trail.begin(), trail.end(), next);
            if (it != trail.end()) {
                std::ostringstream msg;
                msg << "cycle detected: ";
                for (auto jt = it; jt != trail.end(); ++jt) {
                    msg << g.nodes_[*jt].name << " <- ";
                }
                msg << g.nodes_[*it].name;
                throw GraphError(msg.str());
            }
            trail.push_back(next);
            cur = next;
        }
    }

    return g;
}

const MDag::Node& MDag::at(NodeId v) const {
    check_node(v);
    return nodes_[v.value];
}

void MDag::check_node(NodeId v) const {
    if (!v.valid() || v.value >= nodes_.size()) {
        throw GraphError("unknown node id");
    }
}

NodeId MDag::node(std::string_view display_name) const {
    auto v = find_node(display_name);
    if (!v) throw GraphError("unknown node '" + std::string(display_name) + "'");
    return *v;
}

std::optional<NodeId> MDag::find_node(std::string_view display_name) const {
    auto it = by_name_.find(std::string(display_name));
    if (it == by_name_.end()) return std::nullopt;
    return NodeId{it->second};
}

const std::string& MDag::display_name(NodeId v) const { return at(v).name; }

bool MDag::is_indicator(NodeId v) const { return at(v).kind == NodeKind::response_indicator; }

NodeId MDag::indicator_owner(NodeId v) const {
    const Node& n = at(v);
    if (n.kind != NodeKind::response_indicator) {
        throw GraphError("'" + n.name + "' is not a response indicator");
    }
    return n.owner;
}

std::optional<NodeId> MDag::indicator_of(NodeId v) const {
    const Node& n = at(v);
    if (n.indicator.valid()) return n.indicator;
    return std::nullopt;
}

VariableStatus MDag::status(NodeId v) const { return at(v).status; }
VariableRole MDag::role(NodeId v) const { return at(v).role; }

const std::vector<NodeId>& MDag::parents(NodeId v) const { return at(v).parents; }
const std::vector<NodeId>& MDag::children(NodeId v) const { return at(v).children; }

namespace {

std::vector<NodeId> closure(const MDag& g, NodeId v,
                            const std::vector<NodeId>& (MDag::*step)(NodeId) const) {
    std::vector<bool> seen(g.node_count(), false);
    std::vector<NodeId> stack{v};
    std::vector<NodeId> out;
    while (!stack.empty()) {
        NodeId cur = stack.back();
        stack.pop_back();
        for (NodeId next : (g.*step)(cur)) {
            if (!seen[next.value]) {
                seen[next.value] = true;
                out.push_back(next);
                stack.push_back(next);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<NodeId> MDag::ancestors(NodeId v) const {
    check_node(v);
    return closure(*this, v, &MDag::parents);
}

std::vector<NodeId> MDag::descendants(NodeId v) const {
    check_node(v);
    return closure(*this, v, &MDag::children);
}

bool MDag::has_edge(NodeId from, NodeId to) const {
    const auto& ch = at(from).children;
    check_node(to);
    return std::binary_search(ch.begin(), ch.end(), to);
}

std::vector<std::pair<NodeId, NodeId>> MDag::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
        for (NodeId ch : nodes_[i].children) out.emplace_back(NodeId{i}, ch);
    }
    std::sort(out.begin(), out.end(), [this](const auto& a, const auto& b) {
        const auto& an = nodes_[a.first.value].name;
        const auto& bn = nodes_[b.first.value].name;
        if (an != bn) return an < bn;
        return nodes_[a.second.value].name < nodes_[b.second.value].name;
    });
    return out;
}

namespace {

// Selection results are id-sorted so the set-algebra helpers can consume
// them directly; rendering code re-sorts by display name.
std::vector<NodeId> select_sorted(const MDag& g, bool (*pred)(const MDag&, NodeId)) {
    std::vector<NodeId> out;
    for (std::uint32_t i = 0; i < g.node_count(); ++i) {
        NodeId v{i};
        if (pred(g, v)) out.push_back(v);
    }
    return out;
}

}  // namespace

std::vector<NodeId> MDag::substantive() const {
    return select_sorted(*this, [](const MDag& g, NodeId v) { return !g.is_indicator(v); });
}

std::vector<NodeId> MDag::complete_substantive() const {
    return select_sorted(*this, [](const MDag& g, NodeId v) {
        return !g.is_indicator(v) && g.status(v) == VariableStatus::complete;
    });
}

std::vector<NodeId> MDag::measured_incomplete() const {
    return select_sorted(*this, [](const MDag& g, NodeId v) {
        return !g.is_indicator(v) && g.status(v) == VariableStatus::incomplete;
    });
}

std::vector<NodeId> MDag::unmeasured() const {
    return select_sorted(*this, [](const MDag& g, NodeId v) {
        return !g.is_indicator(v) && g.status(v) == VariableStatus::unmeasured;
    });
}

std::vector<NodeId> MDag::response_indicators() const {
    return select_sorted(*this, [](const MDag& g, NodeId v) { return g.is_indicator(v); });
}

std::vector<NodeId> MDag::analysis_model_variables() const {
    std::vector<NodeId> out{exposure_, outcome_};
    out.insert(out.end(), covariates_.begin(), covariates_.end());
    return sorted_unique(std::move(out));
}

bool operator==(const MDag& a, const MDag& b) {
    if (a.name_ != b.name_) return false;
    auto vars = [](const MDag& g) {
        std::vector<std::tuple<std::string, VariableStatus, VariableRole>> v;
        for (const auto& n : g.nodes_) {
            if (n.kind == MDag::NodeKind::substantive) v.emplace_back(n.name, n.status, n.role);
        }
        std::sort(v.begin(), v.end());
        return v;
    };
    if (vars(a) != vars(b)) return false;
    auto edge_names = [](const MDag& g) {
        std::vector<std::pair<std::string, std::string>> v;
        for (auto [from, to] : g.edges()) {
            v.emplace_back(g.display_name(from), g.display_name(to));
        }
        return v;
    };
    if (edge_names(a) != edge_names(b)) return false;
    auto canon_analysis = [](const MDag& g) {
        AnalysisSpec s = g.analysis_;
        std::sort(s.covariates.begin(), s.covariates.end());
        std::sort(s.auxiliaries.begin(), s.auxiliaries.end());
        return std::make_tuple(s.exposure, s.outcome, s.covariates, s.auxiliaries);
    };
    return canon_analysis(a) == canon_analysis(b);
}

bool contains(const std::vector<NodeId>& sorted, NodeId v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
}

std::vector<NodeId> sorted_unique(std::vector<NodeId> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<NodeId> set_union(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
    std::vector<NodeId> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return sorted_unique(std::move(out));
}

std::vector<NodeId> set_difference(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
    std::vector<NodeId> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<NodeId> set_intersection(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
    std::vector<NodeId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<NodeId> by_display_name(const MDag& g, std::vector<NodeId> v) {
    std::sort(v.begin(), v.end(), [&g](NodeId x, NodeId y) {
        return g.display_name(x) < g.display_name(y);
    });
    return v;
}

}  // namespace mdag
