#ifndef MDAG_GRAPH_HPP
#define MDAG_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mdag {

enum class VariableStatus { complete, incomplete, unmeasured };
enum class VariableRole { exposure, outcome, covariate, auxiliary, other };

std::string to_string(VariableStatus s);
std::string to_string(VariableRole r);

/// Raised for any structural problem found while building a graph.
class GraphError : public std::runtime_error {
public:
    explicit GraphError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Opaque handle into a graph's node table. Valid only for the graph that
/// produced it.
struct NodeId {
    std::uint32_t value = UINT32_MAX;

    bool valid() const { return value != UINT32_MAX; }
    friend bool operator==(NodeId a, NodeId b) { return a.value == b.value; }
    friend bool operator!=(NodeId a, NodeId b) { return a.value != b.value; }
    friend bool operator<(NodeId a, NodeId b) { return a.value < b.value; }
};

struct VariableDecl {
    std::string name;
    VariableStatus status = VariableStatus::complete;
    // Optional annotation; when present it must agree with the role derived
    // from the analysis spec.
    std::optional<VariableRole> declared_role;
};

struct AnalysisSpec {
    std::string exposure;
    std::string outcome;
    std::vector<std::string> covariates;
    std::vector<std::string> auxiliaries;
};

/// An edge endpoint named the way the DSL spells it: either a variable name
/// or "R[name]" for the response indicator of an incomplete variable.
struct EdgeDecl {
    std::string from;
    std::string to;
};

/// Immutable m-DAG: substantive variables plus one response indicator per
/// measured incomplete variable. Indicators are synthesized by build() and
/// are always sinks. Safe for concurrent reads once built.
class MDag {
public:
    static MDag build(std::string name,
                      std::vector<VariableDecl> variables,
                      std::vector<EdgeDecl> edges,
                      AnalysisSpec analysis);

    const std::string& name() const { return name_; }
    const AnalysisSpec& analysis() const { return analysis_; }

    std::size_t node_count() const { return nodes_.size(); }

    /// Lookup by display name ("X" or "R[X]"). Throws GraphError if missing.
    NodeId node(std::string_view display_name) const;
    std::optional<NodeId> find_node(std::string_view display_name) const;

    const std::string& display_name(NodeId v) const;
    bool is_indicator(NodeId v) const;
    /// Owner of a response indicator. Throws if v is substantive.
    NodeId indicator_owner(NodeId v) const;
    /// Indicator of a measured incomplete variable, nullopt otherwise.
    std::optional<NodeId> indicator_of(NodeId v) const;

    VariableStatus status(NodeId v) const;
    VariableRole role(NodeId v) const;

    const std::vector<NodeId>& parents(NodeId v) const;
    const std::vector<NodeId>& children(NodeId v) const;
    /// Transitive closures, excluding v itself; sorted by id.
    std::vector<NodeId> ancestors(NodeId v) const;
    std::vector<NodeId> descendants(NodeId v) const;
    bool has_edge(NodeId from, NodeId to) const;
    /// Edges as (from, to) pairs sorted by display name.
    std::vector<std::pair<NodeId, NodeId>> edges() const;

    /// A topological order over all nodes (the acyclicity witness).
    const std::vector<NodeId>& topological_order() const { return topo_; }

    NodeId exposure() const { return exposure_; }
    NodeId outcome() const { return outcome_; }
    const std::vector<NodeId>& covariates() const { return covariates_; }
    const std::vector<NodeId>& auxiliaries() const { return auxiliaries_; }

    /// All substantive nodes, id-sorted (use by_display_name for reports).
    std::vector<NodeId> substantive() const;
    /// Complete substantive variables (the paper's set Z).
    std::vector<NodeId> complete_substantive() const;
    /// Measured incomplete substantive variables (incomplete, not unmeasured).
    std::vector<NodeId> measured_incomplete() const;
    std::vector<NodeId> unmeasured() const;
    std::vector<NodeId> response_indicators() const;
    /// Analysis-model variables: exposure, outcome, covariates.
    std::vector<NodeId> analysis_model_variables() const;

    friend bool operator==(const MDag& a, const MDag& b);
    friend bool operator!=(const MDag& a, const MDag& b) { return !(a == b); }

private:
    enum class NodeKind { substantive, response_indicator };

    struct Node {
        std::string name;  // display name; "R[owner]" for indicators
        NodeKind kind = NodeKind::substantive;
        NodeId owner;      // valid for indicators only
        VariableStatus status = VariableStatus::complete;
        VariableRole role = VariableRole::other;
        std::vector<NodeId> parents;   // sorted by id
        std::vector<NodeId> children;  // sorted by id
        NodeId indicator;              // valid for measured incomplete vars
    };

    MDag() = default;
    const Node& at(NodeId v) const;
    void check_node(NodeId v) const;

    std::string name_;
    std::vector<Node> nodes_;
    std::unordered_map<std::string, std::uint32_t> by_name_;
    std::vector<NodeId> topo_;
    NodeId exposure_;
    NodeId outcome_;
    std::vector<NodeId> covariates_;
    std::vector<NodeId> auxiliaries_;
    AnalysisSpec analysis_;
};

/// Sorted-unique node set helpers used across the analysis modules.
bool contains(const std::vector<NodeId>& sorted, NodeId v);
std::vector<NodeId> sorted_unique(std::vector<NodeId> v);
std::vector<NodeId> set_union(const std::vector<NodeId>& a, const std::vector<NodeId>& b);
std::vector<NodeId> set_difference(const std::vector<NodeId>& a, const std::vector<NodeId>& b);
std::vector<NodeId> set_intersection(const std::vector<NodeId>& a, const std::vector<NodeId>& b);

/// Sort node ids by display name (canonical report order).
std::vector<NodeId> by_display_name(const MDag& g, std::vector<NodeId> v);

}  // namespace mdag

#endif
