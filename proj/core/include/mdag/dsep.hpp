#ifndef MDAG_DSEP_HPP
#define MDAG_DSEP_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mdag/graph.hpp"

namespace mdag {

/// Whether no open path exists between any a-node and any b-node given the
/// conditioning set c. Standard semantics: a non-collider blocks iff it is
/// in c; a collider blocks iff neither it nor any descendant is in c.
/// Convention: any endpoint that is itself in c is separated from everything.
///
/// The boolean query is reachability-based (Bayes-ball) and does not depend
/// on the path enumerator below.
bool d_separated(const MDag& g,
                 const std::vector<NodeId>& a,
                 const std::vector<NodeId>& b,
                 const std::vector<NodeId>& c);

enum class TripleKind { chain, fork, collider };

std::string to_string(TripleKind k);

struct PathNodeNote {
    NodeId node;
    TripleKind kind;
    bool open;
};

/// One simple path between two nodes, with the orientation of each step and
/// the blocking analysis of each inner node.
struct PathWitness {
    std::vector<NodeId> nodes;
    std::vector<bool> forward;  // forward[i]: nodes[i] -> nodes[i+1]
    std::vector<PathNodeNote> inner;
    bool open = false;

    std::size_t length() const { return nodes.empty() ? 0 : nodes.size() - 1; }
};

struct PathWitnessList {
    std::vector<PathWitness> paths;
    bool truncated = false;  // more open paths exist beyond max_paths
};

/// All simple open paths between a and b given c, up to max_paths.
/// Empty (and not truncated) iff d_separated({a},{b},c).
PathWitnessList open_paths(const MDag& g, NodeId a, NodeId b,
                           const std::vector<NodeId>& c,
                           std::size_t max_paths = 64);

/// Shortest open path from any node in `from` to any node in `to` given c;
/// ties broken by the display-name sequence. Used for report witnesses.
std::optional<PathWitness> shortest_open_path(const MDag& g,
                                              const std::vector<NodeId>& from,
                                              const std::vector<NodeId>& to,
                                              const std::vector<NodeId>& c);

/// "W -> Y <- U -> R_W" rendering used in text reports.
std::string render_path(const MDag& g, const PathWitness& w);

}  // namespace mdag

#endif
