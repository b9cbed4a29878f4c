#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hypforge/model.hpp"

namespace hypforge {

enum class NodeClass { good, bad, hyper };

std::string_view to_string(NodeClass c);

struct GraphNode {
  std::string id;
  NodeClass node_class = NodeClass::good;
  std::vector<ObsId> observations;
  std::optional<std::string> parent;  // containing hyperstate, if any
  bool start = false;
};

struct GraphEdge {
  std::string from;
  std::string to;
};

/// Topology for the IDE's transition graph. Multi-member hyperstates become
/// container nodes; layout is left to the client.
struct GraphDoc {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;

  std::size_t state_node_count() const;
};

GraphDoc render_graph(const ModelSpec& model);

}  // namespace hypforge
