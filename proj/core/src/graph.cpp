#include "hypforge/graph.hpp"

#include <algorithm>

namespace hypforge {

std::string_view to_string(NodeClass c) {
  switch (c) {
    case NodeClass::good: return "good";
    case NodeClass::bad: return "bad";
    case NodeClass::hyper: return "hyper";
  }
  return "good";
}

std::size_t GraphDoc::state_node_count() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const GraphNode& n) {
    return n.node_class != NodeClass::hyper;
  }));
}

GraphDoc render_graph(const ModelSpec& model) {
  GraphDoc doc;
  for (const auto& hyper : model.hyperstates) {
    std::optional<std::string> parent;
    if (!hyper.singleton) {
      GraphNode container;
      container.id = hyper.id;
      container.node_class = NodeClass::hyper;
      container.start = hyper.id == model.start_state;
      doc.nodes.push_back(std::move(container));
      parent = hyper.id;
    }
    for (const auto& s : hyper.members) {
      GraphNode node;
      node.id = s.id;
      node.node_class = s.type == StateType::good ? NodeClass::good : NodeClass::bad;
      node.observations = s.observations;
      node.parent = parent;
      node.start = s.id == model.start_state;
      doc.nodes.push_back(std::move(node));
      for (const auto& t : s.outgoing) doc.edges.push_back({s.id, t.target});
    }
  }
  return doc;
}

}  // namespace hypforge
