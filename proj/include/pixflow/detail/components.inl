#pragma once

#include <vector>

namespace pixflow {

template <typename KeepEdge>
std::vector<std::int32_t> component_labels(const PixelGraph& graph, KeepEdge keep) {
  const auto n = graph.node_count();
  std::vector<std::int32_t> label(n, -1);
  std::vector<NodeId> stack;
  std::int32_t next = 0;
  for (std::size_t start = 0; start < n; ++start) {
    if (label[start] >= 0) continue;
    label[start] = next;
    stack.assign(1, static_cast<NodeId>(start));
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (const auto& inc : graph.incident(v)) {
        if (label[static_cast<std::size_t>(inc.node)] >= 0 || !keep(inc.edge)) continue;
        label[static_cast<std::size_t>(inc.node)] = next;
        stack.push_back(inc.node);
      }
    }
    ++next;
  }
  return label;
}

}  // namespace pixflow
