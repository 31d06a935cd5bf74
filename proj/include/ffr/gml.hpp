#ifndef FFR_GML_HPP
#define FFR_GML_HPP

#include <string>
#include <string_view>

#include "ffr/graph.hpp"

namespace ffr {

/// Emits the graph in GML: `graph [ directed 1 node [...] edge [...] ]`
/// with 2-space indentation and LF line endings. Node ids are the
/// deterministic numbering, `label` the cell name, `kind` the GateKind.
std::string export_gml(const CircuitGraph& graph);

/// Inverse of export_gml for the dialect above: whitespace-tolerant,
/// rejects dangling edge endpoints and missing id/label/kind/source/target
/// keys. Node order follows `id`, edge order is file order.
CircuitGraph import_gml(std::string_view text);

} // namespace ffr

#endif
