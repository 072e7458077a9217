#pragma once

// Edge-list text formats.
//
//   multiplex:   header "N L", then lines "layer i j weight"
//   multilayer:  header "N L", then lines "k i l j weight"  ((i,k) -> (j,l))
//
// Ids are 1-based, weights positive decimals. Lines starting with '#' and
// blank lines are ignored. Parse errors carry the offending line number.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "perron/network.hpp"

namespace perron {

enum class Layout { automatic, multiplex, multilayer };

MultiplexNetwork read_multiplex(std::istream& in, double gamma, bool directed);
MultilayerNetwork read_multilayer(std::istream& in, bool directed);

MultiplexNetwork load_multiplex(const std::filesystem::path& path, double gamma, bool directed);
MultilayerNetwork load_multilayer(const std::filesystem::path& path, bool directed);

/// Picks the format from the column count of the first edge line when
/// layout is automatic (4 columns: multiplex, 5: multilayer).
Network load_network(const std::filesystem::path& path, Layout layout, double gamma,
                     bool directed);

/// Writes one line per edge; undirected networks list each edge once (i <= j
/// in supra order). Weights use the shortest exact round-trip form.
void write_multiplex(std::ostream& out, const MultiplexNetwork& net);
void write_multilayer(std::ostream& out, const MultilayerNetwork& net);

/// Resolves a relative path against $PERRON_DATA_DIR when it does not exist
/// as given.
std::filesystem::path resolve_data_path(const std::filesystem::path& path);

} // namespace perron
