#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "prao/network.hpp"
#include "prao/pivots.hpp"
#include "prao/spatial_index.hpp"
#include "prao/weather.hpp"

namespace prao {

using Digest = std::array<std::uint8_t, 32>;

/// SHA-256 over the canonical text form of the network.
Digest network_digest(const RoadNetwork& net);
std::string to_hex(const Digest& d);

// Binary caches keyed by the network digest. Loading a cache written for a
// different network (or, for the index, a different fanout) throws.
class SidecarMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void save_pivots(const std::string& path, const RoadNetwork& net, const PivotTable& table);
PivotTable load_pivots(const std::string& path, const RoadNetwork& net);

/// Stores the tree structure only; weather aggregates are rebuilt on load.
void save_index(const std::string& path, const RoadNetwork& net, const SpatialIndex& index);
SpatialIndex load_index(const std::string& path, const RoadNetwork& net, const WeatherStore& store,
                        std::size_t fanout);

}  // namespace prao
