#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prao/network.hpp"

namespace prao {

struct PraoQuery {
  VertexId src = 0;
  VertexId dst = 0;
  std::string type = "wind_speed";
  double epsilon = 50;
  double alpha = 0.5;
  std::vector<KeywordId> obstacles;
  double depart = 0;  // absolute hours
};

struct QueryStats {
  std::uint64_t node_accesses = 0;
  std::uint64_t distinct_nodes = 0;
  std::uint64_t edge_expansions = 0;
  std::uint64_t heap_pushes = 0;
  std::uint64_t heap_pops = 0;
  std::uint64_t seeds = 0;

  std::uint64_t node_keyword_prunes = 0;
  std::uint64_t node_weather_prunes = 0;
  std::uint64_t node_time_prunes = 0;
  std::uint64_t edge_keyword_prunes = 0;
  std::uint64_t edge_weather_prunes = 0;  // upper-bound rule
  std::uint64_t edge_exact_rejects = 0;   // failed the exact violation check
  std::uint64_t edge_time_prunes = 0;
  std::uint64_t horizon_blocked = 0;      // traversal would leave the weather window
  std::uint64_t inconsistent_discards = 0;
  std::uint64_t refine_rejects = 0;
  std::uint64_t candidates = 0;

  std::uint64_t max_queue = 0;
  std::uint64_t max_heap = 0;
  double wall_ms = 0;
};

struct QueryResult {
  bool found = false;
  std::vector<EdgeId> path;
  double total_time = 0;  // hours from departure
  QueryStats stats;
};

}  // namespace prao
