#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "prao/network.hpp"
#include "prao/query_types.hpp"
#include "prao/weather.hpp"

namespace prao {

enum class Distribution { Uniform, Gaussian };

struct GenConfig {
  std::size_t n_vertices = 30000;
  Distribution distribution = Distribution::Uniform;
  double plane = 1000;  // miles per side
  int degree_min = 3;
  int degree_max = 4;
  EdgeAttrConfig attrs;
  std::string weather_type = "wind_speed";
  double value_min = 0;
  double value_max = 100;
  double value_step = 10;  // hour-to-hour random walk step bound
  double conf_min = 0.5;   // confidences drawn from (conf_min, 1]
  int horizon = 24;
  std::int64_t base_hour = 0;
  int extra_hours = 0;     // hours generated past the snapshot (update stream)
  std::uint64_t seed = 1;

  std::string describe() const;
};

RoadNetwork gen_network(const GenConfig& cfg);

/// Hour-major records for hours [base_hour, base_hour + horizon + extra_hours).
std::vector<WeatherRecord> gen_weather(const RoadNetwork& net, const GenConfig& cfg);

struct QueryGenConfig {
  std::size_t count = 20;
  int sigma = 10;
  std::size_t s_size = 5;
  double epsilon = 50;
  double alpha = 0.5;
  std::string type = "wind_speed";
  std::uint64_t seed = 1;
  int max_restarts = 1000;
  KeywordId keyword_max = 15;

  std::string describe() const;
};

struct GeneratedQuery {
  PraoQuery query;
  std::vector<EdgeId> witness;  // a valid path found at generation time
};

/// Each query's dst is the end of a sigma-edge simple walk that passes the
/// keyword and weather checks at its traversal times.
std::vector<GeneratedQuery> gen_queries(const RoadNetwork& net, const WeatherStore& store,
                                        const QueryGenConfig& cfg);

std::vector<PraoQuery> read_queries(std::istream& in);
std::vector<PraoQuery> load_queries(const std::string& path);
void write_queries(std::ostream& out, const std::vector<PraoQuery>& qs, const std::string& header = {});

}  // namespace prao
