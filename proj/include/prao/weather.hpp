#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "prao/network.hpp"

namespace prao {

struct WeatherRecord {
  VertexId vertex = 0;
  std::int64_t hour = 0;
  std::string type;
  double value = 0;
  double confidence = 1;  // (0, 1]
};

struct Forecast {
  double value = 0;
  double confidence = 1;
};

enum class WorldCase { A, B, C, D };

/// Inclusive hour-slot range touched by a traversal.
struct SlotRange {
  std::int64_t first = 0;
  std::int64_t last = -1;
  std::size_t size() const { return last >= first ? static_cast<std::size_t>(last - first + 1) : 0; }
};

struct ChangedSlot {
  VertexId vertex = 0;
  std::int64_t hour = 0;
  bool operator==(const ChangedSlot&) const = default;
};

struct UpdateReport {
  std::int64_t old_base = 0;
  std::int64_t new_base = 0;
  std::size_t hours_added = 0;
  std::vector<ChangedSlot> changed;  // sorted by (hour, vertex), unique
};

/// Sliding window of hourly forecasts for every vertex and weather type.
/// Storage is a circular array per (type, vertex): hour h lives in physical
/// slot h mod horizon, so rows stay aligned across vertices and index nodes.
class WeatherStore {
 public:
  WeatherStore() = default;
  WeatherStore(std::size_t n_vertices, int horizon, std::int64_t base_hour,
               std::vector<std::string> types);

  std::size_t vertex_count() const { return n_; }
  int horizon() const { return horizon_; }
  std::int64_t base_hour() const { return base_; }
  std::int64_t end_hour() const { return base_ + horizon_; }
  bool in_window(std::int64_t hour) const { return hour >= base_ && hour < end_hour(); }
  const std::vector<std::string>& types() const { return types_; }
  int type_index(std::string_view type) const;  // -1 if absent
  int require_type(std::string_view type) const;

  std::size_t phys(std::int64_t hour) const {
    const std::int64_t h = horizon_;
    return static_cast<std::size_t>(((hour % h) + h) % h);
  }

  Forecast at(VertexId v, std::int64_t hour, int type = 0) const;
  void set(VertexId v, std::int64_t hour, int type, Forecast f);

  // Physical-order rows of length horizon().
  const double* value_row(int type, VertexId v) const { return values_[type].data() + std::size_t(v) * horizon_; }
  const double* conf_row(int type, VertexId v) const { return confs_[type].data() + std::size_t(v) * horizon_; }

  /// Apply revisions (hours inside the window) and/or advance the window.
  /// Hours past the window end must be contiguous from end_hour() and cover
  /// every vertex and type. Validation happens before any mutation.
  UpdateReport apply_update(std::span<const WeatherRecord> batch);

  bool operator==(const WeatherStore&) const = default;

 private:
  std::size_t n_ = 0;
  int horizon_ = 0;
  std::int64_t base_ = 0;
  std::vector<std::string> types_;
  std::vector<std::vector<double>> values_;  // per type, [v * horizon + phys]
  std::vector<std::vector<double>> confs_;
};

struct WeatherData {
  WeatherStore store;
  std::vector<std::vector<WeatherRecord>> updates;  // one batch per hour past the snapshot
};

/// Reads `W <vertex> <hour> <type> <value> <confidence>` lines. The first
/// `horizon` hours (from the smallest hour seen) form the snapshot and must be
/// complete; later hours are grouped into hourly update batches.
WeatherData read_weather(std::istream& in, std::size_t n_vertices, int horizon);
WeatherData load_weather(const std::string& path, std::size_t n_vertices, int horizon);
void write_weather(std::ostream& out, std::span<const WeatherRecord> records, const std::string& header = {});

Forecast slot_value(const WeatherStore& store, VertexId v, double t, int type = 0);

double idw_interpolate(double val_u, double val_v, double dist_u, double dist_v);
double case_confidence(WorldCase c, double p_u, double p_v);

/// Upper bound on Pr{value <= eps} for one edge and one hour.
double ub_pr_leq(double val_u, double p_u, double val_v, double p_v, double eps);

/// Pessimistic violation probability for one edge and one hour: worlds A, B, C
/// with worst-position value > eps, plus world D.
double slot_violation(double val_u, double p_u, double val_v, double p_v, double eps);

/// Slots touched by a traversal over [t_dep, t_arr).
SlotRange traversal_slots(double t_dep, double t_arr);
void require_slots(const WeatherStore& store, SlotRange r);

std::pair<double, double> edge_weather_bounds(const WeatherStore& store, const Edge& e, std::int64_t hour,
                                              int type = 0);
double edge_ub_pr_leq(const WeatherStore& store, const Edge& e, std::int64_t hour, double eps, int type = 0);

/// Min over slots in r of edge_ub_pr_leq.
double edge_min_ub(const WeatherStore& store, const Edge& e, SlotRange r, double eps, int type = 0);

/// Max over the slots touched by [t_dep, t_arr) of slot_violation.
double exact_pr_violate(const WeatherStore& store, const Edge& e, double t_dep, double t_arr, double eps,
                        int type = 0);

}  // namespace prao
