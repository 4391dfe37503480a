#include "prao/weather.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "prao/error.hpp"
#include "prao/kernels/kernels.hpp"

namespace prao {

WeatherStore::WeatherStore(std::size_t n_vertices, int horizon, std::int64_t base_hour,
                           std::vector<std::string> types)
    : n_(n_vertices), horizon_(horizon), base_(base_hour), types_(std::move(types)) {
  if (horizon <= 0) throw std::invalid_argument("horizon must be positive");
  if (types_.empty()) types_.push_back("wind_speed");
  values_.assign(types_.size(), std::vector<double>(n_ * horizon_, 0.0));
  confs_.assign(types_.size(), std::vector<double>(n_ * horizon_, 1.0));
}

int WeatherStore::type_index(std::string_view type) const {
  for (std::size_t i = 0; i < types_.size(); ++i) {
    if (types_[i] == type) return static_cast<int>(i);
  }
  return -1;
}

int WeatherStore::require_type(std::string_view type) const {
  const int t = type_index(type);
  if (t < 0) throw std::invalid_argument("unknown weather type '" + std::string(type) + "'");
  return t;
}

Forecast WeatherStore::at(VertexId v, std::int64_t hour, int type) const {
  if (!in_window(hour)) {
    throw HorizonError("hour " + std::to_string(hour) + " outside window [" + std::to_string(base_) + ", " +
                       std::to_string(end_hour()) + ")");
  }
  const std::size_t i = std::size_t(v) * horizon_ + phys(hour);
  return {values_[type][i], confs_[type][i]};
}

void WeatherStore::set(VertexId v, std::int64_t hour, int type, Forecast f) {
  const std::size_t i = std::size_t(v) * horizon_ + phys(hour);
  values_[type][i] = f.value;
  confs_[type][i] = f.confidence;
}

namespace {

void check_record(const WeatherRecord& r, std::size_t n) {
  if (r.vertex >= n) throw UpdateError("weather record for unknown vertex " + std::to_string(r.vertex));
  if (!std::isfinite(r.value)) throw UpdateError("non-finite weather value");
  if (!(r.confidence > 0 && r.confidence <= 1)) throw UpdateError("confidence must be in (0, 1]");
}

}  // namespace

UpdateReport WeatherStore::apply_update(std::span<const WeatherRecord> batch) {
  UpdateReport rep;
  rep.old_base = base_;
  std::int64_t max_hour = end_hour() - 1;
  std::vector<int> type_of(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const WeatherRecord& r = batch[i];
    check_record(r, n_);
    type_of[i] = type_index(r.type);
    if (type_of[i] < 0) throw UpdateError("unknown weather type '" + r.type + "'");
    if (r.hour < base_) throw UpdateError("hour " + std::to_string(r.hour) + " already expired");
    max_hour = std::max(max_hour, r.hour);
  }
  const std::int64_t added = max_hour - (end_hour() - 1);
  if (added > 0) {
    // Every new hour must be fully covered so no stale slot survives an advance.
    const std::int64_t first_new = end_hour();
    const std::size_t per_hour = n_ * types_.size();
    std::vector<std::vector<char>> seen(static_cast<std::size_t>(added), std::vector<char>(per_hour, 0));
    std::vector<std::size_t> count(static_cast<std::size_t>(added), 0);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const WeatherRecord& r = batch[i];
      if (r.hour < first_new) continue;
      const auto h = static_cast<std::size_t>(r.hour - first_new);
      char& s = seen[h][std::size_t(type_of[i]) * n_ + r.vertex];
      if (!s) {
        s = 1;
        ++count[h];
      }
    }
    for (std::size_t h = 0; h < count.size(); ++h) {
      if (count[h] != per_hour) {
        throw UpdateError("hour " + std::to_string(first_new + static_cast<std::int64_t>(h)) +
                          (count[h] == 0 ? " missing (gap in update stream)" : " incompletely covered"));
      }
    }
  }
  // New hours must not push earlier in-batch revisions out of the window.
  const std::int64_t new_base = std::max(base_, max_hour - horizon_ + 1);
  for (const WeatherRecord& r : batch) {
    if (r.hour < new_base) throw UpdateError("revision for hour " + std::to_string(r.hour) + " expires in the same batch");
  }
  base_ = new_base;
  rep.new_base = base_;
  rep.hours_added = added > 0 ? static_cast<std::size_t>(added) : 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const WeatherRecord& r = batch[i];
    const std::size_t k = std::size_t(r.vertex) * horizon_ + phys(r.hour);
    double& val = values_[type_of[i]][k];
    double& conf = confs_[type_of[i]][k];
    if (val != r.value || conf != r.confidence) {
      val = r.value;
      conf = r.confidence;
      rep.changed.push_back({r.vertex, r.hour});
    }
  }
  std::sort(rep.changed.begin(), rep.changed.end(), [](const ChangedSlot& a, const ChangedSlot& b) {
    return a.hour != b.hour ? a.hour < b.hour : a.vertex < b.vertex;
  });
  rep.changed.erase(std::unique(rep.changed.begin(), rep.changed.end()), rep.changed.end());
  return rep;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
T parse_num(std::string_view tok, std::size_t line, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("bad ") + what + " '" + std::string(tok) + "'");
  }
  return value;
}

}  // namespace

WeatherData read_weather(std::istream& in, std::size_t n_vertices, int horizon) {
  std::vector<WeatherRecord> recs;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (raw.starts_with("#")) continue;
    auto tok = split_ws(raw);
    if (tok.empty()) continue;
    if (tok[0] != "W" || tok.size() != 6) throw ParseError(line, "expected 'W <vertex> <hour> <type> <value> <conf>'");
    WeatherRecord r;
    r.vertex = parse_num<VertexId>(tok[1], line, "vertex id");
    r.hour = parse_num<std::int64_t>(tok[2], line, "hour");
    r.type = std::string(tok[3]);
    r.value = parse_num<double>(tok[4], line, "value");
    r.confidence = parse_num<double>(tok[5], line, "confidence");
    if (r.vertex >= n_vertices) throw ParseError(line, "unknown vertex " + std::to_string(r.vertex));
    if (!std::isfinite(r.value)) throw ParseError(line, "non-finite value");
    if (!(r.confidence > 0 && r.confidence <= 1)) throw ParseError(line, "confidence must be in (0, 1]");
    recs.push_back(std::move(r));
  }
  if (recs.empty()) throw UpdateError("weather file has no records");
  std::int64_t base = recs.front().hour;
  std::vector<std::string> types;
  for (const auto& r : recs) {
    base = std::min(base, r.hour);
    if (std::find(types.begin(), types.end(), r.type) == types.end()) types.push_back(r.type);
  }
  std::sort(types.begin(), types.end());
  WeatherData data{WeatherStore(n_vertices, horizon, base, types), {}};
  const std::size_t need = n_vertices * types.size() * static_cast<std::size_t>(horizon);
  std::vector<char> seen(need, 0);
  std::size_t filled = 0;
  std::map<std::int64_t, std::vector<WeatherRecord>> later;
  for (auto& r : recs) {
    if (r.hour < base + horizon) {
      const int t = data.store.type_index(r.type);
      const std::size_t k = (std::size_t(t) * n_vertices + r.vertex) * horizon + std::size_t(r.hour - base);
      if (!seen[k]) {
        seen[k] = 1;
        ++filled;
      }
      data.store.set(r.vertex, r.hour, t, {r.value, r.confidence});
    } else {
      later[r.hour].push_back(std::move(r));
    }
  }
  if (filled != need) {
    throw UpdateError("weather snapshot incomplete: " + std::to_string(filled) + " of " + std::to_string(need) +
                      " (vertex, type, hour) entries");
  }
  std::int64_t expect = base + horizon;
  for (auto& [hour, batch] : later) {
    if (hour != expect) throw UpdateError("gap in weather stream at hour " + std::to_string(expect));
    data.updates.push_back(std::move(batch));
    ++expect;
  }
  return data;
}

WeatherData load_weather(const std::string& path, std::size_t n_vertices, int horizon) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_weather(in, n_vertices, horizon);
}

void write_weather(std::ostream& out, std::span<const WeatherRecord> records, const std::string& header) {
  if (!header.empty()) {
    std::istringstream h(header);
    std::string l;
    while (std::getline(h, l)) out << "# " << l << '\n';
  }
  char buf[64];
  for (const auto& r : records) {
    out << "W " << r.vertex << ' ' << r.hour << ' ' << r.type << ' ';
    auto p = std::to_chars(buf, buf + sizeof buf, r.value).ptr;
    out.write(buf, p - buf);
    out << ' ';
    p = std::to_chars(buf, buf + sizeof buf, r.confidence).ptr;
    out.write(buf, p - buf);
    out << '\n';
  }
}

Forecast slot_value(const WeatherStore& store, VertexId v, double t, int type) {
  return store.at(v, static_cast<std::int64_t>(std::floor(t)), type);
}

double idw_interpolate(double val_u, double val_v, double dist_u, double dist_v) {
  if (dist_u == 0) return val_u;
  if (dist_v == 0) return val_v;
  return (dist_v * val_u + dist_u * val_v) / (dist_u + dist_v);
}

double case_confidence(WorldCase c, double p_u, double p_v) {
  switch (c) {
    case WorldCase::A: return p_u * p_v;
    case WorldCase::B: return (1 - p_u) * p_v;
    case WorldCase::C: return p_u * (1 - p_v);
    case WorldCase::D: return (1 - p_u) * (1 - p_v);
  }
  return 0;
}

double ub_pr_leq(double val_u, double p_u, double val_v, double p_v, double eps) {
  return kernels::scalar::min_slot_ub(&val_u, &p_u, &val_v, &p_v, 1, eps);
}

double slot_violation(double val_u, double p_u, double val_v, double p_v, double eps) {
  return kernels::scalar::max_slot_violation(&val_u, &p_u, &val_v, &p_v, 1, eps);
}

SlotRange traversal_slots(double t_dep, double t_arr) {
  SlotRange r;
  r.first = static_cast<std::int64_t>(std::floor(t_dep));
  r.last = static_cast<std::int64_t>(std::ceil(t_arr)) - 1;
  if (r.last < r.first) r.last = r.first;
  return r;
}

void require_slots(const WeatherStore& store, SlotRange r) {
  if (r.first < store.base_hour() || r.last >= store.end_hour()) {
    throw HorizonError("traversal needs hours [" + std::to_string(r.first) + ", " + std::to_string(r.last) +
                       "] outside window [" + std::to_string(store.base_hour()) + ", " +
                       std::to_string(store.end_hour()) + ")");
  }
}

std::pair<double, double> edge_weather_bounds(const WeatherStore& store, const Edge& e, std::int64_t hour,
                                              int type) {
  const double a = store.at(e.u, hour, type).value;
  const double b = store.at(e.v, hour, type).value;
  return {std::min(a, b), std::max(a, b)};
}

double edge_ub_pr_leq(const WeatherStore& store, const Edge& e, std::int64_t hour, double eps, int type) {
  const Forecast fu = store.at(e.u, hour, type);
  const Forecast fv = store.at(e.v, hour, type);
  return ub_pr_leq(fu.value, fu.confidence, fv.value, fv.confidence, eps);
}

namespace {

// Calls f(physical_start, length) for the one or two contiguous row segments
// covering hours [r.first, r.last].
template <class F>
void for_segments(const WeatherStore& store, SlotRange r, F&& f) {
  std::size_t remaining = r.size();
  std::size_t p = store.phys(r.first);
  const auto h = static_cast<std::size_t>(store.horizon());
  while (remaining > 0) {
    const std::size_t len = std::min(remaining, h - p);
    f(p, len);
    remaining -= len;
    p = 0;
  }
}

}  // namespace

double edge_min_ub(const WeatherStore& store, const Edge& e, SlotRange r, double eps, int type) {
  require_slots(store, r);
  const double* vu = store.value_row(type, e.u);
  const double* pu = store.conf_row(type, e.u);
  const double* vv = store.value_row(type, e.v);
  const double* pv = store.conf_row(type, e.v);
  double best = 1.0;
  for_segments(store, r, [&](std::size_t p, std::size_t len) {
    best = std::min(best, kernels::min_slot_ub(vu + p, pu + p, vv + p, pv + p, len, eps));
  });
  return best;
}

double exact_pr_violate(const WeatherStore& store, const Edge& e, double t_dep, double t_arr, double eps,
                        int type) {
  const SlotRange r = traversal_slots(t_dep, t_arr);
  require_slots(store, r);
  const double* vu = store.value_row(type, e.u);
  const double* pu = store.conf_row(type, e.u);
  const double* vv = store.value_row(type, e.v);
  const double* pv = store.conf_row(type, e.v);
  double worst = 0.0;
  for_segments(store, r, [&](std::size_t p, std::size_t len) {
    worst = std::max(worst, kernels::max_slot_violation(vu + p, pu + p, vv + p, pv + p, len, eps));
  });
  return worst;
}

}  // namespace prao
