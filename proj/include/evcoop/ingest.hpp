// Copyright 2026 The evcoop Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EVCOOP_INGEST_HPP
#define EVCOOP_INGEST_HPP

// Trip-record ingestion: CSV rows to TripRecords, TripRecords to Requests.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "evcoop/error.hpp"
#include "evcoop/record_format.hpp"
#include "evcoop/scenario.hpp"
#include "evcoop/transport.hpp"

namespace evcoop {

using TimePoint = std::chrono::sys_seconds;

struct TripRecord {
  TimePoint pickup_time;
  TimePoint dropoff_time;
  double pickup_lat = 0, pickup_lon = 0;
  double dropoff_lat = 0, dropoff_lon = 0;
  double trip_distance_km = 0;  // NaN when the column is absent
  int passenger_count = 1;
};

struct BoundingBox {
  double min_lat = -90, max_lat = 90;
  double min_lon = -180, max_lon = 180;

  bool contains(double lat, double lon) const {
    return lat >= min_lat && lat <= max_lat && lon >= min_lon && lon <= max_lon;
  }
};

// Header names of the input columns. An empty trip_distance disables it.
struct ColumnMap {
  std::string pickup_datetime = "pickup_datetime";
  std::string dropoff_datetime = "dropoff_datetime";
  std::string pickup_lat = "pickup_latitude";
  std::string pickup_lon = "pickup_longitude";
  std::string dropoff_lat = "dropoff_latitude";
  std::string dropoff_lon = "dropoff_longitude";
  std::string trip_distance = "trip_distance";
  std::string passenger_count = "passenger_count";
  double km_per_distance_unit = 1.0;
};

enum class Rejection { kMalformedRow, kNonmonotoneTime, kOutOfBounds, kInvalidPassengerCount };

inline std::string_view to_string(Rejection r) {
  switch (r) {
    case Rejection::kMalformedRow: return "MalformedRow";
    case Rejection::kNonmonotoneTime: return "NonmonotoneTime";
    case Rejection::kOutOfBounds: return "OutOfBounds";
    case Rejection::kInvalidPassengerCount: return "InvalidPassengerCount";
  }
  return "Unknown";
}

struct TripParseResult {
  std::vector<TripRecord> records;
  std::map<Rejection, int> rejections;
  int rows = 0;  // data rows read, header excluded

  int rejected() const {
    int n = 0;
    for (const auto& [r, k] : rejections) n += k;
    return n;
  }
};

// "YYYY-MM-DD HH:MM:SS" or "YYYY-MM-DDTHH:MM:SS", UTC, seconds optional.
inline std::optional<TimePoint> parse_datetime(std::string_view s) {
  s = text::trim(s);
  auto num = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    if (pos + len > s.size()) return std::nullopt;
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (s[i] < '0' || s[i] > '9') return std::nullopt;
      v = v * 10 + (s[i] - '0');
    }
    return v;
  };
  if (s.size() != 16 && s.size() != 19) return std::nullopt;
  if (s[4] != '-' || s[7] != '-' || (s[10] != ' ' && s[10] != 'T') || s[13] != ':') {
    return std::nullopt;
  }
  if (s.size() == 19 && s[16] != ':') return std::nullopt;
  const auto y = num(0, 4), mo = num(5, 2), d = num(8, 2), h = num(11, 2), mi = num(14, 2);
  const auto sec = s.size() == 19 ? num(17, 2) : std::optional<int>(0);
  if (!y || !mo || !d || !h || !mi || !sec) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*mo)},
                                        std::chrono::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok() || *h > 23 || *mi > 59 || *sec > 60) return std::nullopt;
  return std::chrono::sys_days{ymd} + std::chrono::hours{*h} + std::chrono::minutes{*mi} +
         std::chrono::seconds{*sec};
}

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

}  // namespace detail

inline TripParseResult parse_trip_csv_text(std::string_view content, const BoundingBox& box,
                                           const ColumnMap& cols = {}) {
  TripParseResult out;
  std::istringstream in{std::string(content)};
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    header = detail::split_csv_line(line);
    break;
  }
  if (header.empty()) throw Error(Errc::kMissingColumn, "no header row");
  for (auto& h : header) h = std::string(text::trim(h));
  auto column = [&](const std::string& name, bool required) -> int {
    if (name.empty() && !required) return -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    if (required) throw Error(Errc::kMissingColumn, "column '" + name + "' not found");
    return -1;
  };
  const int c_pt = column(cols.pickup_datetime, true);
  const int c_dt = column(cols.dropoff_datetime, true);
  const int c_plat = column(cols.pickup_lat, true);
  const int c_plon = column(cols.pickup_lon, true);
  const int c_dlat = column(cols.dropoff_lat, true);
  const int c_dlon = column(cols.dropoff_lon, true);
  const int c_pc = column(cols.passenger_count, true);
  const int c_dist = column(cols.trip_distance, false);

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    ++out.rows;
    const auto f = detail::split_csv_line(line);
    auto reject = [&](Rejection r) { ++out.rejections[r]; };
    if (f.size() != header.size()) {
      reject(Rejection::kMalformedRow);
      continue;
    }
    const auto pt = parse_datetime(f[c_pt]);
    const auto dt = parse_datetime(f[c_dt]);
    const auto plat = text::try_parse_double(text::trim(f[c_plat]));
    const auto plon = text::try_parse_double(text::trim(f[c_plon]));
    const auto dlat = text::try_parse_double(text::trim(f[c_dlat]));
    const auto dlon = text::try_parse_double(text::trim(f[c_dlon]));
    const auto pc = text::try_parse_int(text::trim(f[c_pc]));
    std::optional<double> dist = std::numeric_limits<double>::quiet_NaN();
    if (c_dist >= 0) dist = text::try_parse_double(text::trim(f[c_dist]));
    if (!pt || !dt || !plat || !plon || !dlat || !dlon || !pc || !dist) {
      reject(Rejection::kMalformedRow);
      continue;
    }
    if (*dt < *pt) {
      reject(Rejection::kNonmonotoneTime);
      continue;
    }
    if (!box.contains(*plat, *plon) || !box.contains(*dlat, *dlon)) {
      reject(Rejection::kOutOfBounds);
      continue;
    }
    if (*pc < 1) {
      reject(Rejection::kInvalidPassengerCount);
      continue;
    }
    TripRecord r;
    r.pickup_time = *pt;
    r.dropoff_time = *dt;
    r.pickup_lat = *plat;
    r.pickup_lon = *plon;
    r.dropoff_lat = *dlat;
    r.dropoff_lon = *dlon;
    r.trip_distance_km = *dist * cols.km_per_distance_unit;
    r.passenger_count = static_cast<int>(*pc);
    out.records.push_back(r);
  }
  return out;
}

inline TripParseResult parse_trip_csv(const std::string& path, const BoundingBox& box,
                                      const ColumnMap& cols = {}) {
  return parse_trip_csv_text(text::read_file(path), box, cols);
}

inline std::string rejection_report(const TripParseResult& r) {
  std::string out = "[rejections]\n";
  out += "rows=" + std::to_string(r.rows) + " accepted=" + std::to_string(r.records.size()) +
         " rejected=" + std::to_string(r.rejected()) + "\n";
  for (Rejection k : {Rejection::kMalformedRow, Rejection::kNonmonotoneTime,
                      Rejection::kOutOfBounds, Rejection::kInvalidPassengerCount}) {
    const auto it = r.rejections.find(k);
    out += "reason=" + std::string(to_string(k)) +
           " count=" + std::to_string(it == r.rejections.end() ? 0 : it->second) + "\n";
  }
  return out;
}

inline constexpr double kEarthRadiusKm = 6371.0088;

inline double haversine_km(double lat1, double lon1, double lat2, double lon2) {
  constexpr double kDeg = 3.14159265358979323846 / 180.0;
  const double dlat = (lat2 - lat1) * kDeg;
  const double dlon = (lon2 - lon1) * kDeg;
  const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(lat1 * kDeg) * std::cos(lat2 * kDeg) *
                       std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

// Nearest geolocated node; ties go to the lower node id.
inline int nearest_node(const TransportNetwork& net, double lat, double lon) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (const TransportNode& n : net.nodes) {
    if (!n.lat || !n.lon) continue;
    const double d = haversine_km(lat, lon, *n.lat, *n.lon);
    if (d < best_d || (d == best_d && n.id < best)) {
      best = n.id;
      best_d = d;
    }
  }
  if (best < 0) throw Error(Errc::kNoNodesAvailable, "transport has no geolocated nodes");
  return best;
}

struct SnapResult {
  std::vector<Request> requests;
  int dropped_outside_window = 0;
  int dropped_same_node = 0;  // origin and destination snap to one node

  int dropped() const { return dropped_outside_window + dropped_same_node; }
};

// Pickups in [start, end) become requests numbered 1.. in input order.
inline SnapResult snap_to_nodes(const std::vector<TripRecord>& records,
                                const TransportNetwork& net, TimePoint start, TimePoint end,
                                int step_minutes) {
  if (step_minutes <= 0) throw Error(Errc::kInvalidArgument, "step_minutes must be positive");
  bool any = false;
  for (const auto& n : net.nodes) any = any || (n.lat && n.lon);
  if (!any) throw Error(Errc::kNoNodesAvailable, "transport has no geolocated nodes");
  SnapResult out;
  const auto step = std::chrono::minutes{step_minutes};
  for (const TripRecord& r : records) {
    if (r.pickup_time < start || r.pickup_time >= end) {
      ++out.dropped_outside_window;
      continue;
    }
    Request q;
    q.origin = nearest_node(net, r.pickup_lat, r.pickup_lon);
    q.destination = nearest_node(net, r.dropoff_lat, r.dropoff_lon);
    if (q.origin == q.destination) {
      ++out.dropped_same_node;
      continue;
    }
    q.id = static_cast<int>(out.requests.size()) + 1;
    q.earliest_pickup_step = static_cast<int>((r.pickup_time - start) / step);
    q.passengers = r.passenger_count;
    out.requests.push_back(q);
  }
  return out;
}

// Zone label per node, as declared in the scenario. Throws if any is missing.
inline std::map<int, Zone> zone_classification(const TransportNetwork& net) {
  std::map<int, Zone> out;
  for (const auto& n : net.nodes) {
    if (!n.zone) {
      throw Error(Errc::kMissingColumn, "node " + std::to_string(n.id) + " has no zone label");
    }
    out[n.id] = *n.zone;
  }
  return out;
}

}  // namespace evcoop

#endif  // EVCOOP_INGEST_HPP
