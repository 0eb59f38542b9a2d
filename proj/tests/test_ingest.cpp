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

#include <gtest/gtest.h>

#include "evcoop/ingest.hpp"
#include "evcoop/scenario_io.hpp"
#include "support/fixtures.hpp"

namespace evcoop {
namespace {

const BoundingBox kBox{40.6, 40.8, -74.1, -73.9};

std::string trips_path() { return std::string(EVCOOP_TEST_DATA_DIR) + "/trips_fixture.csv"; }

TimePoint at(const char* s) { return *parse_datetime(s); }

TEST(Ingest, DatetimeForms) {
  using namespace std::chrono;
  const TimePoint t = at("2016-06-01 06:05:07");
  EXPECT_EQ(t, sys_days{year{2016} / 6 / 1} + hours{6} + minutes{5} + seconds{7});
  EXPECT_EQ(at("2016-06-01T06:05"), at("2016-06-01 06:05:00"));
  for (const char* bad : {"2016-02-30 00:00", "2016-06-01 24:00", "2016/06/01 06:00", "", "2016-06-01"}) {
    EXPECT_FALSE(parse_datetime(bad).has_value()) << bad;
  }
}

TEST(Ingest, RejectionsByReason) {
  ColumnMap cols;
  cols.km_per_distance_unit = 1.609344;
  const TripParseResult r = parse_trip_csv(trips_path(), kBox, cols);
  EXPECT_EQ(r.rows, 10);
  EXPECT_EQ(r.records.size(), 6u);
  EXPECT_EQ(r.rejected(), 4);
  EXPECT_EQ(r.rejections.at(Rejection::kMalformedRow), 1);
  EXPECT_EQ(r.rejections.at(Rejection::kNonmonotoneTime), 1);
  EXPECT_EQ(r.rejections.at(Rejection::kOutOfBounds), 1);
  EXPECT_EQ(r.rejections.at(Rejection::kInvalidPassengerCount), 1);
  EXPECT_NEAR(r.records[0].trip_distance_km, 1.2 * 1.609344, 1e-12);
  EXPECT_EQ(r.records[3].passenger_count, 3);
  const std::string rep = rejection_report(r);
  EXPECT_NE(rep.find("rows=10 accepted=6 rejected=4"), std::string::npos);
  EXPECT_NE(rep.find("reason=OutOfBounds count=1"), std::string::npos);
}

TEST(Ingest, WindowAndSnapping) {
  const Scenario s = load_scenario(testing::data_path("case_b.scn"));
  const TripParseResult r = parse_trip_csv(trips_path(), kBox);
  const SnapResult snap = snap_to_nodes(r.records, s.transport, at("2016-06-01 06:00"),
                                        at("2016-06-01 10:00"), 15);
  EXPECT_EQ(snap.dropped_outside_window, 1);
  EXPECT_EQ(snap.dropped_same_node, 1);
  ASSERT_EQ(snap.requests.size(), 4u);
  const std::vector<Request> expect{
      {1, 1, 7, 0, 1}, {2, 12, 2, 6, 2}, {3, 6, 11, 15, 1}, {4, 9, 4, 9, 3}};
  EXPECT_EQ(snap.requests, expect);
  EXPECT_EQ(static_cast<int>(snap.requests.size()) + snap.dropped() + r.rejected(), r.rows);
  for (const Request& q : snap.requests) {
    EXPECT_GE(q.earliest_pickup_step, 0);
    EXPECT_LT(q.earliest_pickup_step, 16);
  }
}

TEST(Ingest, OptionalDistanceColumn) {
  const std::string csv =
      "pickup_datetime,dropoff_datetime,pickup_latitude,pickup_longitude,"
      "dropoff_latitude,dropoff_longitude,passenger_count\n"
      "2016-06-01 06:00,2016-06-01 06:10,40.70,-74.02,40.74,-73.96,1\n";
  const TripParseResult r = parse_trip_csv_text(csv, kBox);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_TRUE(std::isnan(r.records[0].trip_distance_km));
  ColumnMap cols;
  cols.passenger_count = "riders";
  EXPECT_THROW(parse_trip_csv_text(csv, kBox, cols), Error);
}

TEST(Ingest, MissingColumnIsNamed) {
  try {
    parse_trip_csv_text("pickup_datetime,dropoff_datetime\n", kBox);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kMissingColumn);
    EXPECT_NE(std::string(e.what()).find("pickup_latitude"), std::string::npos);
  }
  EXPECT_THROW(parse_trip_csv("/nonexistent/trips.csv", kBox), Error);
}

TEST(Ingest, HaversineAndNearestNode) {
  // One degree of latitude on the mean-radius sphere.
  EXPECT_NEAR(haversine_km(0, 0, 1, 0), 6371.0088 * 3.14159265358979323846 / 180.0, 1e-9);
  EXPECT_EQ(haversine_km(40.7, -74.0, 40.7, -74.0), 0.0);
  TransportNetwork net;
  net.nodes.push_back({5, NodeKind::kCustomer, 40.0, -74.0, {}});
  net.nodes.push_back({2, NodeKind::kCustomer, 40.0, -73.0, {}});
  net.nodes.push_back({9, NodeKind::kDepot, {}, {}, {}});
  EXPECT_EQ(nearest_node(net, 40.0, -73.5), 2);  // equidistant: lower id
  EXPECT_EQ(nearest_node(net, 40.1, -74.1), 5);
  TransportNetwork bare;
  bare.nodes.push_back({1, NodeKind::kCustomer, {}, {}, {}});
  EXPECT_THROW(nearest_node(bare, 0, 0), Error);
}

TEST(Ingest, ZonesFromScenario) {
  const Scenario s = load_scenario(testing::data_path("case_b.scn"));
  const auto zones = zone_classification(s.transport);
  EXPECT_EQ(zones.at(1), Zone::kCommercial);
  EXPECT_EQ(zones.at(3), Zone::kIndustrial);
  EXPECT_EQ(zones.at(6), Zone::kResidential);
  EXPECT_THROW(zone_classification(testing::line_scenario().transport), Error);
}

}  // namespace
}  // namespace evcoop
