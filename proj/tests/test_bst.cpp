// Copyright 2026 the tcforecast authors
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

#include <doctest.h>

#include "tcf/bst.hpp"

using namespace tcf;

namespace {

const char* kFixture =
    "66666 5301 5 EXAMPLE\n"
    "1953061506 0 125 1116 1000 10 15\n"
    "1953061512 0 132 1117 1000 10 15\n"
    "1953061518 0 142 1117 1000 10 15\n"
    "1953061600 0 150 1117 1000 10 20\n"
    "1953061606 0 159 1112 999 10 20\n";

}  // namespace

TEST_CASE("fixture parses to the exact five records") {
  BstParseReport rep;
  auto tracks = parse_bst_text(kFixture, rep);
  REQUIRE(tracks.size() == 1);
  REQUIRE(tracks[0].obs.size() == 5);
  CHECK(rep.records_ok == 5);
  CHECK(rep.records_rejected == 0);
  CHECK(tracks[0].storm_id == "5301");
  CHECK(tracks[0].name == "EXAMPLE");

  const auto& o0 = tracks[0].obs[0];
  CHECK(format_ymdh(o0.time) == "1953061506");
  CHECK(o0.intensity_code == 0);
  CHECK(o0.lat == doctest::Approx(12.5));
  CHECK(o0.lon == doctest::Approx(111.6));
  CHECK(o0.pressure == doctest::Approx(1000.0));
  CHECK(o0.max_wind == doctest::Approx(10.0));
  CHECK(o0.avg_wind == doctest::Approx(15.0));

  const double lats[] = {12.5, 13.2, 14.2, 15.0, 15.9};
  const double lons[] = {111.6, 111.7, 111.7, 111.7, 111.2};
  for (int i = 0; i < 5; ++i) {
    CHECK(tracks[0].obs[static_cast<size_t>(i)].lat == doctest::Approx(lats[i]));
    CHECK(tracks[0].obs[static_cast<size_t>(i)].lon == doctest::Approx(lons[i]));
  }
  CHECK(tracks[0].genesis_year() == 1953);
}

TEST_CASE("parse -> serialize -> parse is identity on retained records") {
  BstParseReport rep1, rep2;
  auto first = parse_bst_text(kFixture, rep1);
  std::string text = serialize_bst(first);
  auto second = parse_bst_text(text, rep2);
  REQUIRE(second.size() == first.size());
  CHECK(serialize_bst(second) == text);
  for (size_t i = 0; i < first[0].obs.size(); ++i) {
    CHECK(first[0].obs[i].lat == second[0].obs[i].lat);
    CHECK(first[0].obs[i].lon == second[0].obs[i].lon);
    CHECK(first[0].obs[i].time == second[0].obs[i].time);
  }
}

TEST_CASE("empty stream parses to empty list with zero errors") {
  BstParseReport rep;
  auto tracks = parse_bst_text("", rep);
  CHECK(tracks.empty());
  CHECK(rep.issues.empty());
  CHECK(rep.records_rejected == 0);
}

TEST_CASE("non-monotone timestamp is rejected with a line diagnostic") {
  std::string text =
      "66666 X 3\n"
      "2000070100 1 150 1300 1000 20 18\n"
      "2000070106 1 151 1301 1000 20 18\n"
      "2000070100 1 152 1302 1000 20 18\n"   // goes backwards
      "2000070112 1 153 1303 1000 20 18\n";
  BstParseReport rep;
  auto tracks = parse_bst_text(text, rep);
  REQUIRE(tracks.size() == 1);
  CHECK(tracks[0].obs.size() == 3);
  REQUIRE(rep.issues.size() == 1);
  CHECK(rep.issues[0].line == 4);
  CHECK(rep.issues[0].message.find("non-monotone") != std::string::npos);
}

TEST_CASE("unparseable fields produce line errors and parsing continues") {
  std::string text =
      "66666 X 2\n"
      "2000070100 1 150 abc 1000 20 18\n"
      "2000070106 1 151 1301 1000 20 18\n";
  BstParseReport rep;
  auto tracks = parse_bst_text(text, rep);
  REQUIRE(tracks.size() == 1);
  CHECK(tracks[0].obs.size() == 1);
  REQUIRE(rep.issues.size() == 1);
  CHECK(rep.issues[0].line == 2);
}

TEST_CASE("off-cadence hour and out-of-basin positions are rejected") {
  std::string text =
      "66666 X 3\n"
      "2000070103 1 150 1300 1000 20 18\n"   // hour 3
      "2000070106 1 550 1300 1000 20 18\n"   // lat 55
      "2000070112 1 150 2200 1000 20 18\n";  // lon 220
  BstParseReport rep;
  auto tracks = parse_bst_text(text, rep);
  CHECK(tracks[0].obs.empty());
  CHECK(rep.records_rejected == 3);
}

TEST_CASE("life-cycle filter keeps >= 17 observations") {
  std::vector<TCTrack> tracks(2);
  tracks[0].storm_id = "A";
  tracks[1].storm_id = "B";
  for (int i = 0; i < 17; ++i) {
    TCObservation o;
    o.time = make_time(2000, 7, 1, 0).plus_steps(i);
    o.lat = 15.0;
    o.lon = 130.0;
    o.pressure = 1000;
    tracks[0].obs.push_back(o);
    if (i < 16) tracks[1].obs.push_back(o);
  }
  int dropped = 0;
  auto kept = filter_tracks(tracks, 17, &dropped);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].storm_id == "A");
  CHECK(dropped == 1);
}

TEST_CASE("time helpers round-trip and step correctly") {
  auto t = parse_ymdh("1953061506");
  REQUIRE(t.has_value());
  CHECK(format_ymdh(*t) == "1953061506");
  CHECK(format_ymdh(t->plus_steps(3)) == "1953061600");
  CHECK(format_mmddhh(*t) == "061506");
  CHECK(year_of(*t) == 1953);
  CHECK(!parse_ymdh("1953133106").has_value());  // month 13
  CHECK(!parse_ymdh("195306150").has_value());   // 9 digits
}

TEST_CASE("intensity labels map the six categories") {
  CHECK(intensity_label(1, 0) == "TD");
  CHECK(intensity_label(2, 0) == "TS");
  CHECK(intensity_label(3, 0) == "STS");
  CHECK(intensity_label(4, 0) == "TY");
  CHECK(intensity_label(5, 0) == "STY");
  CHECK(intensity_label(6, 0) == "SuperTY");
  CHECK(intensity_label(0, 45.0) == "STY");  // falls back to wind thresholds
}
