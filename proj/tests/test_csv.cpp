/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <gtest/gtest.h>

#include <sstream>

#include "wsopt/csv.hpp"
#include "wsopt/datagen.hpp"
#include "wsopt/error.hpp"

using namespace wsopt;

TEST(Csv, EventsRoundTrip) {
  std::vector<Event> ev = constant_rate_stream(3, 50, 4, 12);
  std::stringstream buf;
  write_events(buf, ev);
  EXPECT_EQ(read_events(buf), ev);

  std::stringstream from_batch;
  write_events(from_batch, to_batch(ev));
  EXPECT_EQ(read_events(from_batch), ev);
}

TEST(Csv, ResultsRoundTrip) {
  std::vector<ResultRow> rows{{WindowSpec(20, 10), {10, 30}, "k1", 1.0 / 3.0},
                              {WindowSpec(4, 4), {0, 4}, "a", -2.5}};
  std::stringstream buf;
  write_results(buf, rows);
  EXPECT_EQ(read_results(buf), rows);
}

TEST(Csv, HeaderAndCrlf) {
  std::stringstream ok("ts,key,value\r\n0,a,1.5\r\n\r\n2,b,3\r\n");
  auto ev = read_events(ok);
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_EQ(ev[1], (Event{2, "b", 3}));

  std::stringstream wrong("time,key,value\n0,a,1\n");
  EXPECT_THROW(read_events(wrong), ParseError);
  std::stringstream empty("");
  EXPECT_THROW(read_events(empty), ParseError);
}

TEST(Csv, ErrorsNameTheLine) {
  auto message = [](const std::string& text) {
    std::stringstream in(text);
    try {
      read_events(in);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message("ts,key,value\n0,a,1\nx,a,1\n").find("line 3"), std::string::npos);
  EXPECT_NE(message("ts,key,value\n0,a\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("ts,key,value\n0,a,1\n1,a,abc\n").find("line 3"), std::string::npos);
  EXPECT_NE(message("ts,key,value\n-1,a,1\n").find("line 2"), std::string::npos);

  std::stringstream bad_window("window_id,start,end,key,value\n10:3,0,10,a,1\n");
  EXPECT_THROW(read_results(bad_window), ParseError);
}
