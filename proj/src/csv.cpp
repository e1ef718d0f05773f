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

#include "wsopt/csv.hpp"

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>

#include "wsopt/error.hpp"

namespace wsopt {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
}

std::string fail_at(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

Tick parse_tick(std::string_view text, std::size_t line, const char* field) {
  Tick v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    throw ParseError(fail_at(line, std::string(field) + " '" + std::string(text) +
                                       "' is not an unsigned integer"));
  }
  return v;
}

double parse_value(std::string_view text, std::size_t line) {
  double v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    throw ParseError(fail_at(line, "value '" + std::string(text) + "' is not a number"));
  }
  return v;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Reads lines, dropping a trailing CR. Returns false at end of input.
bool next_line(std::istream& in, std::string& line, std::size_t& number) {
  if (!std::getline(in, line)) return false;
  ++number;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

void expect_header(std::istream& in, std::string& line, std::size_t& number,
                   const std::string& header) {
  if (!next_line(in, line, number)) throw ParseError(fail_at(1, "missing header '" + header + "'"));
  if (line != header) {
    throw ParseError(fail_at(number, "expected header '" + header + "', got '" + line + "'"));
  }
}

}  // namespace

std::vector<Event> read_events(std::istream& in) {
  std::vector<Event> out;
  std::string line;
  std::size_t number = 0;
  expect_header(in, line, number, "ts,key,value");
  while (next_line(in, line, number)) {
    if (line.empty()) continue;
    auto fields = split(line);
    if (fields.size() != 3) {
      throw ParseError(fail_at(number, "expected 3 fields, found " + std::to_string(fields.size())));
    }
    out.push_back({parse_tick(fields[0], number, "ts"), std::string(fields[1]),
                   parse_value(fields[2], number)});
  }
  return out;
}

void write_events(std::ostream& out, const std::vector<Event>& events) {
  out << "ts,key,value\n";
  for (const auto& e : events) out << e.ts << ',' << e.key << ',' << format_value(e.value) << '\n';
}

void write_events(std::ostream& out, const EventBatch& events) {
  out << "ts,key,value\n";
  for (std::size_t i = 0; i < events.size(); ++i) {
    out << events.ts[i] << ',' << events.key_names[events.key[i]] << ','
        << format_value(events.value[i]) << '\n';
  }
}

std::vector<ResultRow> read_results(std::istream& in) {
  std::vector<ResultRow> out;
  std::string line;
  std::size_t number = 0;
  expect_header(in, line, number, "window_id,start,end,key,value");
  while (next_line(in, line, number)) {
    if (line.empty()) continue;
    auto fields = split(line);
    if (fields.size() != 5) {
      throw ParseError(fail_at(number, "expected 5 fields, found " + std::to_string(fields.size())));
    }
    try {
      WindowSpec w = WindowSpec::parse(std::string(fields[0]));
      Interval iv{parse_tick(fields[1], number, "start"), parse_tick(fields[2], number, "end")};
      out.push_back({w, iv, std::string(fields[3]), parse_value(fields[4], number)});
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(fail_at(number, e.what()));
    }
  }
  return out;
}

void write_results(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "window_id,start,end,key,value\n";
  for (const auto& r : rows) {
    out << r.window_id() << ',' << r.interval.start << ',' << r.interval.end << ',' << r.key << ','
        << format_value(r.value) << '\n';
  }
}

}  // namespace wsopt
