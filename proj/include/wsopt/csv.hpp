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

#pragma once

#include <istream>
#include <ostream>
#include <vector>

#include "wsopt/engine.hpp"

namespace wsopt {

/// Event CSV with header `ts,key,value`. Throws ParseError naming the line.
std::vector<Event> read_events(std::istream& in);
void write_events(std::ostream& out, const std::vector<Event>& events);
void write_events(std::ostream& out, const EventBatch& events);

/// Result CSV with header `window_id,start,end,key,value`.
std::vector<ResultRow> read_results(std::istream& in);
void write_results(std::ostream& out, const std::vector<ResultRow>& rows);

}  // namespace wsopt
