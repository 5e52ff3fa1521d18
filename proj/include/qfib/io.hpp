// Copyright 2026 The qfibounds Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qfib/bounds.hpp"
#include "qfib/channel.hpp"
#include "qfib/lindblad.hpp"

namespace qfib {

// Malformed input file or configuration; carries a field-path diagnostic.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const char* model_name(Model m);
bool parse_model_name(const std::string& name, Model& out);

// JSON channel description: either {"model": ..., "p": ..., "phi": ...} or
// {"dim": ..., "kraus": [{"re": [[..]], "im": [[..]]}, ...], "dkraus": [...]}
// with "im" defaulting to zero.
Channel channel_from_json_text(const std::string& text, const std::string& origin);
Channel load_channel(const std::string& path);

// JSON master-equation description: {"dim", "H", "dH", "collapse",
// "dcollapse"} with matrices encoded as for channels; the collapse lists may
// be absent or empty.
LindbladModel lindblad_from_json_text(const std::string& text, const std::string& origin);
LindbladModel load_lindblad(const std::string& path);

enum class Mode { Bounds, Lindblad, Oracle };
enum class OutFormat { Csv, Json };

struct RunConfig {
  std::string input;   // channel or model file (JSON)
  std::string model;   // built-in model name, alternative to input
  double p = 0.75;
  double phi = 0.0;
  Mode mode = Mode::Bounds;
  int nmax = 100;
  int grid = 500;
  std::vector<BoundKind> kinds;  // empty selects all seven
  bool normalize = false;        // add value / (n · 4r²) column
  bool deterministic = false;    // suppress the timestamp header
  std::string out;               // output path; empty writes to stdout
  OutFormat format = OutFormat::Csv;
  double time = 10.0;            // lindblad mode: integration horizon
  int steps = 100;               // lindblad mode: initial step count
  int threads = 0;               // g-table workers; 0 picks automatically
  int accgrid = 0;               // parallel_dp resolution; 0 picks 4·nmax
};

// Executes one configuration. Returns 0 on success, 2 on input/config
// errors, 3 on solver failures; diagnostics go to stderr.
int run(const RunConfig& cfg);

}  // namespace qfib
