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

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qfib/io.hpp"

namespace {

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fisher-information bounds for noisy-channel estimation strategies"};

  qfib::RunConfig cfg;
  std::string mode = "bounds";
  std::string format = "csv";
  std::string bounds_list;

  app.add_option("--input", cfg.input, "JSON file describing a channel or master equation");
  app.add_option("--model", cfg.model,
                 "built-in channel family: dephasing_perp, dephasing_par, damping_perp, "
                 "damping_par");
  app.add_option("--p", cfg.p, "noise parameter for --model and oracle mode (default 0.75)");
  app.add_option("--phi", cfg.phi, "phase point for --model and oracle mode (default 0)");
  app.add_option("--mode", mode, "bounds | lindblad | oracle (default bounds)");
  app.add_option("--nmax", cfg.nmax, "largest channel-use count (default 100)");
  app.add_option("--grid", cfg.grid, "trade-off curve sample count (default 500)");
  app.add_option("--bounds", bounds_list,
                 "comma-separated bound kinds (default: all): parallel, ad_old, ad_iter, "
                 "cs_iter, closed_form, asymptotic, parallel_dp");
  app.add_flag("--normalize", cfg.normalize, "emit value / (n * single-use value) column");
  app.add_flag("--deterministic", cfg.deterministic, "suppress the timestamp header");
  app.add_option("--out", cfg.out, "output file (default: stdout)");
  app.add_option("--format", format, "csv | json (default csv)");
  app.add_option("--time", cfg.time, "lindblad mode: integration horizon (default 10)");
  app.add_option("--steps", cfg.steps, "lindblad mode: initial step count (default 100)");
  app.add_option("--threads", cfg.threads, "worker threads for the trade-off grid (0 = auto)");
  app.add_option("--accgrid", cfg.accgrid,
                 "parallel_dp accumulator resolution (0 = 4 * nmax)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (mode == "bounds") {
    cfg.mode = qfib::Mode::Bounds;
  } else if (mode == "lindblad") {
    cfg.mode = qfib::Mode::Lindblad;
  } else if (mode == "oracle") {
    cfg.mode = qfib::Mode::Oracle;
  } else {
    std::cerr << "error: unknown mode \"" << mode << "\" (use bounds, lindblad, or oracle)\n";
    return 2;
  }

  if (format == "csv") {
    cfg.format = qfib::OutFormat::Csv;
  } else if (format == "json") {
    cfg.format = qfib::OutFormat::Json;
  } else {
    std::cerr << "error: unknown format \"" << format << "\" (use csv or json)\n";
    return 2;
  }

  for (const std::string& tok : split_commas(bounds_list)) {
    qfib::BoundKind k;
    if (!qfib::parse_kind(tok, k)) {
      std::cerr << "error: unknown bound kind \"" << tok << "\"\n";
      return 2;
    }
    cfg.kinds.push_back(k);
  }

  return qfib::run(cfg);
}
