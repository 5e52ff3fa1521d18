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

#include "qfib/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "qfib/gauge.hpp"
#include "qfib/qfi.hpp"

namespace qfib {

namespace {

using nlohmann::json;

std::string fmt10(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

// The JSON emitter stores the value that the CSV string parses back to, so
// both formats carry bit-identical numeric payloads.
double payload(double v) { return std::strtod(fmt10(v).c_str(), nullptr); }

std::string timestamp_utc() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::tm tmv{};
  gmtime_r(&t, &tmv);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tmv);
  return buf;
}

CMat parse_matrix(const json& j, int dim, const std::string& path) {
  if (!j.is_object()) {
    throw ParseError(path + ": expected an object with \"re\" and optional \"im\"");
  }
  auto parse_part = [&](const json& arr, const std::string& part) {
    RMat m(dim, dim);
    if (!arr.is_array() || static_cast<int>(arr.size()) != dim) {
      throw ParseError(path + "." + part + ": expected " + std::to_string(dim) + " rows");
    }
    for (int r = 0; r < dim; ++r) {
      const json& row = arr[static_cast<size_t>(r)];
      if (!row.is_array() || static_cast<int>(row.size()) != dim) {
        throw ParseError(path + "." + part + ": row " + std::to_string(r) + " must have " +
                         std::to_string(dim) + " entries");
      }
      for (int c = 0; c < dim; ++c) {
        const json& cell = row[static_cast<size_t>(c)];
        if (!cell.is_number()) {
          throw ParseError(path + "." + part + "[" + std::to_string(r) + "][" +
                           std::to_string(c) + "]: expected a number");
        }
        m(r, c) = cell.get<double>();
      }
    }
    return m;
  };
  if (!j.contains("re")) throw ParseError(path + ": missing \"re\"");
  const RMat re = parse_part(j.at("re"), "re");
  RMat im = RMat::Zero(dim, dim);
  if (j.contains("im")) im = parse_part(j.at("im"), "im");
  return re.cast<Complex>() + Complex(0, 1) * im.cast<Complex>();
}

std::vector<CMat> parse_matrix_list(const json& j, int dim, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array of matrices");
  std::vector<CMat> out;
  out.reserve(j.size());
  for (size_t k = 0; k < j.size(); ++k) {
    out.push_back(parse_matrix(j[k], dim, path + "[" + std::to_string(k) + "]"));
  }
  return out;
}

int parse_dim(const json& j, const std::string& origin) {
  if (!j.contains("dim") || !j.at("dim").is_number_integer()) {
    throw ParseError(origin + ": missing integer \"dim\"");
  }
  const int dim = j.at("dim").get<int>();
  if (dim < 1) throw ParseError(origin + ".dim: must be positive");
  return dim;
}

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string known_models() {
  std::string s;
  for (Model m : {Model::DephasingPerp, Model::DephasingPar, Model::DampingPerp,
                  Model::DampingPar}) {
    if (!s.empty()) s += ", ";
    s += model_name(m);
  }
  return s;
}

// One output row shared by all modes: an index column (n or t), a kind token,
// the value, and an optional normalized value.
struct Row {
  double index = 0.0;
  bool integer_index = true;
  std::string kind;
  double value = 0.0;
  bool has_norm = false;
  double norm = 0.0;
};

struct Report {
  std::string mode;
  std::string source;
  std::string index_column = "n";
  std::vector<std::pair<std::string, std::string>> meta;  // ordered key/value
  std::vector<std::string> warnings;
  std::vector<Row> rows;
  bool norm_column = false;
};

std::string render_csv(const Report& rep, bool deterministic) {
  std::ostringstream os;
  os << "# tool: qfibounds\n";
  os << "# mode: " << rep.mode << "\n";
  os << "# source: " << rep.source << "\n";
  if (!deterministic) os << "# generated: " << timestamp_utc() << "\n";
  for (const auto& [k, v] : rep.meta) os << "# " << k << ": " << v << "\n";
  for (const std::string& w : rep.warnings) os << "# warning: " << w << "\n";
  os << rep.index_column << ",kind,value,normalized\n";
  for (const Row& row : rep.rows) {
    if (row.integer_index) {
      os << static_cast<long long>(row.index);
    } else {
      os << fmt10(row.index);
    }
    os << "," << row.kind << "," << fmt10(row.value) << ",";
    if (row.has_norm) os << fmt10(row.norm);
    os << "\n";
  }
  return os.str();
}

std::string render_json(const Report& rep, bool deterministic) {
  json out;
  json meta;
  meta["tool"] = "qfibounds";
  meta["mode"] = rep.mode;
  meta["source"] = rep.source;
  if (!deterministic) meta["generated"] = timestamp_utc();
  for (const auto& [k, v] : rep.meta) {
    // Numeric metadata round-trips as numbers; anything else stays a string.
    char* end = nullptr;
    const double num = std::strtod(v.c_str(), &end);
    if (end && *end == '\0' && !v.empty()) {
      meta[k] = num;
    } else {
      meta[k] = v;
    }
  }
  out["meta"] = meta;
  out["warnings"] = rep.warnings;
  json rows = json::array();
  for (const Row& row : rep.rows) {
    json r;
    if (row.integer_index) {
      r[rep.index_column] = static_cast<long long>(row.index);
    } else {
      r[rep.index_column] = payload(row.index);
    }
    r["kind"] = row.kind;
    r["value"] = payload(row.value);
    if (row.has_norm) r["normalized"] = payload(row.norm);
    rows.push_back(std::move(r));
  }
  out["rows"] = std::move(rows);
  return out.dump(2) + "\n";
}

void write_report(const Report& rep, const RunConfig& cfg) {
  const std::string text = cfg.format == OutFormat::Csv ? render_csv(rep, cfg.deterministic)
                                                        : render_json(rep, cfg.deterministic);
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw ParseError(cfg.out + ": cannot open for writing");
  f << text;
  if (!f) throw ParseError(cfg.out + ": write failed");
}

Channel resolve_channel(const RunConfig& cfg, std::string& source) {
  if (!cfg.input.empty() && !cfg.model.empty()) {
    throw ParseError("provide either --input or --model, not both");
  }
  if (!cfg.input.empty()) {
    source = "file " + cfg.input;
    return load_channel(cfg.input);
  }
  if (cfg.model.empty()) {
    throw ParseError("no channel given: provide --input FILE or --model NAME");
  }
  Model m;
  if (!parse_model_name(cfg.model, m)) {
    throw ParseError("unknown model \"" + cfg.model + "\" (known: " + known_models() + ")");
  }
  std::ostringstream os;
  os << "model " << cfg.model << " p=" << fmt10(cfg.p) << " phi=" << fmt10(cfg.phi);
  source = os.str();
  try {
    return build_model({m, cfg.p, cfg.phi});
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

void run_bounds(const RunConfig& cfg) {
  if (cfg.nmax < 1) throw ParseError("--nmax must be at least 1");

  std::string source;
  const Channel ch = resolve_channel(cfg, source);

  std::vector<BoundKind> kinds;
  for (BoundKind k : all_bound_kinds) {
    const bool wanted = cfg.kinds.empty() ||
                        std::find(cfg.kinds.begin(), cfg.kinds.end(), k) != cfg.kinds.end();
    if (wanted) kinds.push_back(k);
  }

  GaugeOptions gopt;
  gopt.threads = cfg.threads;
  GTable gt;
  try {
    gt = g_table(ch, cfg.grid, gopt);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  const double f1 = 4.0 * gt.r * gt.r;

  Report rep;
  rep.mode = "bounds";
  rep.source = source;
  rep.meta = {{"l", fmt10(gt.l)},
              {"r", fmt10(gt.r)},
              {"f1", fmt10(f1)},
              {"grid", std::to_string(gt.size())},
              {"nmax", std::to_string(cfg.nmax)},
              {"feas_tol", fmt10(gopt.sdp.accept_feas)},
              {"gap_tol", fmt10(gopt.sdp.accept_gap)}};
  rep.norm_column = cfg.normalize;

  const bool can_normalize = f1 > 0.0;
  if (cfg.normalize && !can_normalize) {
    rep.warnings.push_back("normalization unavailable: single-use value is zero");
  }

  for (BoundKind k : kinds) {
    BoundSeries series;
    try {
      series = compute_bound(k, gt, cfg.nmax, cfg.accgrid);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
    if (!series.applicable) {
      rep.warnings.push_back(std::string(kind_name(k)) +
                             " omitted: defined only for channels with l > 0");
      continue;
    }
    for (int n = 1; n <= cfg.nmax; ++n) {
      Row row;
      row.index = n;
      row.kind = kind_name(k);
      row.value = series.values[static_cast<size_t>(n) - 1];
      if (cfg.normalize && can_normalize) {
        row.has_norm = true;
        row.norm = row.value / (static_cast<double>(n) * f1);
      }
      rep.rows.push_back(std::move(row));
    }
  }
  write_report(rep, cfg);
}

void run_lindblad(const RunConfig& cfg) {
  if (cfg.input.empty()) throw ParseError("lindblad mode requires --input FILE");
  if (!cfg.model.empty()) throw ParseError("lindblad mode takes --input, not --model");
  const LindbladModel m = load_lindblad(cfg.input);

  const SpanResult span = classify_span(m);
  std::vector<double> curve;
  try {
    curve = integrate_bound(m, cfg.time, cfg.steps);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }

  Report rep;
  rep.mode = "lindblad";
  rep.source = "file " + cfg.input;
  rep.index_column = "t";
  rep.meta = {{"span", span.in_span ? "in_span" : "not_in_span"},
              {"coefficient", fmt10(span.coefficient)},
              {"time", fmt10(cfg.time)},
              {"steps", std::to_string(static_cast<int>(curve.size()) - 1)}};

  const double dt = cfg.time / static_cast<double>(curve.size() - 1);
  for (size_t k = 0; k < curve.size(); ++k) {
    Row row;
    row.integer_index = false;
    row.index = static_cast<double>(k) * dt;
    row.kind = "f_bound";
    row.value = curve[k];
    rep.rows.push_back(std::move(row));
  }
  write_report(rep, cfg);
}

void run_oracle(const RunConfig& cfg) {
  if (!cfg.input.empty()) throw ParseError("oracle mode takes --p/--phi, not --input");
  Report rep;
  rep.mode = "oracle";
  {
    std::ostringstream os;
    os << "two-use protocols p=" << fmt10(cfg.p) << " phi=" << fmt10(cfg.phi);
    rep.source = os.str();
  }
  rep.meta = {{"p", fmt10(cfg.p)}, {"phi", fmt10(cfg.phi)}};

  const std::pair<const char*, IntroStrategy> protos[] = {
      {"sequential_c", IntroStrategy::SequentialC},
      {"parallel_e", IntroStrategy::ParallelE},
      {"adaptive_ad", IntroStrategy::AdaptiveAD}};
  for (const auto& [name, strat] : protos) {
    Row row;
    row.index = 2;  // all reference protocols use the channel twice
    row.kind = name;
    try {
      row.value = simulate_intro(cfg.p, cfg.phi, strat);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
    rep.rows.push_back(std::move(row));
  }
  write_report(rep, cfg);
}

}  // namespace

const char* model_name(Model m) {
  switch (m) {
    case Model::DephasingPerp: return "dephasing_perp";
    case Model::DephasingPar: return "dephasing_par";
    case Model::DampingPerp: return "damping_perp";
    case Model::DampingPar: return "damping_par";
  }
  return "unknown";
}

bool parse_model_name(const std::string& name, Model& out) {
  for (Model m : {Model::DephasingPerp, Model::DephasingPar, Model::DampingPerp,
                  Model::DampingPar}) {
    if (name == model_name(m)) {
      out = m;
      return true;
    }
  }
  return false;
}

Channel channel_from_json_text(const std::string& text, const std::string& origin) {
  const json j = parse_json_text(text, origin);
  if (!j.is_object()) throw ParseError(origin + ": expected a JSON object");

  if (j.contains("model")) {
    if (!j.at("model").is_string()) throw ParseError(origin + ".model: expected a string");
    Model m;
    const std::string name = j.at("model").get<std::string>();
    if (!parse_model_name(name, m)) {
      throw ParseError(origin + ".model: unknown model \"" + name + "\" (known: " +
                       known_models() + ")");
    }
    ModelSpec spec;
    spec.model = m;
    if (j.contains("p")) {
      if (!j.at("p").is_number()) throw ParseError(origin + ".p: expected a number");
      spec.p = j.at("p").get<double>();
    }
    if (j.contains("phi")) {
      if (!j.at("phi").is_number()) throw ParseError(origin + ".phi: expected a number");
      spec.phi = j.at("phi").get<double>();
    }
    try {
      return build_model(spec);
    } catch (const std::invalid_argument& e) {
      throw ParseError(origin + ": " + e.what());
    }
  }

  const int dim = parse_dim(j, origin);
  if (!j.contains("kraus")) throw ParseError(origin + ": missing \"kraus\"");
  if (!j.contains("dkraus")) throw ParseError(origin + ": missing \"dkraus\"");
  std::vector<CMat> kraus = parse_matrix_list(j.at("kraus"), dim, origin + ".kraus");
  std::vector<CMat> dkraus = parse_matrix_list(j.at("dkraus"), dim, origin + ".dkraus");
  try {
    return make_channel(dim, std::move(kraus), std::move(dkraus));
  } catch (const std::invalid_argument& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

Channel load_channel(const std::string& path) {
  return channel_from_json_text(read_file(path), path);
}

LindbladModel lindblad_from_json_text(const std::string& text, const std::string& origin) {
  const json j = parse_json_text(text, origin);
  if (!j.is_object()) throw ParseError(origin + ": expected a JSON object");
  const int dim = parse_dim(j, origin);
  if (!j.contains("H")) throw ParseError(origin + ": missing \"H\"");
  if (!j.contains("dH")) throw ParseError(origin + ": missing \"dH\"");
  CMat h = parse_matrix(j.at("H"), dim, origin + ".H");
  CMat dh = parse_matrix(j.at("dH"), dim, origin + ".dH");
  std::vector<CMat> collapse, dcollapse;
  if (j.contains("collapse")) {
    collapse = parse_matrix_list(j.at("collapse"), dim, origin + ".collapse");
  }
  if (j.contains("dcollapse")) {
    dcollapse = parse_matrix_list(j.at("dcollapse"), dim, origin + ".dcollapse");
  }
  try {
    return make_lindblad(dim, std::move(h), std::move(dh), std::move(collapse),
                         std::move(dcollapse));
  } catch (const std::invalid_argument& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

LindbladModel load_lindblad(const std::string& path) {
  return lindblad_from_json_text(read_file(path), path);
}

int run(const RunConfig& cfg) {
  try {
    switch (cfg.mode) {
      case Mode::Bounds: run_bounds(cfg); break;
      case Mode::Lindblad: run_lindblad(cfg); break;
      case Mode::Oracle: run_oracle(cfg); break;
    }
    return 0;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qfib
