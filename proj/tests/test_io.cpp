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

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "qfib/channel.hpp"
#include "qfib/io.hpp"

namespace {

using nlohmann::json;
using qfib::CMat;
using qfib::Channel;
using qfib::Model;
using qfib::RunConfig;

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  REQUIRE(f.good());
  f << text;
}

// Serializes one matrix as {"re": [[..]], "im": [[..]]}, dropping "im" when
// the matrix is real so the default-zero branch gets exercised too.
json matrix_to_json(const CMat& m) {
  json re = json::array(), im = json::array();
  bool any_im = false;
  for (int r = 0; r < m.rows(); ++r) {
    json rrow = json::array(), irow = json::array();
    for (int c = 0; c < m.cols(); ++c) {
      rrow.push_back(m(r, c).real());
      irow.push_back(m(r, c).imag());
      if (m(r, c).imag() != 0.0) any_im = true;
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  json out;
  out["re"] = std::move(re);
  if (any_im) out["im"] = std::move(im);
  return out;
}

double max_abs_diff(const CMat& a, const CMat& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

struct CsvRow {
  std::string index, kind, value, norm;
};

// Splits a rendered CSV report into comment lines and data rows.
void parse_csv(const std::string& text, std::vector<std::string>& comments,
               std::string& header, std::vector<CsvRow>& rows) {
  std::istringstream is(text);
  std::string line;
  header.clear();
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      comments.push_back(line);
      continue;
    }
    if (header.empty()) {
      header = line;
      continue;
    }
    CsvRow row;
    std::istringstream ls(line);
    std::getline(ls, row.index, ',');
    std::getline(ls, row.kind, ',');
    std::getline(ls, row.value, ',');
    std::getline(ls, row.norm, ',');
    rows.push_back(std::move(row));
  }
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("model names round-trip") {
    for (Model m : {Model::DephasingPerp, Model::DephasingPar, Model::DampingPerp,
                    Model::DampingPar}) {
      Model back;
      REQUIRE(qfib::parse_model_name(qfib::model_name(m), back));
      CHECK(back == m);
    }
    Model out;
    CHECK_FALSE(qfib::parse_model_name("frobnicate", out));
    CHECK_FALSE(qfib::parse_model_name("", out));
  }

  TEST_CASE("model-keyed JSON matches the direct construction") {
    const Channel want = qfib::build_model({Model::DampingPar, 0.3, 0.2});
    const Channel got = qfib::channel_from_json_text(
        R"({"model": "damping_par", "p": 0.3, "phi": 0.2})", "probe");
    REQUIRE(got.rank() == want.rank());
    for (int k = 0; k < got.rank(); ++k) {
      CHECK(max_abs_diff(got.kraus[static_cast<size_t>(k)],
                         want.kraus[static_cast<size_t>(k)]) <= 1e-15);
      CHECK(max_abs_diff(got.dkraus[static_cast<size_t>(k)],
                         want.dkraus[static_cast<size_t>(k)]) <= 1e-15);
    }
  }

  TEST_CASE("explicit Kraus JSON reproduces the model channel") {
    const Channel want = qfib::build_model({Model::DephasingPerp, 0.75, 0.3});
    json j;
    j["dim"] = 2;
    j["kraus"] = json::array();
    j["dkraus"] = json::array();
    for (int k = 0; k < want.rank(); ++k) {
      j["kraus"].push_back(matrix_to_json(want.kraus[static_cast<size_t>(k)]));
      j["dkraus"].push_back(matrix_to_json(want.dkraus[static_cast<size_t>(k)]));
    }
    const Channel got = qfib::channel_from_json_text(j.dump(), "probe");
    REQUIRE(got.dim == 2);
    REQUIRE(got.rank() == want.rank());
    for (int k = 0; k < got.rank(); ++k) {
      CHECK(max_abs_diff(got.kraus[static_cast<size_t>(k)],
                         want.kraus[static_cast<size_t>(k)]) <= 1e-15);
      CHECK(max_abs_diff(got.dkraus[static_cast<size_t>(k)],
                         want.dkraus[static_cast<size_t>(k)]) <= 1e-15);
    }
  }

  TEST_CASE("parse diagnostics name the offending field") {
    // Wrong row length inside the second Kraus operator.
    const std::string bad_row = R"({
      "dim": 2,
      "kraus": [{"re": [[1, 0], [0, 1]]}, {"re": [[1, 0], [0]]}],
      "dkraus": [{"re": [[0, 0], [0, 0]]}, {"re": [[0, 0], [0, 0]]}]
    })";
    try {
      qfib::channel_from_json_text(bad_row, "probe");
      FAIL("expected a parse error");
    } catch (const qfib::ParseError& e) {
      CHECK(contains(e.what(), "probe.kraus[1].re"));
      CHECK(contains(e.what(), "row 1"));
    }

    CHECK_THROWS_WITH_AS(
        qfib::channel_from_json_text(R"({"dim": 2, "kraus": []})", "probe"),
        doctest::Contains("missing \"dkraus\""), qfib::ParseError);

    // Unknown model names list the valid ones.
    try {
      qfib::channel_from_json_text(R"({"model": "frobnicate"})", "probe");
      FAIL("expected a parse error");
    } catch (const qfib::ParseError& e) {
      CHECK(contains(e.what(), "frobnicate"));
      CHECK(contains(e.what(), "known:"));
      CHECK(contains(e.what(), "dephasing_perp"));
    }

    // Out-of-range model parameter surfaces as a parse error, not a crash.
    CHECK_THROWS_AS(
        qfib::channel_from_json_text(R"({"model": "dephasing_perp", "p": 1.5})", "probe"),
        qfib::ParseError);

    // Syntax errors carry the origin label.
    try {
      qfib::channel_from_json_text("{not json", "probe");
      FAIL("expected a parse error");
    } catch (const qfib::ParseError& e) {
      CHECK(contains(e.what(), "probe"));
    }

    CHECK_THROWS_WITH_AS(qfib::channel_from_json_text("[1, 2]", "probe"),
                         doctest::Contains("expected a JSON object"), qfib::ParseError);
  }

  TEST_CASE("master-equation JSON parses and validates") {
    const std::string noiseless = R"({
      "dim": 2,
      "H": {"re": [[0, 0], [0, 0]]},
      "dH": {"re": [[0.5, 0], [0, -0.5]]}
    })";
    const qfib::LindbladModel m = qfib::lindblad_from_json_text(noiseless, "probe");
    CHECK(m.dim == 2);
    CHECK(m.jumps() == 0);
    CHECK(m.dH(0, 0).real() == doctest::Approx(0.5).epsilon(1e-15));

    const std::string with_noise = R"({
      "dim": 2,
      "H": {"re": [[0, 0], [0, 0]]},
      "dH": {"re": [[0.5, 0], [0, -0.5]]},
      "collapse": [{"re": [[0.7, 0], [0, -0.7]]}],
      "dcollapse": [{"re": [[0, 0], [0, 0]]}]
    })";
    CHECK(qfib::lindblad_from_json_text(with_noise, "probe").jumps() == 1);

    CHECK_THROWS_WITH_AS(
        qfib::lindblad_from_json_text(R"({"dim": 2, "H": {"re": [[0,0],[0,0]]}})", "probe"),
        doctest::Contains("missing \"dH\""), qfib::ParseError);
  }

  TEST_CASE("run rejects inconsistent configurations") {
    RunConfig cfg;  // neither input nor model
    CHECK(qfib::run(cfg) == 2);

    cfg.model = "dephasing_perp";
    cfg.input = "also-a-file.json";
    CHECK(qfib::run(cfg) == 2);

    cfg.input.clear();
    cfg.model = "frobnicate";
    CHECK(qfib::run(cfg) == 2);

    cfg.model = "dephasing_perp";
    cfg.nmax = 0;
    CHECK(qfib::run(cfg) == 2);

    cfg = RunConfig{};
    cfg.mode = qfib::Mode::Oracle;
    cfg.input = "file.json";  // oracle mode computes from --p/--phi only
    CHECK(qfib::run(cfg) == 2);

    cfg = RunConfig{};
    cfg.mode = qfib::Mode::Lindblad;
    cfg.model = "dephasing_perp";  // lindblad mode needs an explicit file
    CHECK(qfib::run(cfg) == 2);
  }

  TEST_CASE("CSV and JSON reports carry identical payloads") {
    RunConfig cfg;
    cfg.model = "dephasing_perp";
    cfg.p = 0.75;
    cfg.nmax = 4;
    cfg.grid = 60;
    cfg.deterministic = true;
    cfg.kinds = {qfib::BoundKind::Parallel, qfib::BoundKind::AdaptiveIter};
    cfg.out = "io_identity.csv";
    cfg.format = qfib::OutFormat::Csv;
    REQUIRE(qfib::run(cfg) == 0);
    cfg.out = "io_identity.json";
    cfg.format = qfib::OutFormat::Json;
    REQUIRE(qfib::run(cfg) == 0);

    std::vector<std::string> comments;
    std::string header;
    std::vector<CsvRow> rows;
    parse_csv(slurp("io_identity.csv"), comments, header, rows);
    CHECK(header == "n,kind,value,normalized");
    REQUIRE(rows.size() == 8);  // two kinds x nmax

    const json j = json::parse(slurp("io_identity.json"));
    REQUIRE(j.at("rows").size() == rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
      const json& jr = j.at("rows").at(i);
      CHECK(jr.at("n").get<long long>() == std::atoll(rows[i].index.c_str()));
      CHECK(jr.at("kind").get<std::string>() == rows[i].kind);
      // Both encoders print with the same 10-digit format, so the payloads
      // must agree bit-for-bit after parsing.
      CHECK(jr.at("value").get<double>() == std::strtod(rows[i].value.c_str(), nullptr));
    }
    CHECK(j.at("meta").at("tool").get<std::string>() == "qfibounds");
    CHECK(j.at("meta").at("nmax").get<double>() == 4.0);
    CHECK(j.at("meta").at("l").is_number());
    CHECK(j.at("meta").at("r").is_number());
    CHECK(j.at("warnings").is_array());

    std::remove("io_identity.csv");
    std::remove("io_identity.json");
  }

  TEST_CASE("deterministic runs are byte-identical") {
    RunConfig cfg;
    cfg.model = "dephasing_perp";
    cfg.nmax = 3;
    cfg.grid = 40;
    cfg.deterministic = true;
    cfg.kinds = {qfib::BoundKind::Parallel};
    cfg.out = "io_det_a.csv";
    REQUIRE(qfib::run(cfg) == 0);
    cfg.out = "io_det_b.csv";
    REQUIRE(qfib::run(cfg) == 0);
    const std::string a = slurp("io_det_a.csv");
    CHECK(a == slurp("io_det_b.csv"));
    CHECK_FALSE(contains(a, "# generated:"));

    // Without the flag a timestamp header appears.
    cfg.deterministic = false;
    cfg.out = "io_det_c.csv";
    REQUIRE(qfib::run(cfg) == 0);
    CHECK(contains(slurp("io_det_c.csv"), "# generated: "));
    std::remove("io_det_a.csv");
    std::remove("io_det_b.csv");
    std::remove("io_det_c.csv");
  }

  TEST_CASE("normalized column compares against n single uses") {
    RunConfig cfg;
    cfg.model = "dephasing_perp";
    cfg.p = 0.75;
    cfg.nmax = 2;
    cfg.grid = 80;
    cfg.deterministic = true;
    cfg.normalize = true;
    cfg.kinds = {qfib::BoundKind::Parallel};
    cfg.format = qfib::OutFormat::Json;
    cfg.out = "io_norm.json";
    REQUIRE(qfib::run(cfg) == 0);
    const json j = json::parse(slurp("io_norm.json"));
    const double f1 = j.at("meta").at("f1").get<double>();
    CHECK(f1 == doctest::Approx(1.0).epsilon(1e-6));  // 4 r^2 with r = 1/2
    REQUIRE(j.at("rows").size() == 2);
    // n = 1: the parallel bound equals the single-use ceiling exactly.
    CHECK(j.at("rows").at(0).at("normalized").get<double>() ==
          doctest::Approx(1.0).epsilon(1e-6));
    for (const json& row : j.at("rows")) {
      const double n = row.at("n").get<double>();
      const double v = row.at("value").get<double>();
      const double norm = row.at("normalized").get<double>();
      CHECK(norm == doctest::Approx(v / (n * f1)).epsilon(1e-8));
    }
    std::remove("io_norm.json");
  }

  TEST_CASE("inapplicable bounds are omitted with a warning") {
    RunConfig cfg;
    cfg.model = "dephasing_par";  // l = 0: no asymptotic regime
    cfg.p = 0.75;
    cfg.nmax = 2;
    cfg.grid = 40;
    cfg.deterministic = true;
    cfg.kinds = {qfib::BoundKind::Parallel, qfib::BoundKind::Asymptotic};
    cfg.format = qfib::OutFormat::Json;
    cfg.out = "io_warn.json";
    REQUIRE(qfib::run(cfg) == 0);
    const json j = json::parse(slurp("io_warn.json"));
    REQUIRE(j.at("warnings").size() >= 1);
    CHECK(contains(j.at("warnings").at(0).get<std::string>(), "asymptotic"));
    for (const json& row : j.at("rows")) {
      CHECK(row.at("kind").get<std::string>() != "asymptotic");
    }
    std::remove("io_warn.json");
  }

  TEST_CASE("oracle mode reports the three reference protocols") {
    RunConfig cfg;
    cfg.mode = qfib::Mode::Oracle;
    cfg.p = 0.75;
    cfg.phi = 0.0;
    cfg.deterministic = true;
    cfg.out = "io_oracle.csv";
    REQUIRE(qfib::run(cfg) == 0);
    std::vector<std::string> comments;
    std::string header;
    std::vector<CsvRow> rows;
    parse_csv(slurp("io_oracle.csv"), comments, header, rows);
    REQUIRE(rows.size() == 3);
    for (const CsvRow& row : rows) CHECK(row.index == "2");
    CHECK(rows[0].kind == "sequential_c");
    CHECK(rows[1].kind == "parallel_e");
    CHECK(rows[2].kind == "adaptive_ad");
    CHECK(std::strtod(rows[1].value.c_str(), nullptr) == doctest::Approx(2.5).epsilon(1e-8));
    CHECK(std::strtod(rows[2].value.c_str(), nullptr) == doctest::Approx(3.0).epsilon(1e-8));
    std::remove("io_oracle.csv");
  }

  TEST_CASE("lindblad mode integrates a model file end to end") {
    write_text("io_lind_model.json", R"({
      "dim": 2,
      "H": {"re": [[0, 0], [0, 0]]},
      "dH": {"re": [[0.5, 0], [0, -0.5]]}
    })");
    RunConfig cfg;
    cfg.mode = qfib::Mode::Lindblad;
    cfg.input = "io_lind_model.json";
    cfg.time = 2.0;
    cfg.steps = 50;
    cfg.deterministic = true;
    cfg.format = qfib::OutFormat::Json;
    cfg.out = "io_lind.json";
    REQUIRE(qfib::run(cfg) == 0);
    const json j = json::parse(slurp("io_lind.json"));
    CHECK(j.at("meta").at("span").get<std::string>() == "not_in_span");
    CHECK(j.at("meta").at("coefficient").get<double>() == doctest::Approx(1.0).epsilon(1e-6));
    const json& rows = j.at("rows");
    REQUIRE(rows.size() >= 51);
    CHECK(rows.at(0).at("t").get<double>() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rows.at(rows.size() - 1).at("t").get<double>() == doctest::Approx(2.0).epsilon(1e-9));
    // Noiseless phase estimation: F(t) = t^2, certified from above.
    const double last = rows.at(rows.size() - 1).at("value").get<double>();
    CHECK(last >= 4.0 - 1e-9);
    CHECK(last <= 4.0 * 1.02);
    for (const json& row : rows) CHECK(row.at("kind").get<std::string>() == "f_bound");
    std::remove("io_lind_model.json");
    std::remove("io_lind.json");
  }
}
