//------------------------------------------------------------------------------
//
//   Copyright 2026 The cet Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------
#include <gtest/gtest.h>

#include "cet/json_io.hpp"
#include "test_util.hpp"

namespace cet {
namespace {

TEST(JsonIo, PmfRoundTrip) {
  const Json in = parse_json_text(R"({"x_labels":["a","b"],"y_labels":["u","v","e"],
                                      "pmf":[[0.05,0,0.45],[0,0.05,0.45]]})");
  const JointPmf j = pmf_from_json(in);
  EXPECT_EQ(j.x_labels(), (std::vector<std::string>{"a", "b"}));
  EXPECT_LE((j.matrix() - sbes(0.9).matrix()).cwiseAbs().maxCoeff(), 1e-15);
  const JointPmf back = pmf_from_json(to_json(j));
  EXPECT_EQ(back.matrix(), j.matrix());
  EXPECT_EQ(back.y_labels(), j.y_labels());
}

TEST(JsonIo, PmfDefaultsAndErrors) {
  const JointPmf j = pmf_from_json(parse_json_text(R"({"pmf":[[0.5,0.5],[0,0]]})"));
  EXPECT_EQ(j.nx(), 1);
  EXPECT_EQ(j.y_labels(), (std::vector<std::string>{"0", "1"}));
  EXPECT_THROW(pmf_from_json(parse_json_text(R"({"pmf":[[0.5,0.6],[0,0]]})")), ValidationError);
  EXPECT_NO_THROW(pmf_from_json(parse_json_text(R"({"pmf":[[0.5,0.6],[0,0]]})"), true));
  EXPECT_THROW(pmf_from_json(parse_json_text(R"({"pmf":[[0.5],[0.25,0.25]]})")), ValidationError);
  EXPECT_THROW(pmf_from_json(parse_json_text(R"({"pmf":[["a"]]})")), ValidationError);
  EXPECT_THROW(pmf_from_json(parse_json_text(R"({"x":1})")), ValidationError);
  EXPECT_THROW(parse_json_text("{not json"), ValidationError);
  EXPECT_THROW(read_json_file("/nonexistent/file.json"), ValidationError);
}

TEST(JsonIo, FactorizationRoundTrip) {
  const MarkovFactorization f = g_closed_form_sbes(0.9).certificate;
  const MarkovFactorization g = factorization_from_json(parse_json_text(to_json(f).dump()));
  EXPECT_EQ(g.p_w(), f.p_w());
  EXPECT_EQ(g.px_given_w(), f.px_given_w());
  EXPECT_EQ(g.py_given_w(), f.py_given_w());
  EXPECT_THROW(factorization_from_json(parse_json_text(R"({"p_w":[1]})")), ValidationError);
}

TEST(JsonIo, SimcodeRoundTripAndValidation) {
  SimulationCode s;
  s.factorization = g_closed_form_sbes(0.9).certificate;
  s.code = build_prefix_code(s.factorization.p_w());
  s.x_labels = {"0", "1"};
  s.y_labels = {"0", "1", "e"};
  const Json j = to_json(s);
  const SimulationCode t = simcode_from_json(j);
  EXPECT_EQ(t.code.codewords, s.code.codewords);
  EXPECT_NEAR(t.code.expected_length, s.code.expected_length, 1e-15);
  EXPECT_EQ(t.y_labels, s.y_labels);

  Json bad = j;
  bad["codewords"]["1"] = "0";
  EXPECT_THROW(simcode_from_json(bad), ValidationError);
  bad = j;
  bad["codewords"]["1"] = "2x";
  EXPECT_THROW(simcode_from_json(bad), ValidationError);
  bad = j;
  bad["codewords"].erase("2");
  EXPECT_THROW(simcode_from_json(bad), ValidationError);
  bad = j;
  bad["codewords"]["7"] = "111";
  EXPECT_THROW(simcode_from_json(bad), ValidationError);
  bad = j;
  bad.erase("codewords");
  EXPECT_THROW(simcode_from_json(bad), ValidationError);
}

TEST(JsonIo, ReportCarriesConfigAndNulls) {
  SolveReport r = g_closed_form_sbes(0.9);
  r.per_restart = {0.5, std::nan("")};
  const Json o = to_json(r);
  EXPECT_EQ(o["method"], "closed_form_sbes");
  EXPECT_TRUE(o["per_restart"][1].is_null());
  EXPECT_EQ(o["card"], 3);
  SolveConfig c;
  c.seed = 5;
  EXPECT_EQ(to_json(c)["seed"], 5);
  EXPECT_TRUE(to_json(c)["time_budget"].is_null());
}

}  // namespace
}  // namespace cet
