// Copyright 2026 The dplearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dplearn/io.h"

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "dplearn/decision_list.h"
#include "dplearn/random_source.h"
#include "dplearn/streams.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dplearn {
namespace {

using nlohmann::json;

TEST(ProvenanceTest, HashIsStableAndKeyOrderFree) {
  const json a = json::parse(R"({"b": 1, "a": [1, 2]})");
  const json b = json::parse(R"({"a": [1, 2], "b": 1})");
  EXPECT_EQ(ConfigHash(a), ConfigHash(b));
  EXPECT_NE(ConfigHash(a), ConfigHash(json::parse(R"({"a": [2, 1], "b": 1})")));
  EXPECT_EQ(HexHash(0xabc), "0000000000000abc");
  const json p = ToJson(Provenance{7, 0xabc});
  EXPECT_EQ(p["seed"], 7);
  EXPECT_EQ(p["format_version"], "1");
}

TEST(CsvTest, PacSampleRoundTrip) {
  RandomSource s(1);
  ASSERT_OK_AND_ASSIGN(FeatureFamily fam, FeatureFamily::Literals(5, true));
  ASSERT_OK_AND_ASSIGN(DecisionList t, RandomDecisionList(fam, 3, 1, s));
  ASSERT_OK_AND_ASSIGN(PacSample sample, GeneratePacSample(
                                             t, PacDistribution::Uniform(), 40, s));
  const std::string text = FormatPacSampleCsv(sample, Provenance{3, 4});
  EXPECT_EQ(text.rfind("#", 0), 0u);
  EXPECT_NE(text.find("x0,x1,x2,x3,x4,y\n"), std::string::npos);
  ASSERT_OK_AND_ASSIGN(PacSample back, ParsePacSampleCsv(text));
  ASSERT_EQ(back.size(), sample.size());
  for (size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back.examples[i].x, sample.examples[i].x);
    EXPECT_EQ(back.examples[i].label, sample.examples[i].label);
  }
}

TEST(CsvTest, PacSampleErrors) {
  EXPECT_FALSE(ParsePacSampleCsv("").ok());
  EXPECT_FALSE(ParsePacSampleCsv("x0,y\n1,2\n").ok());
  EXPECT_FALSE(ParsePacSampleCsv("x0,y\n1\n").ok());
  EXPECT_FALSE(ParsePacSampleCsv("x0,y\n1,a\n").ok());
  ASSERT_OK_AND_ASSIGN(PacSample ok,
                       ParsePacSampleCsv("# comment\n\nx0,x1,y\n1,0,1\r\n"));
  EXPECT_EQ(ok.size(), 1u);
}

TEST(CsvTest, StreamRoundTrip) {
  RandomSource s(2);
  ASSERT_OK_AND_ASSIGN(MarginHalfspace target, MajorityTarget(7, 3));
  ASSERT_OK_AND_ASSIGN(std::vector<OnlineExample> stream,
                       GenerateOnlineStream(target, 30, {}, s));
  const std::string text = FormatStreamCsv(stream, Provenance{});
  ASSERT_OK_AND_ASSIGN(std::vector<OnlineExample> back, ParseStreamCsv(text));
  ASSERT_EQ(back.size(), stream.size());
  for (size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].x, stream[i].x);
    EXPECT_EQ(back[i].y, stream[i].y);
  }
  EXPECT_FALSE(ParseStreamCsv("x0,y\n0,1\n").ok());
}

TEST(CsvTest, TranscriptColumns) {
  RunTranscript t;
  t.rounds.push_back({1, 1, -1, true, true, 1, 0});
  const std::string w =
      FormatTranscriptCsv(t, TranscriptFormat::kWinnow, Provenance{});
  EXPECT_NE(w.find("round,prediction,label,mistake,update,cumulative_updates\n"
                   "1,1,-1,1,1,1\n"),
            std::string::npos);
  const std::string d =
      FormatTranscriptCsv(t, TranscriptFormat::kDpWinnow, Provenance{});
  EXPECT_NE(d.find("round,prediction,label,mistake,update,k,epoch_id\n"
                   "1,1,-1,1,1,1,0\n"),
            std::string::npos);
}

TEST(JsonTest, DecisionListRoundTrip) {
  ASSERT_OK_AND_ASSIGN(
      DecisionList l,
      DecisionList::Create(
          4,
          {{Feature::Literal(1), 1},
           {Feature::NegatedLiteral(3), 0},
           {Feature::Conjunction({{0, false}, {2, true}}), 1}},
          0));
  const json j = ToJson(l);
  EXPECT_EQ(j["terms"][1]["feature"], "!x3");
  ASSERT_OK_AND_ASSIGN(DecisionList back, DecisionListFromJson(j));
  EXPECT_EQ(back.ToString(), l.ToString());
  EXPECT_FALSE(DecisionListFromJson(json::parse(R"({"terms": []})")).ok());
  EXPECT_FALSE(DecisionListFromJson(json::parse(
                   R"({"dimension": 2, "terms": [{"feature": "x9", "bit": 1}],
                       "default_bit": 0})"))
                   .ok());
}

TEST(JsonTest, HalfspaceRoundTrip) {
  ASSERT_OK_AND_ASSIGN(MarginHalfspace h,
                       MarginHalfspace::Create({0.25, -0.75}, 0.2));
  const json j = ToJson(h);
  EXPECT_EQ(j["dimension"], 2);
  ASSERT_OK_AND_ASSIGN(MarginHalfspace back, MarginHalfspaceFromJson(j));
  EXPECT_EQ(back.weights, h.weights);
  EXPECT_EQ(back.claimed_margin, h.claimed_margin);
  EXPECT_FALSE(MarginHalfspaceFromJson(json::parse(
                   R"({"weights": [0.5], "claimed_margin": 0.1,
                       "dimension": 1})"))
                   .ok());
}

TEST(JsonTest, ReportsUseNullForInfinity) {
  RatioReport r;
  r.statistic = INFINITY;
  const json j = ToJson(r);
  EXPECT_TRUE(j["statistic"].is_null());
  EXPECT_EQ(j["verdict"], "inconclusive");
}

TEST(FileTest, AtomicWriteAndRead) {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "dplearn_io_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "a.json").string();
  ASSERT_OK(WriteFileAtomic(path, DumpJson(json{{"k", 1}})));
  ASSERT_OK_AND_ASSIGN(json j, ReadJsonFile(path));
  EXPECT_EQ(j["k"], 1);
  ASSERT_OK_AND_ASSIGN(std::string text, ReadFile(path));
  EXPECT_EQ(text.back(), '\n');
  EXPECT_CODE(ReadFile((dir / "missing").string()),
              absl::StatusCode::kNotFound);
  ASSERT_OK(WriteFileAtomic((dir / "bad.json").string(), "{nope"));
  EXPECT_CODE(ReadJsonFile((dir / "bad.json").string()),
              absl::StatusCode::kInvalidArgument);
  int leftovers = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    leftovers += e.path().extension() == ".tmp";
  }
  EXPECT_EQ(leftovers, 0);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace dplearn
