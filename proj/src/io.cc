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
#include <fstream>
#include <sstream>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "absl/strings/ascii.h"
#include "dplearn/random_source.h"

namespace dplearn {
namespace {

using nlohmann::json;

void AppendProvenance(std::string& out, const Provenance& p) {
  absl::StrAppend(&out, "# seed: ", p.seed, "\n");
  absl::StrAppend(&out, "# config_hash: ", HexHash(p.config_hash), "\n");
  absl::StrAppend(&out, "# format_version: ", p.format_version, "\n");
}

std::string FeatureHeader(int d) {
  std::string out;
  for (int j = 0; j < d; ++j) absl::StrAppend(&out, "x", j, ",");
  out += "y";
  return out;
}

struct CsvTable {
  std::vector<std::string> header;
  // Each row with its 1-based line number for error messages.
  std::vector<std::pair<int, std::vector<std::string>>> rows;
};

absl::StatusOr<CsvTable> ParseCsv(std::string_view text) {
  CsvTable table;
  int line_number = 0;
  bool have_header = false;
  for (absl::string_view line :
       absl::StrSplit(absl::string_view(text.data(), text.size()), '\n')) {
    ++line_number;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    for (absl::string_view f : absl::StrSplit(line, ',')) {
      fields.emplace_back(absl::StripAsciiWhitespace(f));
    }
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "Line ", line_number, ": expected ", table.header.size(),
          " fields, got ", fields.size()));
    }
    table.rows.emplace_back(line_number, std::move(fields));
  }
  if (!have_header) return absl::InvalidArgumentError("CSV has no header");
  return table;
}

absl::StatusOr<int> ParseIntField(const std::string& field, int line) {
  int v;
  if (!absl::SimpleAtoi(field, &v)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Line ", line, ": '", field, "' is not an integer"));
  }
  return v;
}

absl::StatusOr<json> GetField(const json& j, std::string_view key) {
  if (!j.is_object() || !j.contains(key)) {
    return absl::InvalidArgumentError(
        absl::StrCat("JSON is missing field '", std::string(key), "'"));
  }
  return j.at(std::string(key));
}

json IntervalJson(const Interval& i) { return json::array({i.lo, i.hi}); }

// JSON has no infinity; ratios that blow up are written as null.
json FiniteOrNull(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

}  // namespace

uint64_t ConfigHash(const json& config) { return Fnv1a(config.dump()); }

std::string HexHash(uint64_t hash) { return absl::StrFormat("%016x", hash); }

json ToJson(const Provenance& p) {
  return json{{"seed", p.seed},
              {"config_hash", HexHash(p.config_hash)},
              {"format_version", p.format_version}};
}

std::string FormatPacSampleCsv(const PacSample& sample, const Provenance& p) {
  std::string out;
  AppendProvenance(out, p);
  absl::StrAppend(&out, FeatureHeader(sample.dimension), "\n");
  for (const PacExample& e : sample.examples) {
    for (uint8_t v : e.x) absl::StrAppend(&out, static_cast<int>(v), ",");
    absl::StrAppend(&out, e.label, "\n");
  }
  return out;
}

absl::StatusOr<PacSample> ParsePacSampleCsv(std::string_view text) {
  absl::StatusOr<CsvTable> table = ParseCsv(text);
  if (!table.ok()) return table.status();
  const int d = static_cast<int>(table->header.size()) - 1;
  if (d < 1) return absl::InvalidArgumentError("Sample CSV needs x and y");
  std::vector<PacExample> rows;
  rows.reserve(table->rows.size());
  for (const auto& [line, fields] : table->rows) {
    PacExample e;
    e.x.resize(d);
    for (int j = 0; j <= d; ++j) {
      absl::StatusOr<int> v = ParseIntField(fields[j], line);
      if (!v.ok()) return v.status();
      if (*v != 0 && *v != 1) {
        return absl::InvalidArgumentError(
            absl::StrCat("Line ", line, ": PAC values must be 0 or 1"));
      }
      if (j < d) {
        e.x[j] = static_cast<uint8_t>(*v);
      } else {
        e.label = *v;
      }
    }
    rows.push_back(std::move(e));
  }
  return PacSample::Create(d, std::move(rows));
}

std::string FormatStreamCsv(std::span<const OnlineExample> stream,
                            const Provenance& p) {
  std::string out;
  AppendProvenance(out, p);
  const int d = stream.empty() ? 0 : static_cast<int>(stream[0].x.size());
  absl::StrAppend(&out, FeatureHeader(d), "\n");
  for (const OnlineExample& e : stream) {
    for (int8_t v : e.x) absl::StrAppend(&out, static_cast<int>(v), ",");
    absl::StrAppend(&out, e.y, "\n");
  }
  return out;
}

absl::StatusOr<std::vector<OnlineExample>> ParseStreamCsv(
    std::string_view text) {
  absl::StatusOr<CsvTable> table = ParseCsv(text);
  if (!table.ok()) return table.status();
  const int d = static_cast<int>(table->header.size()) - 1;
  if (d < 1) return absl::InvalidArgumentError("Stream CSV needs x and y");
  std::vector<OnlineExample> stream;
  stream.reserve(table->rows.size());
  for (const auto& [line, fields] : table->rows) {
    OnlineExample e;
    e.x.resize(d);
    for (int j = 0; j <= d; ++j) {
      absl::StatusOr<int> v = ParseIntField(fields[j], line);
      if (!v.ok()) return v.status();
      if (*v != 1 && *v != -1) {
        return absl::InvalidArgumentError(
            absl::StrCat("Line ", line, ": stream values must be +1 or -1"));
      }
      if (j < d) {
        e.x[j] = static_cast<int8_t>(*v);
      } else {
        e.y = *v;
      }
    }
    stream.push_back(std::move(e));
  }
  return stream;
}

std::string FormatTranscriptCsv(const RunTranscript& transcript,
                                TranscriptFormat format, const Provenance& p) {
  std::string out;
  AppendProvenance(out, p);
  if (format == TranscriptFormat::kWinnow) {
    out += "round,prediction,label,mistake,update,cumulative_updates\n";
  } else {
    out += "round,prediction,label,mistake,update,k,epoch_id\n";
  }
  for (const RoundRecord& r : transcript.rounds) {
    absl::StrAppend(&out, r.round, ",", r.prediction, ",", r.label, ",",
                    r.mistake ? 1 : 0, ",", r.update ? 1 : 0, ",",
                    r.cumulative_updates);
    if (format == TranscriptFormat::kDpWinnow) {
      absl::StrAppend(&out, ",", r.epoch_id);
    }
    out += "\n";
  }
  return out;
}

json ToJson(const DecisionList& list) {
  json terms = json::array();
  for (const Term& t : list.terms()) {
    terms.push_back(json{{"feature", t.feature.ToString()}, {"bit", t.bit}});
  }
  return json{{"dimension", list.dimension()},
              {"terms", std::move(terms)},
              {"default_bit", list.default_bit()}};
}

absl::StatusOr<DecisionList> DecisionListFromJson(const json& j) {
  absl::StatusOr<json> dim = GetField(j, "dimension");
  absl::StatusOr<json> terms = GetField(j, "terms");
  absl::StatusOr<json> def = GetField(j, "default_bit");
  for (const auto* s : {&dim, &terms, &def}) {
    if (!s->ok()) return s->status();
  }
  if (!dim->is_number_integer() || !terms->is_array() ||
      !def->is_number_integer()) {
    return absl::InvalidArgumentError("Malformed decision list JSON");
  }
  std::vector<Term> out;
  for (const json& t : *terms) {
    if (!t.is_object() || !t.contains("feature") || !t.contains("bit") ||
        !t["feature"].is_string() || !t["bit"].is_number_integer()) {
      return absl::InvalidArgumentError("Malformed decision list term");
    }
    absl::StatusOr<Feature> f = Feature::Parse(t["feature"].get<std::string>());
    if (!f.ok()) return f.status();
    out.push_back(Term{*std::move(f), t["bit"].get<int>()});
  }
  return DecisionList::Create(dim->get<int>(), std::move(out),
                              def->get<int>());
}

json ToJson(const MarginHalfspace& h) {
  return json{{"weights", h.weights},
              {"claimed_margin", h.claimed_margin},
              {"dimension", h.dimension}};
}

absl::StatusOr<MarginHalfspace> MarginHalfspaceFromJson(const json& j) {
  absl::StatusOr<json> w = GetField(j, "weights");
  absl::StatusOr<json> m = GetField(j, "claimed_margin");
  if (!w.ok()) return w.status();
  if (!m.ok()) return m.status();
  if (!w->is_array() || !m->is_number()) {
    return absl::InvalidArgumentError("Malformed halfspace JSON");
  }
  std::vector<double> weights;
  for (const json& v : *w) {
    if (!v.is_number()) {
      return absl::InvalidArgumentError("Halfspace weights must be numbers");
    }
    weights.push_back(v.get<double>());
  }
  if (j.contains("dimension") &&
      j["dimension"] != static_cast<int64_t>(weights.size())) {
    return absl::InvalidArgumentError(
        "Halfspace dimension does not match its weights");
  }
  return MarginHalfspace::Create(std::move(weights), m->get<double>());
}

json ToJson(const DpWinnowParams& p) {
  return json{{"horizon", p.horizon},
              {"dimension", p.dimension},
              {"rho", p.rho},
              {"epsilon", p.epsilon},
              {"delta", p.delta},
              {"beta", p.beta},
              {"c", p.c},
              {"switching_bound", p.switching_bound},
              {"epsilon_hat", p.epsilon_hat},
              {"eta", p.eta},
              {"threshold", p.threshold},
              {"sample_count", p.sample_count},
              {"solved", p.solved}};
}

json ToJson(const ParamResiduals& r) {
  return json{{"sample_count", r.sample_count},
              {"switching_bound", r.switching_bound},
              {"eta", r.eta},
              {"epsilon_hat", r.epsilon_hat},
              {"threshold", r.threshold},
              {"max", r.Max()},
              {"eta_below_half_rho", r.eta_below_half_rho}};
}

json ToJson(const RatioReport& r) {
  json cells = json::array();
  for (const CellEstimate& c : r.cells) {
    cells.push_back(json{{"cell", c.cell},
                         {"count_a", c.count_a},
                         {"count_b", c.count_b},
                         {"ci_a", IntervalJson(c.ci_a)},
                         {"ci_b", IntervalJson(c.ci_b)}});
  }
  return json{{"verdict", std::string(VerdictName(r.verdict))},
              {"statistic", FiniteOrNull(r.statistic)},
              {"point_ratio", FiniteOrNull(r.point_ratio)},
              {"bound", r.bound},
              {"ci", json::array({FiniteOrNull(r.ci.lo),
                                  FiniteOrNull(r.ci.hi)})},
              {"worst_cell", r.worst_cell},
              {"seed", r.seed},
              {"trials", r.trials},
              {"required_trials", r.required_trials},
              {"confidence", r.confidence},
              {"epsilon", r.epsilon},
              {"delta", r.delta},
              {"cells", std::move(cells)}};
}

json ToJson(const BoundReport& r) {
  return json{{"name", r.name},
              {"verdict", std::string(VerdictName(r.verdict))},
              {"violations", r.violations},
              {"statistic", r.statistic},
              {"bound", r.bound},
              {"ci", IntervalJson(r.ci)},
              {"seed", r.seed},
              {"trials", r.trials},
              {"confidence", r.confidence}};
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("Cannot open ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) return absl::DataLossError(absl::StrCat("Error reading ", path));
  return buffer.str();
}

absl::Status WriteFileAtomic(const std::string& path,
                             std::string_view contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      return absl::PermissionDeniedError(
          absl::StrCat("Cannot open ", tmp, " for writing"));
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
      return absl::DataLossError(absl::StrCat("Error writing ", tmp));
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    return absl::InternalError(
        absl::StrCat("Cannot move ", tmp, " to ", path));
  }
  return absl::OkStatus();
}

absl::StatusOr<json> ReadJsonFile(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  json j = json::parse(*text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat(path, " is not valid JSON"));
  }
  return j;
}

std::string DumpJson(const json& j) { return j.dump(2) + "\n"; }

}  // namespace dplearn
