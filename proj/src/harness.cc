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

#include "dplearn/harness.h"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <map>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dplearn/audit.h"
#include "dplearn/decision_list.h"
#include "dplearn/dp_winnow.h"
#include "dplearn/experiments.h"
#include "dplearn/io.h"
#include "dplearn/parallel.h"
#include "dplearn/random_source.h"
#include "dplearn/reductions.h"
#include "dplearn/streams.h"
#include "dplearn/winnow.h"

namespace dplearn {
namespace {

using nlohmann::json;

// State of one harness invocation. Artifacts are buffered and written at
// the end so that failed runs leave nothing behind.
struct Run {
  std::string subcommand;
  json config;
  Provenance provenance;
  RandomSource root{0};
  int workers = 1;
  bool zero_noise = false;
  std::map<std::string, std::string> artifacts;
  json summary = json::object();
  bool check_failed = false;
};

absl::StatusOr<int64_t> GetInt(const json& c, const char* key) {
  const json& v = c.at(key);
  if (v.is_number_integer()) return v.get<int64_t>();
  if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) {
    return static_cast<int64_t>(v.get<double>());
  }
  return absl::InvalidArgumentError(
      absl::StrCat("Config field '", key, "' must be an integer"));
}

absl::StatusOr<double> GetDouble(const json& c, const char* key) {
  const json& v = c.at(key);
  if (v.is_number()) return v.get<double>();
  return absl::InvalidArgumentError(
      absl::StrCat("Config field '", key, "' must be a number"));
}

absl::StatusOr<std::string> GetString(const json& c, const char* key) {
  const json& v = c.at(key);
  if (v.is_string()) return v.get<std::string>();
  return absl::InvalidArgumentError(
      absl::StrCat("Config field '", key, "' must be a string"));
}

absl::StatusOr<bool> GetBool(const json& c, const char* key) {
  const json& v = c.at(key);
  if (v.is_boolean()) return v.get<bool>();
  return absl::InvalidArgumentError(
      absl::StrCat("Config field '", key, "' must be true or false"));
}

// Unwraps a StatusOr into `lhs`, returning the status from the enclosing
// function on error.
#define DPLEARN_ASSIGN_OR_RETURN(lhs, expr)          \
  auto DPLEARN_CONCAT(_s, __LINE__) = (expr);         \
  if (!DPLEARN_CONCAT(_s, __LINE__).ok())             \
    return DPLEARN_CONCAT(_s, __LINE__).status();     \
  lhs = *std::move(DPLEARN_CONCAT(_s, __LINE__))
#define DPLEARN_CONCAT_INNER(a, b) a##b
#define DPLEARN_CONCAT(a, b) DPLEARN_CONCAT_INNER(a, b)

#define DPLEARN_RETURN_IF_ERROR(expr)      \
  do {                                     \
    absl::Status _st = (expr);             \
    if (!_st.ok()) return _st;             \
  } while (0)

absl::StatusOr<FeatureFamily> FamilyFromConfig(const json& c, int d) {
  DPLEARN_ASSIGN_OR_RETURN(std::string kind, GetString(c, "family"));
  if (kind == "literals") return FeatureFamily::Literals(d, true);
  if (kind == "monotone-literals") return FeatureFamily::Literals(d, false);
  if (kind == "conjunctions") {
    DPLEARN_ASSIGN_OR_RETURN(int64_t k, GetInt(c, "k"));
    return FeatureFamily::Conjunctions(d, static_cast<int>(k));
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "Unknown family '", kind,
      "' (expected literals, monotone-literals or conjunctions)"));
}

absl::StatusOr<PacDistribution> PacDistributionFromConfig(const json& c) {
  DPLEARN_ASSIGN_OR_RETURN(std::string kind, GetString(c, "distribution"));
  if (kind == "uniform") return PacDistribution::Uniform();
  if (kind == "product") {
    if (!c.at("marginals").is_array()) {
      return absl::InvalidArgumentError("'marginals' must be an array");
    }
    return PacDistribution::Product(c.at("marginals").get<std::vector<double>>());
  }
  if (kind == "custom") {
    if (!c.at("point_weights").is_array()) {
      return absl::InvalidArgumentError("'point_weights' must be an array");
    }
    return PacDistribution::Custom(
        c.at("point_weights").get<std::vector<double>>());
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "Unknown distribution '", kind, "' (expected uniform, product, custom)"));
}

// A decision list given inline, as a path to a JSON file, or generated
// from (length, alternations) over `family`.
absl::StatusOr<DecisionList> TargetList(const json& c,
                                        const FeatureFamily& family,
                                        RandomSource& source) {
  const json& t = c.at("target_list");
  if (t.is_object()) return DecisionListFromJson(t);
  if (t.is_string()) {
    DPLEARN_ASSIGN_OR_RETURN(json j, ReadJsonFile(t.get<std::string>()));
    return DecisionListFromJson(j);
  }
  if (!t.is_null()) {
    return absl::InvalidArgumentError(
        "'target_list' must be null, a path or a decision list object");
  }
  DPLEARN_ASSIGN_OR_RETURN(int64_t length, GetInt(c, "length"));
  DPLEARN_ASSIGN_OR_RETURN(int64_t alternations, GetInt(c, "alternations"));
  return RandomDecisionList(family, static_cast<int>(length),
                            static_cast<int>(alternations), source);
}

absl::StatusOr<int> GetDimension(const json& c) {
  DPLEARN_ASSIGN_OR_RETURN(int64_t d, GetInt(c, "d"));
  if (d < 1 || d > (1 << 20)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Dimension d must lie in [1, 2^20], got ", d));
  }
  return static_cast<int>(d);
}

// ---------------------------------------------------------------- params

absl::Status RunParams(Run& run) {
  const json& c = run.config;
  DPLEARN_ASSIGN_OR_RETURN(int64_t horizon, GetInt(c, "T"));
  DPLEARN_ASSIGN_OR_RETURN(int d, GetDimension(c));
  DPLEARN_ASSIGN_OR_RETURN(double rho, GetDouble(c, "rho"));
  DPLEARN_ASSIGN_OR_RETURN(double epsilon, GetDouble(c, "epsilon"));
  DPLEARN_ASSIGN_OR_RETURN(double delta, GetDouble(c, "delta"));
  DPLEARN_ASSIGN_OR_RETURN(double beta, GetDouble(c, "beta"));
  DPLEARN_ASSIGN_OR_RETURN(double conf, GetDouble(c, "c"));
  DPLEARN_ASSIGN_OR_RETURN(
      DpWinnowParams params,
      SolveParams(horizon, d, rho, epsilon, delta, beta, conf));
  const ParamResiduals residuals = CheckParamInvariants(params);
  const bool ok = residuals.Max() <= 1e-9 && residuals.eta_below_half_rho;
  run.check_failed = !ok;
  run.summary["params"] = ToJson(params);
  run.summary["residuals"] = ToJson(residuals);
  run.summary["invariants_hold"] = ok;
  run.summary["mistake_bound"] = DpWinnowMistakeBound(params);
  run.artifacts["params.json"] = DumpJson(ToJson(params));
  return absl::OkStatus();
}

// ---------------------------------------------------------------- pac-dl

absl::Status RunPacDl(Run& run) {
  const json& c = run.config;
  DPLEARN_ASSIGN_OR_RETURN(int64_t trials, GetInt(c, "trials"));
  DPLEARN_ASSIGN_OR_RETURN(double eps_round, GetDouble(c, "epsilon_per_round"));
  DPLEARN_ASSIGN_OR_RETURN(double beta, GetDouble(c, "beta"));
  if (trials < 1) return absl::InvalidArgumentError("trials must be >= 1");

  std::optional<PacSample> file_sample;
  int d;
  if (c.at("input").is_string()) {
    DPLEARN_ASSIGN_OR_RETURN(std::string text,
                             ReadFile(c.at("input").get<std::string>()));
    DPLEARN_ASSIGN_OR_RETURN(PacSample s, ParsePacSampleCsv(text));
    d = s.dimension;
    file_sample = std::move(s);
  } else {
    DPLEARN_ASSIGN_OR_RETURN(d, GetDimension(c));
  }
  DPLEARN_ASSIGN_OR_RETURN(FeatureFamily family, FamilyFromConfig(c, d));
  // The family plus the constant-true feature.
  const int64_t m = static_cast<int64_t>(family.size()) + 1;
  const double bound = GreedyCoverErrorBound(m, eps_round, beta);
  DPLEARN_ASSIGN_OR_RETURN(PacDistribution dist, PacDistributionFromConfig(c));
  DPLEARN_ASSIGN_OR_RETURN(int64_t n, GetInt(c, "n"));

  struct Row {
    absl::Status status;
    int64_t n = 0, dp_error = 0, dp_terms = 0, rivest_error = -1,
            rivest_terms = -1;
    std::string target;
  };
  std::vector<Row> rows(trials);
  std::optional<PacSample> first_sample;
  std::optional<DecisionList> first_list;
  ParallelFor(trials, run.workers, [&](int64_t i) {
    Row& row = rows[i];
    RandomSource data = run.root.Split("pac-dl/data", i);
    RandomSource noise = run.root.Split("pac-dl/dp", i);
    noise.set_zero_noise(run.zero_noise);
    PacSample sample;
    if (file_sample) {
      sample = *file_sample;
    } else {
      absl::StatusOr<DecisionList> target = TargetList(c, family, data);
      if (!target.ok()) {
        row.status = target.status();
        return;
      }
      row.target = target->ToString();
      absl::StatusOr<PacSample> s = GeneratePacSample(*target, dist, n, data);
      if (!s.ok()) {
        row.status = s.status();
        return;
      }
      sample = *std::move(s);
    }
    row.n = static_cast<int64_t>(sample.size());
    absl::StatusOr<GreedyCoverResult> dp =
        DpGreedyCover(sample, family, eps_round, noise);
    if (!dp.ok()) {
      row.status = dp.status();
      return;
    }
    absl::StatusOr<int64_t> err = EmpiricalError(dp->list, sample);
    if (!err.ok()) {
      row.status = err.status();
      return;
    }
    row.dp_error = *err;
    row.dp_terms = static_cast<int64_t>(dp->list.terms().size());
    absl::StatusOr<DecisionList> greedy = RivestGreedy(sample, family);
    if (greedy.ok()) {
      row.rivest_error = *EmpiricalError(*greedy, sample);
      row.rivest_terms = static_cast<int64_t>(greedy->terms().size());
    }
    if (i == 0) {
      first_sample = std::move(sample);
      first_list = dp->list;
    }
  });
  for (const Row& row : rows) DPLEARN_RETURN_IF_ERROR(row.status);

  std::string table;
  absl::StrAppend(&table, "# seed: ", run.provenance.seed, "\n# config_hash: ",
                  HexHash(run.provenance.config_hash),
                  "\n# format_version: ", run.provenance.format_version,
                  "\nrun,n,dp_error,dp_terms,rivest_error,rivest_terms,bound\n");
  int64_t within = 0;
  int64_t zero = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    absl::StrAppend(&table, i, ",", r.n, ",", r.dp_error, ",", r.dp_terms, ",",
                    r.rivest_error, ",", r.rivest_terms, ",",
                    absl::StrFormat("%.6f", bound), "\n");
    within += r.dp_error <= bound ? 1 : 0;
    zero += r.dp_error == 0 ? 1 : 0;
  }
  run.artifacts["errors.csv"] = table;
  if (first_sample) {
    run.artifacts["sample.csv"] =
        FormatPacSampleCsv(*first_sample, run.provenance);
  }
  if (first_list) run.artifacts["list.json"] = DumpJson(ToJson(*first_list));
  run.summary["features_including_constant"] = m;
  run.summary["error_bound"] = bound;
  run.summary["runs"] = trials;
  run.summary["runs_within_bound"] = within;
  run.summary["runs_with_zero_error"] = zero;
  return absl::OkStatus();
}

// ---------------------------------------------------------------- online

absl::StatusOr<MarginHalfspace> OnlineTarget(const json& c, int d,
                                             RandomSource& source) {
  DPLEARN_ASSIGN_OR_RETURN(std::string kind, GetString(c, "target"));
  if (kind == "coordinate") return CoordinateTarget(d, 0);
  if (kind == "majority") {
    DPLEARN_ASSIGN_OR_RETURN(int64_t s, GetInt(c, "subset"));
    return MajorityTarget(d, static_cast<int>(s));
  }
  if (kind == "decision-list") {
    // A random monotone list over d-1 variables; the last coordinate is the
    // bias.
    if (d < 2) return absl::InvalidArgumentError("decision-list needs d >= 2");
    DPLEARN_ASSIGN_OR_RETURN(FeatureFamily family,
                             FeatureFamily::Literals(d - 1, false));
    DPLEARN_ASSIGN_OR_RETURN(DecisionList list,
                             TargetList(c, family, source));
    return DecisionListToHalfspace(list);
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "Unknown target '", kind,
      "' (expected coordinate, majority or decision-list)"));
}

absl::Status RunOnline(Run& run) {
  const json& c = run.config;
  DPLEARN_ASSIGN_OR_RETURN(std::string algo, GetString(c, "algo"));
  if (algo != "winnow" && algo != "confident-winnow" && algo != "dp-winnow") {
    return absl::InvalidArgumentError(absl::StrCat(
        "Unknown algo '", algo,
        "' (expected winnow, confident-winnow or dp-winnow)"));
  }
  std::vector<OnlineExample> stream;
  double rho;
  bool nonnegative = true;
  if (c.at("input").is_string()) {
    DPLEARN_ASSIGN_OR_RETURN(std::string text,
                             ReadFile(c.at("input").get<std::string>()));
    DPLEARN_ASSIGN_OR_RETURN(stream, ParseStreamCsv(text));
    if (!c.at("rho").is_number()) {
      return absl::InvalidArgumentError(
          "A stream read from a file needs the target margin in 'rho'");
    }
    rho = c.at("rho").get<double>();
  } else {
    DPLEARN_ASSIGN_OR_RETURN(int d, GetDimension(c));
    DPLEARN_ASSIGN_OR_RETURN(int64_t horizon, GetInt(c, "T"));
    RandomSource data = run.root.Split("online/data");
    DPLEARN_ASSIGN_OR_RETURN(MarginHalfspace target, OnlineTarget(c, d, data));
    OnlineDistribution dist;
    DPLEARN_ASSIGN_OR_RETURN(std::string kind, GetString(c, "distribution"));
    if (kind == "boundary-heavy") {
      dist.kind = OnlineDistribution::Kind::kBoundaryHeavy;
    } else if (kind != "uniform") {
      return absl::InvalidArgumentError(absl::StrCat(
          "Unknown distribution '", kind,
          "' (expected uniform or boundary-heavy)"));
    }
    DPLEARN_ASSIGN_OR_RETURN(dist.kappa, GetDouble(c, "kappa"));
    dist.bias_coordinate = c.at("target") == "decision-list";
    DPLEARN_ASSIGN_OR_RETURN(stream,
                             GenerateOnlineStream(target, horizon, dist, data));
    rho = target.claimed_margin;
    for (double w : target.weights) nonnegative = nonnegative && w >= 0;
    if (!nonnegative) {
      // Multiplicative weights live on the simplex; move to doubled inputs.
      stream = EmbedStream(stream);
      run.summary["doubled_inputs"] = true;
    }
    run.artifacts["target.json"] =
        DumpJson(ToJson(nonnegative ? target : DoubleNonneg(target)));
    run.artifacts["stream.csv"] = FormatStreamCsv(stream, run.provenance);
  }
  if (stream.empty()) return absl::InvalidArgumentError("Stream is empty");
  const int d = static_cast<int>(stream[0].x.size());
  for (const OnlineExample& e : stream) {
    if (e.x.size() != static_cast<size_t>(d)) {
      return absl::InvalidArgumentError("Stream rows differ in dimension");
    }
  }
  run.summary["rho"] = rho;
  run.summary["rounds"] = stream.size();

  if (algo == "winnow" || algo == "confident-winnow") {
    ConfidentWinnowParams p;
    p.rho = rho;
    p.eta = c.at("eta").is_number() ? c.at("eta").get<double>() : rho;
    p.c = 0;
    std::vector<uint8_t> bits(stream.size(), 0);
    if (algo == "confident-winnow") {
      DPLEARN_ASSIGN_OR_RETURN(p.c, GetDouble(c, "c"));
      DPLEARN_ASSIGN_OR_RETURN(bool always, GetBool(c, "update_bits"));
      std::fill(bits.begin(), bits.end(), always ? 1 : 0);
      if (!c.at("eta").is_number()) p.eta = rho / 2;
    }
    DPLEARN_ASSIGN_OR_RETURN(RunTranscript t,
                             RunConfidentWinnow(d, stream, bits, p));
    const double bound = ConfidentWinnowUpdateBound(d, p);
    run.summary["eta"] = p.eta;
    run.summary["c"] = p.c;
    run.summary["mistakes"] = t.mistakes();
    run.summary["updates"] = t.updates();
    run.summary["update_bound"] = bound;
    run.summary["within_bound"] = static_cast<double>(t.updates()) <= bound;
    run.check_failed = static_cast<double>(t.updates()) > bound;
    run.artifacts["transcript.csv"] =
        FormatTranscriptCsv(t, TranscriptFormat::kWinnow, run.provenance);
    return absl::OkStatus();
  }

  DpWinnowParams params;
  if (c.at("explicit").is_object()) {
    const json& e = c.at("explicit");
    for (const char* key :
         {"epsilon_hat", "eta", "threshold", "sample_count",
          "switching_bound"}) {
      if (!e.contains(key) || !e[key].is_number()) {
        return absl::InvalidArgumentError(
            absl::StrCat("'explicit' needs a numeric '", key, "'"));
      }
    }
    DPLEARN_ASSIGN_OR_RETURN(double beta, GetDouble(c, "beta"));
    params = DpWinnowParams::Explicit(
        static_cast<int64_t>(stream.size()), d, e["epsilon_hat"].get<double>(),
        e["eta"].get<double>(), e["threshold"].get<double>(),
        e["sample_count"].get<int64_t>(), e["switching_bound"].get<int64_t>(),
        beta);
    params.rho = rho;
    DPLEARN_RETURN_IF_ERROR(params.Validate());
  } else {
    DPLEARN_ASSIGN_OR_RETURN(double epsilon, GetDouble(c, "epsilon"));
    DPLEARN_ASSIGN_OR_RETURN(double delta, GetDouble(c, "delta"));
    DPLEARN_ASSIGN_OR_RETURN(double beta, GetDouble(c, "beta"));
    DPLEARN_ASSIGN_OR_RETURN(double conf, GetDouble(c, "c"));
    DPLEARN_ASSIGN_OR_RETURN(
        params, SolveParams(static_cast<int64_t>(stream.size()), d, rho,
                            epsilon, delta, beta, conf));
  }
  RandomSource noise = run.root.Split("online/dp-winnow");
  noise.set_zero_noise(run.zero_noise);
  DPLEARN_ASSIGN_OR_RETURN(DpWinnowRun r, RunDpWinnow(stream, params, noise));
  json releases = json::array();
  for (const ReleaseEvent& e : r.history) releases.push_back(e.round);
  run.summary["params"] = ToJson(params);
  run.summary["mistakes"] = r.transcript.mistakes();
  run.summary["updates"] = r.transcript.updates();
  run.summary["release_rounds"] = std::move(releases);
  run.summary["mistake_bound"] = DpWinnowMistakeBound(params);
  run.artifacts["transcript.csv"] = FormatTranscriptCsv(
      r.transcript, TranscriptFormat::kDpWinnow, run.provenance);
  run.artifacts["params.json"] = DumpJson(ToJson(params));
  return absl::OkStatus();
}

// ---------------------------------------------------------------- reduce

absl::Status RunReduce(Run& run) {
  const json& c = run.config;
  RandomSource source = run.root.Split("reduce");
  DecisionList list = *DecisionList::Create(1, {}, 0);
  if (c.at("input").is_string()) {
    DPLEARN_ASSIGN_OR_RETURN(json j,
                             ReadJsonFile(c.at("input").get<std::string>()));
    DPLEARN_ASSIGN_OR_RETURN(list, DecisionListFromJson(j));
  } else {
    DPLEARN_ASSIGN_OR_RETURN(int d, GetDimension(c));
    DPLEARN_ASSIGN_OR_RETURN(FeatureFamily family,
                             FeatureFamily::Literals(d, false));
    DPLEARN_ASSIGN_OR_RETURN(list, TargetList(c, family, source));
  }
  DPLEARN_ASSIGN_OR_RETURN(MarginHalfspace h, DecisionListToHalfspace(list));
  run.summary["list"] = ToJson(list);
  run.summary["alternations"] = list.TermAlternations();
  run.summary["claimed_margin"] = h.claimed_margin;
  run.artifacts["list.json"] = DumpJson(ToJson(list));
  run.artifacts["halfspace.json"] = DumpJson(ToJson(h));
  if (list.dimension() <= 20) {
    DPLEARN_ASSIGN_OR_RETURN(MarginMeasurement m, MeasureListMargin(list, h));
    run.summary["measured_margin"] = m.min_margin;
    run.summary["disagreements"] = m.disagreements;
    run.check_failed = m.disagreements != 0;
  }
  DPLEARN_ASSIGN_OR_RETURN(bool doubled, GetBool(c, "double"));
  if (doubled) {
    run.artifacts["halfspace_nonneg.json"] = DumpJson(ToJson(DoubleNonneg(h)));
  }
  return absl::OkStatus();
}

// ---------------------------------------------------------------- audit

absl::Status RunAudit(Run& run) {
  const json& c = run.config;
  if (!c.at("suites").is_array()) {
    return absl::InvalidArgumentError("'suites' must be an array");
  }
  DPLEARN_ASSIGN_OR_RETURN(double confidence, GetDouble(c, "confidence"));
  DPLEARN_ASSIGN_OR_RETURN(double epsilon, GetDouble(c, "epsilon"));
  const std::optional<int64_t> trials =
      c.at("trials").is_number_integer()
          ? std::optional<int64_t>(c.at("trials").get<int64_t>())
          : std::nullopt;
  json verdicts = json::object();
  for (const json& s : c.at("suites")) {
    if (!s.is_string()) return absl::InvalidArgumentError("Bad suite name");
    const std::string suite = s.get<std::string>();
    json report;
    if (suite == "em") {
      RatioTestConfig rc;
      rc.trials = trials.value_or(1'000'000);
      rc.epsilon = epsilon;
      rc.confidence = confidence;
      rc.seed = run.root.Split("audit/em").seed();
      rc.workers = run.workers;
      DPLEARN_ASSIGN_OR_RETURN(
          RatioReport r,
          NeighborRatioTest(EmSelectNeighborRunner({0, -1, -2, 0.5},
                                                   {1, -1, -2, 0.5}, epsilon,
                                                   run.zero_noise),
                            rc));
      report = ToJson(r);
      run.check_failed |= r.verdict == Verdict::kFail;
    } else if (suite == "dp-winnow") {
      DpWinnowAuditCase audit_case = SmallDpWinnowAuditCase();
      RatioTestConfig rc;
      rc.trials = trials.value_or(100'000);
      rc.epsilon = audit_case.params.epsilon;
      rc.confidence = confidence;
      rc.seed = run.root.Split("audit/dp-winnow").seed();
      rc.workers = run.workers;
      DPLEARN_ASSIGN_OR_RETURN(
          RatioReport r,
          NeighborRatioTest(
              DpWinnowNeighborRunner(std::move(audit_case), run.zero_noise),
              rc));
      report = ToJson(r);
      run.check_failed |= r.verdict == Verdict::kFail;
    } else if (suite == "svt") {
      BoundCheckConfig bc;
      bc.name = "svt-ramp";
      bc.trials = trials.value_or(10'000);
      bc.failure_probability = 0.1;
      bc.confidence = confidence;
      bc.seed = run.root.Split("audit/svt").seed();
      bc.workers = run.workers;
      const bool zero_noise = run.zero_noise;
      DPLEARN_ASSIGN_OR_RETURN(
          BoundReport r,
          BoundCheck(
              [zero_noise](int64_t, RandomSource& src) {
                src.set_zero_noise(zero_noise);
                return SvtRampViolation(1.0, 100.0, 1000, 0.1, src);
              },
              bc));
      report = ToJson(r);
      run.check_failed |= r.verdict == Verdict::kFail;
    } else if (suite == "winnow-updates") {
      BoundCheckConfig bc;
      bc.name = "winnow-updates";
      bc.trials = trials.value_or(100);
      bc.failure_probability = 0;
      bc.confidence = confidence;
      bc.seed = run.root.Split("audit/winnow").seed();
      bc.workers = run.workers;
      DPLEARN_ASSIGN_OR_RETURN(
          BoundReport r,
          BoundCheck(
              [](int64_t, RandomSource& src) -> absl::StatusOr<bool> {
                absl::StatusOr<MarginHalfspace> target = MajorityTarget(32, 3);
                if (!target.ok()) return target.status();
                OnlineDistribution dist;
                dist.kind = OnlineDistribution::Kind::kBoundaryHeavy;
                absl::StatusOr<std::vector<OnlineExample>> stream =
                    GenerateOnlineStream(*target, 2000, dist, src);
                if (!stream.ok()) return stream.status();
                ConfidentWinnowParams p{1.0 / 6, 0.25, 1.0 / 3};
                std::vector<uint8_t> bits(stream->size(), 1);
                absl::StatusOr<RunTranscript> t =
                    RunConfidentWinnow(32, *stream, bits, p);
                if (!t.ok()) return t.status();
                return static_cast<double>(t->updates()) >
                       ConfidentWinnowUpdateBound(32, p);
              },
              bc));
      report = ToJson(r);
      run.check_failed |= r.verdict == Verdict::kFail;
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          "Unknown audit suite '", suite,
          "' (expected em, dp-winnow, svt or winnow-updates)"));
    }
    verdicts[suite] = report["verdict"];
    run.artifacts[absl::StrCat("report_", suite, ".json")] = DumpJson(report);
  }
  run.summary["verdicts"] = std::move(verdicts);
  return absl::OkStatus();
}

// ---------------------------------------------------------------- oracle

absl::Status RunOracle(Run& run) {
  const json& c = run.config;
  DPLEARN_ASSIGN_OR_RETURN(std::string tool, GetString(c, "tool"));
  RandomSource source = run.root.Split("oracle");
  if (tool == "conjunction-count") {
    DPLEARN_ASSIGN_OR_RETURN(int d, GetDimension(c));
    DPLEARN_ASSIGN_OR_RETURN(int64_t k, GetInt(c, "k"));
    DPLEARN_ASSIGN_OR_RETURN(
        FeatureFamily f, FeatureFamily::Conjunctions(d, static_cast<int>(k)));
    const double bound = std::exp(2.0) * std::pow(d, static_cast<double>(k));
    run.summary["enumerated"] = f.size();
    run.summary["formula"] =
        FeatureFamily::ConjunctionCount(d, static_cast<int>(k));
    run.summary["upper_bound"] = bound;
    run.check_failed = static_cast<double>(f.size()) > bound;
    return absl::OkStatus();
  }
  if (tool == "erm") {
    PacSample sample;
    int d;
    if (c.at("input").is_string()) {
      DPLEARN_ASSIGN_OR_RETURN(std::string text,
                               ReadFile(c.at("input").get<std::string>()));
      DPLEARN_ASSIGN_OR_RETURN(sample, ParsePacSampleCsv(text));
      d = sample.dimension;
    } else {
      DPLEARN_ASSIGN_OR_RETURN(d, GetDimension(c));
    }
    DPLEARN_ASSIGN_OR_RETURN(FeatureFamily family, FamilyFromConfig(c, d));
    if (!c.at("input").is_string()) {
      DPLEARN_ASSIGN_OR_RETURN(DecisionList target,
                               TargetList(c, family, source));
      DPLEARN_ASSIGN_OR_RETURN(int64_t n, GetInt(c, "n"));
      DPLEARN_ASSIGN_OR_RETURN(
          sample, GeneratePacSample(target, PacDistribution::Uniform(), n,
                                    source));
      DPLEARN_ASSIGN_OR_RETURN(double flip, GetDouble(c, "label_noise"));
      for (PacExample& e : sample.examples) {
        if (source.UniformOpen() < flip) e.label = 1 - e.label;
      }
      run.summary["target"] = ToJson(target);
    }
    DPLEARN_ASSIGN_OR_RETURN(int64_t max_length, GetInt(c, "max_length"));
    DPLEARN_ASSIGN_OR_RETURN(
        ErmResult r,
        BruteForceErm(sample, family, static_cast<int>(max_length)));
    run.summary["min_errors"] = r.errors;
    run.summary["list"] = ToJson(r.list);
    run.summary["nodes_visited"] = r.nodes_visited;
    run.artifacts["erm_list.json"] = DumpJson(ToJson(r.list));
    return absl::OkStatus();
  }
  if (tool == "margin") {
    DecisionList list = *DecisionList::Create(1, {}, 0);
    if (c.at("input").is_string()) {
      DPLEARN_ASSIGN_OR_RETURN(json j,
                               ReadJsonFile(c.at("input").get<std::string>()));
      DPLEARN_ASSIGN_OR_RETURN(list, DecisionListFromJson(j));
    } else {
      DPLEARN_ASSIGN_OR_RETURN(int d, GetDimension(c));
      DPLEARN_ASSIGN_OR_RETURN(FeatureFamily family,
                               FeatureFamily::Literals(d, false));
      DPLEARN_ASSIGN_OR_RETURN(list, TargetList(c, family, source));
    }
    DPLEARN_ASSIGN_OR_RETURN(MarginHalfspace h, DecisionListToHalfspace(list));
    DPLEARN_ASSIGN_OR_RETURN(MarginMeasurement m, MeasureListMargin(list, h));
    run.summary["claimed_margin"] = h.claimed_margin;
    run.summary["measured_margin"] = m.min_margin;
    run.summary["disagreements"] = m.disagreements;
    run.summary["points"] = m.points;
    run.check_failed = m.disagreements != 0;
    return absl::OkStatus();
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "Unknown oracle tool '", tool,
      "' (expected erm, margin or conjunction-count)"));
}

absl::Status Dispatch(Run& run) {
  if (run.subcommand == "params") return RunParams(run);
  if (run.subcommand == "pac-dl") return RunPacDl(run);
  if (run.subcommand == "online") return RunOnline(run);
  if (run.subcommand == "reduce") return RunReduce(run);
  if (run.subcommand == "audit") return RunAudit(run);
  if (run.subcommand == "oracle") return RunOracle(run);
  return absl::NotFoundError(
      absl::StrCat("Unknown subcommand '", run.subcommand, "'"));
}

absl::Status WriteArtifacts(const Run& run, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("Cannot create output directory ", dir));
  }
  for (const auto& [name, contents] : run.artifacts) {
    DPLEARN_RETURN_IF_ERROR(
        WriteFileAtomic((std::filesystem::path(dir) / name).string(),
                        contents));
  }
  const json record{{"subcommand", run.subcommand},
                    {"config", run.config},
                    {"provenance", ToJson(run.provenance)},
                    {"summary", run.summary},
                    {"artifacts", [&] {
                       json names = json::array();
                       for (const auto& [name, _] : run.artifacts) {
                         names.push_back(name);
                       }
                       return names;
                     }()}};
  DPLEARN_RETURN_IF_ERROR(WriteFileAtomic(
      (std::filesystem::path(dir) / "run.json").string(), DumpJson(record)));
  // Wall-clock time lives only here, so that everything else reproduces
  // byte for byte.
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[64];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return WriteFileAtomic(
      (std::filesystem::path(dir) / "run.log").string(),
      absl::StrCat(stamp, " ", run.subcommand, " seed=", run.provenance.seed,
                   " config_hash=", HexHash(run.provenance.config_hash),
                   " files=", run.artifacts.size() + 1, "\n"));
}

}  // namespace

std::vector<std::string> Subcommands() {
  return {"pac-dl", "online", "reduce", "params", "audit", "oracle"};
}

absl::StatusOr<json> DefaultConfig(const std::string& subcommand) {
  json common{{"seed", 1}, {"workers", 1}, {"zero_noise", false}};
  json specific;
  if (subcommand == "params") {
    specific = {{"T", 10000}, {"d", 1024},      {"rho", 0.1}, {"epsilon", 1.0},
                {"delta", 1e-6}, {"beta", 0.05}, {"c", kDefaultConfidenceRatio}};
  } else if (subcommand == "pac-dl") {
    specific = {{"d", 8},
                {"family", "literals"},
                {"k", 2},
                {"length", 4},
                {"alternations", 1},
                {"target_list", nullptr},
                {"n", 5000},
                {"distribution", "uniform"},
                {"marginals", json::array()},
                {"point_weights", json::array()},
                {"epsilon_per_round", 0.5},
                {"beta", 0.1},
                {"trials", 20},
                {"input", nullptr}};
  } else if (subcommand == "online") {
    specific = {{"algo", "dp-winnow"},
                {"d", 64},
                {"T", 2000},
                {"target", "coordinate"},
                {"subset", 3},
                {"length", 3},
                {"alternations", 1},
                {"target_list", nullptr},
                {"distribution", "uniform"},
                {"kappa", 4.0},
                {"eta", nullptr},
                {"c", kDefaultConfidenceRatio},
                {"update_bits", true},
                {"epsilon", 1.0},
                {"delta", 1e-6},
                {"beta", 0.1},
                {"explicit", nullptr},
                {"rho", nullptr},
                {"input", nullptr}};
  } else if (subcommand == "reduce") {
    specific = {{"d", 8},          {"length", 4},          {"alternations", 1},
                {"double", true},  {"target_list", nullptr}, {"input", nullptr}};
  } else if (subcommand == "audit") {
    specific = {{"suites", {"em", "dp-winnow", "svt", "winnow-updates"}},
                {"trials", nullptr},
                {"confidence", 0.99},
                {"epsilon", 1.0}};
  } else if (subcommand == "oracle") {
    specific = {{"tool", "erm"},
                {"d", 4},
                {"k", 2},
                {"family", "literals"},
                {"length", 2},
                {"alternations", 1},
                {"target_list", nullptr},
                {"n", 200},
                {"label_noise", 0.0},
                {"max_length", 3},
                {"input", nullptr}};
  } else {
    return absl::NotFoundError(absl::StrCat(
        "Unknown subcommand '", subcommand,
        "' (expected pac-dl, online, reduce, params, audit or oracle)"));
  }
  common.update(specific);
  return common;
}

absl::StatusOr<json> ResolveConfig(const HarnessOptions& options) {
  DPLEARN_ASSIGN_OR_RETURN(json config, DefaultConfig(options.subcommand));
  if (!options.config_path.empty()) {
    DPLEARN_ASSIGN_OR_RETURN(json file, ReadJsonFile(options.config_path));
    if (!file.is_object()) {
      return absl::InvalidArgumentError("Config must be a JSON object");
    }
    for (const auto& [key, value] : file.items()) {
      if (!config.contains(key)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "Unknown config field '", key, "' for ", options.subcommand));
      }
      config[key] = value;
    }
  }
  if (options.seed) config["seed"] = *options.seed;
  if (options.workers) config["workers"] = *options.workers;
  if (options.zero_noise) config["zero_noise"] = true;
  if (options.trials) {
    if (!config.contains("trials")) {
      return absl::InvalidArgumentError(
          absl::StrCat("--trials does not apply to ", options.subcommand));
    }
    config["trials"] = *options.trials;
  }
  if (options.algo) {
    if (!config.contains("algo")) {
      return absl::InvalidArgumentError(
          absl::StrCat("--algo does not apply to ", options.subcommand));
    }
    config["algo"] = *options.algo;
  }
  if (options.input) {
    if (!config.contains("input")) {
      return absl::InvalidArgumentError(
          absl::StrCat("--input does not apply to ", options.subcommand));
    }
    config["input"] = *options.input;
  }
  if (!config["seed"].is_number_unsigned() &&
      !(config["seed"].is_number_integer() && config["seed"].get<int64_t>() >= 0)) {
    return absl::InvalidArgumentError("'seed' must be a non-negative integer");
  }
  if (!config["workers"].is_number_integer() ||
      config["workers"].get<int64_t>() < 1) {
    return absl::InvalidArgumentError("'workers' must be a positive integer");
  }
  if (!config["zero_noise"].is_boolean()) {
    return absl::InvalidArgumentError("'zero_noise' must be true or false");
  }
  return config;
}

int RunHarness(const HarnessOptions& options, std::ostream& out,
               std::ostream& err) {
  absl::StatusOr<json> config = ResolveConfig(options);
  if (!config.ok()) {
    err << "error: " << config.status().message() << "\n";
    return kExitError;
  }
  Run run;
  run.subcommand = options.subcommand;
  run.config = *config;
  run.provenance.seed = (*config)["seed"].get<uint64_t>();
  run.provenance.config_hash = ConfigHash(*config);
  run.root = RandomSource(run.provenance.seed);
  run.workers = (*config)["workers"].get<int>();
  run.zero_noise = (*config)["zero_noise"].get<bool>();

  out << "config: " << config->dump() << "\n";
  out << "seed: " << run.provenance.seed
      << " config_hash: " << HexHash(run.provenance.config_hash) << "\n";
  absl::Status status;
  try {
    status = Dispatch(run);
  } catch (const json::exception& e) {
    status = absl::InvalidArgumentError(
        absl::StrCat("Bad config value: ", e.what()));
  }
  if (!status.ok()) {
    err << "error: " << status.message() << "\n";
    return kExitError;
  }
  out << "summary: " << run.summary.dump(2) << "\n";
  if (!options.out_dir.empty()) {
    if (absl::Status s = WriteArtifacts(run, options.out_dir); !s.ok()) {
      err << "error: " << s.message() << "\n";
      return kExitError;
    }
  }
  return run.check_failed ? kExitCheckFailed : kExitOk;
}

}  // namespace dplearn
