// Copyright 2026 The qk Authors
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

#include "qk/results.hpp"

#include <json.hpp>

#include "qk/error.hpp"

namespace qk {

using nlohmann::ordered_json;

namespace {

ordered_json cvalue_json(const CValue& v) {
  return std::visit([](auto x) { return ordered_json(x); }, v);
}

CValue json_cvalue(const ordered_json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number()) return j.get<double>();
  throw Error(ErrorCode::TypeMismatch, "byref value must be a bool or number");
}

}  // namespace

std::string results_to_json(const ResultsDocument& doc, bool include_timing) {
  ordered_json j;
  j["schema"] = kResultsSchema;
  j["kernel"] = doc.kernel;
  j["backend"] = doc.backend;
  j["mode"] = doc.mode;
  j["seed"] = doc.seed;
  j["shots"] = doc.shots;
  j["counts"] = ordered_json::object();
  for (const auto& [k, v] : doc.results.counts) j["counts"][k] = v;
  j["expectations"] = ordered_json::object();
  for (const auto& [k, v] : doc.results.expectations) j["expectations"][k] = v;
  j["byref"] = ordered_json::object();
  for (const auto& [k, v] : doc.results.byref) j["byref"][k] = cvalue_json(v);
  j["log"] = doc.results.log;
  if (!doc.results.amplitudes.empty()) {
    auto& amps = j["amplitudes"] = ordered_json::array();
    for (const auto& a : doc.results.amplitudes) amps.push_back({a.real(), a.imag()});
  }
  if (include_timing) {
    j["timing"] = {{"parse_ns", doc.timing.parse_ns},
                   {"lower_ns", doc.timing.lower_ns},
                   {"execute_ns", doc.timing.execute_ns}};
  }
  return j.dump(2) + "\n";
}

ResultsDocument results_from_json(std::string_view text) {
  ResultsDocument doc;
  try {
    auto j = ordered_json::parse(text);
    if (j.at("schema").get<std::string>() != kResultsSchema) {
      throw Error(ErrorCode::TypeMismatch, "unsupported results schema '" +
                                               j.at("schema").get<std::string>() + "'");
    }
    doc.kernel = j.at("kernel").get<std::string>();
    doc.backend = j.at("backend").get<std::string>();
    doc.mode = j.at("mode").get<std::string>();
    doc.seed = j.at("seed").get<std::uint64_t>();
    doc.shots = j.at("shots").get<std::int64_t>();
    for (const auto& [k, v] : j.at("counts").items()) doc.results.counts[k] = v.get<std::int64_t>();
    for (const auto& [k, v] : j.at("expectations").items()) {
      doc.results.expectations[k] = v.get<double>();
    }
    for (const auto& [k, v] : j.at("byref").items()) doc.results.byref[k] = json_cvalue(v);
    doc.results.log = j.at("log").get<std::vector<std::string>>();
    if (j.contains("amplitudes")) {
      for (const auto& a : j["amplitudes"]) {
        doc.results.amplitudes.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
      }
    }
    if (j.contains("timing")) {
      const auto& t = j["timing"];
      doc.timing = {t.at("parse_ns").get<std::int64_t>(), t.at("lower_ns").get<std::int64_t>(),
                    t.at("execute_ns").get<std::int64_t>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::TypeMismatch, std::string("malformed results document: ") + e.what());
  }
  return doc;
}

}  // namespace qk
