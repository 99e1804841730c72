#pragma once

#include <json.hpp>

#include "gt/bounds.hpp"
#include "gt/session.hpp"
#include "gt/verify.hpp"

namespace gt {

using OrderedJson = nlohmann::ordered_json;

inline OrderedJson params_to_json(const ConcatParams& p) {
  OrderedJson j;
  j["q"] = p.q;
  j["layers"] = p.layers;
  j["inner_len"] = p.inner_len;
  j["inner_weight"] = p.inner_weight;
  return j;
}

inline ConcatParams params_from_json(const nlohmann::json& j) {
  ConcatParams p;
  p.q = j.at("q").get<unsigned>();
  p.layers = j.at("layers").get<unsigned>();
  p.inner_len = j.at("inner_len").get<unsigned>();
  p.inner_weight = j.at("inner_weight").get<unsigned>();
  return p;
}

inline OrderedJson transcript_to_json(const Transcript& tr) {
  OrderedJson j;
  j["t"] = tr.t;
  j["params"] = params_to_json(tr.params);
  j["stages"] = OrderedJson::array();
  for (const Stage& stage : tr.stages) {
    OrderedJson js;
    js["pools"] = stage.pools;
    js["outcomes"] = OrderedJson::array();
    for (std::uint8_t b : stage.outcomes) js["outcomes"].push_back(static_cast<int>(b));
    j["stages"].push_back(std::move(js));
  }
  j["diagnosis"] = tr.diagnosis;
  return j;
}

inline Transcript transcript_from_json(const nlohmann::json& j) {
  Transcript tr;
  tr.t = j.at("t").get<std::uint32_t>();
  tr.params = params_from_json(j.at("params"));
  for (const auto& js : j.at("stages")) {
    Stage stage;
    stage.pools = js.at("pools").get<std::vector<Pool>>();
    for (const auto& b : js.at("outcomes"))
      stage.outcomes.push_back(static_cast<std::uint8_t>(b.get<int>()));
    tr.stages.push_back(std::move(stage));
  }
  tr.diagnosis = j.at("diagnosis").get<DefectSet>();
  return tr;
}

inline OrderedJson report_to_json(const VerificationReport& rep) {
  OrderedJson j;
  j["t"] = rep.t;
  j["s"] = rep.s;
  j["cases"] = rep.cases;
  j["failures"] = OrderedJson::array();
  for (const VerifyFailure& f : rep.failures) {
    OrderedJson jf;
    jf["defects"] = f.defects;
    jf["diagnosis"] = f.diagnosis;
    j["failures"].push_back(std::move(jf));
  }
  j["max_tests"] = rep.max_tests;
  j["max_stages"] = rep.max_stages;
  OrderedJson hist = OrderedJson::object();
  for (auto [tests, count] : rep.test_histogram) hist[std::to_string(tests)] = count;
  j["histogram"] = std::move(hist);
  return j;
}

}  // namespace gt
