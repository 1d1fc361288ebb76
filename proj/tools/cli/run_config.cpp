#include "cli/run_config.hpp"

#include <algorithm>
#include <iterator>
#include <tuple>

#include "cphmm/error.hpp"
#include "cphmm/numeric_io.hpp"
#include "json.hpp"

namespace cphmm::cli {
namespace {

using nlohmann::json;

[[noreturn]] void reject(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

std::pair<int, int> read_range(const json& j, const char* key, std::pair<int, int> fallback) {
  if (!j.contains(key)) return fallback;
  const auto v = j.at(key).get<std::vector<int>>();
  if (v.size() != 2) reject(std::string(key) + " must be [low, high]");
  return {v[0], v[1]};
}

}  // namespace

void RunConfig::validate() const {
  if (cluster_low < 2) reject("cluster_range: c_l must be >= 2");
  if (cluster_low > cluster_high) reject("cluster_range: c_l must be <= c_h");
  if (states.low < 1) reject("state_range: st_l must be >= 1");
  if (states.low > states.high) reject("state_range: st_l must be <= st_h");
  if (resample_length < 4) reject("M must be >= 4");
  if (gamma < 1) reject("gamma must be >= 1");
  if (variants.empty()) reject("predictor_variants must not be empty");
  for (const auto& r : sensor_ranges) {
    if (r.first < 1 || r.last < r.first) reject("sensor range '" + r.label + "' is empty");
  }
  try {
    train.validate();
  } catch (const Error& e) {
    reject(std::string("train: ") + e.what());
  }
}

void RunConfig::validate_for(int sensors) const {
  validate();
  for (const auto& r : sensor_ranges) {
    if (r.last > sensors) {
      reject("sensor range '" + r.label + "' exceeds J=" + std::to_string(sensors));
    }
  }
}

std::vector<SensorRange> RunConfig::ranges_for(int sensors) const {
  return sensor_ranges.empty() ? default_sensor_ranges(sensors) : sensor_ranges;
}

std::vector<int> RunConfig::clusters() const {
  std::vector<int> out;
  for (int c = cluster_low; c <= cluster_high; ++c) out.push_back(c);
  return out;
}

PipelineConfig RunConfig::pipeline(int jobs) const {
  PipelineConfig p;
  p.resample_length = resample_length;
  p.gamma = gamma;
  p.clusters = clusters();
  p.variants = variants;
  p.sweep.states = states;
  p.sweep.train = train;
  p.seed = seed;
  p.jobs = jobs;
  return p;
}

RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    reject(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) reject("config must be a JSON object");

  static const char* const known[] = {"dataset_root", "M", "gamma", "cluster_range", "state_range",
                                      "predictor_variants", "sensor_ranges", "train", "seed", "output_dir"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) reject("unknown key '" + key + "'");
  }

  RunConfig c;
  try {
    const auto resolve = [&](const std::string& p) {
      std::filesystem::path path(p);
      return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
    };
    if (j.contains("dataset_root")) c.dataset_root = resolve(j.at("dataset_root").get<std::string>());
    if (j.contains("output_dir")) c.output_dir = resolve(j.at("output_dir").get<std::string>());
    c.resample_length = j.value("M", c.resample_length);
    c.gamma = j.value("gamma", c.gamma);
    std::tie(c.cluster_low, c.cluster_high) = read_range(j, "cluster_range", {c.cluster_low, c.cluster_high});
    std::tie(c.states.low, c.states.high) = read_range(j, "state_range", {c.states.low, c.states.high});
    if (j.contains("predictor_variants")) {
      c.variants.clear();
      for (const auto& name : j.at("predictor_variants").get<std::vector<std::string>>()) {
        c.variants.push_back(parse_variant(name));
      }
    }
    if (j.contains("sensor_ranges")) {
      for (const auto& r : j.at("sensor_ranges")) {
        c.sensor_ranges.push_back({r.at("label").get<std::string>(), r.at("first").get<int>(), r.at("last").get<int>()});
      }
    }
    if (j.contains("train")) {
      const auto& t = j.at("train");
      for (const auto& [key, value] : t.items()) {
        if (key != "max_iter" && key != "rel_tol" && key != "restarts" && key != "prob_floor") {
          reject("unknown train key '" + key + "'");
        }
      }
      c.train.max_iter = t.value("max_iter", c.train.max_iter);
      c.train.rel_tol = t.value("rel_tol", c.train.rel_tol);
      c.train.restarts = t.value("restarts", c.train.restarts);
      c.train.prob_floor = t.value("prob_floor", c.train.prob_floor);
    }
    c.seed = j.value("seed", c.seed);
  } catch (const json::exception& e) {
    reject(std::string("malformed config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    reject(e.what());
  }
  return parse_run_config(text, path.parent_path());
}

}  // namespace cphmm::cli
