#include "cphmm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cphmm/error.hpp"
#include "cphmm/numeric_io.hpp"
#include "cphmm/random.hpp"
#include "json.hpp"

namespace cphmm {
namespace {

using nlohmann::json;

std::string execution_file_name(int gesture, int execution) {
  return "g" + std::to_string(gesture + 1) + "_e" + std::to_string(execution + 1) + ".csv";
}

std::string where(int gesture, int execution) {
  return "(i=" + std::to_string(gesture + 1) + ", k=" + std::to_string(execution + 1) + ")";
}

// Interior knot positions 0 = p_0 < p_1 < ... < p_{e+1} = length - 1 with
// jittered, roughly even spacing.
std::vector<int> place_knots(int extrema, int length, Rng& rng) {
  const int segments = extrema + 1;
  std::vector<double> widths(static_cast<std::size_t>(segments));
  for (auto& w : widths) w = 1.0 + 0.3 * rng.uniform();
  double total = 0.0;
  for (double w : widths) total += w;

  std::vector<int> knots(static_cast<std::size_t>(segments + 1));
  knots.front() = 0;
  knots.back() = length - 1;
  double acc = 0.0;
  for (int q = 1; q < segments; ++q) {
    acc += widths[static_cast<std::size_t>(q - 1)];
    knots[static_cast<std::size_t>(q)] =
        static_cast<int>(std::lround(acc / total * static_cast<double>(length - 1)));
  }
  for (int q = 1; q < segments; ++q) {
    auto& p = knots[static_cast<std::size_t>(q)];
    p = std::max(p, knots[static_cast<std::size_t>(q - 1)] + 1);
  }
  for (int q = segments - 1; q >= 1; --q) {
    auto& p = knots[static_cast<std::size_t>(q)];
    p = std::min(p, knots[static_cast<std::size_t>(q + 1)] - 1);
  }
  return knots;
}

std::vector<double> arch_chain(int extrema, int length, double noise, Rng& rng) {
  const auto knots = place_knots(extrema, length, rng);
  const bool starts_up = rng.uniform() < 0.5;
  const double offset = rng.uniform(-2.0, 2.0);
  const double scale = rng.uniform(0.5, 2.0);

  std::vector<double> levels(knots.size());
  for (std::size_t q = 0; q < levels.size(); ++q) {
    const bool high = (q % 2 == 1) == starts_up;
    const double magnitude = 0.5 + rng.uniform();
    levels[q] = offset + scale * (high ? magnitude : -magnitude);
  }

  std::vector<double> row(static_cast<std::size_t>(length));
  for (std::size_t q = 0; q + 1 < knots.size(); ++q) {
    const int from = knots[q];
    const int to = knots[q + 1];
    const double span = static_cast<double>(to - from);
    for (int m = from; m <= to; ++m) {
      const double s = static_cast<double>(m - from) / span;
      const double ease = 0.5 * (1.0 - std::cos(std::numbers::pi * s));
      row[static_cast<std::size_t>(m)] = levels[q] + (levels[q + 1] - levels[q]) * ease;
    }
  }
  if (noise > 0.0) {
    for (auto& v : row) v += rng.uniform(-noise, noise);
  }
  return row;
}

std::vector<std::string_view> nonblank_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  for (auto line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") != std::string_view::npos) lines.push_back(line);
  }
  return lines;
}

}  // namespace

RawDataset::RawDataset(int gestures, int sensors, int executions_per_gesture,
                       std::vector<Execution> executions)
    : gestures_(gestures),
      sensors_(sensors),
      executions_per_gesture_(executions_per_gesture),
      data_(std::move(executions)) {
  if (gestures < 1 || sensors < 1 || executions_per_gesture < 1) {
    throw Error(ErrorCode::ShapeError, "I, J and K must all be positive");
  }
  const auto expected = static_cast<std::size_t>(gestures) * static_cast<std::size_t>(executions_per_gesture);
  if (data_.size() != expected) {
    throw Error(ErrorCode::MissingExecution, "expected " + std::to_string(expected) +
                                                 " executions, got " + std::to_string(data_.size()));
  }
  for (int i = 0; i < gestures_; ++i) {
    for (int k = 0; k < executions_per_gesture_; ++k) {
      const auto& e = execution(i, k);
      if (e.rows.size() != static_cast<std::size_t>(sensors_)) {
        throw Error(ErrorCode::ShapeError, where(i, k) + " has " + std::to_string(e.rows.size()) +
                                               " rows, expected J=" + std::to_string(sensors_));
      }
      const auto len = e.length();
      if (len < 2) throw Error(ErrorCode::LengthError, where(i, k) + " has fewer than 2 samples");
      for (const auto& r : e.rows) {
        if (r.size() != len) throw Error(ErrorCode::ShapeError, where(i, k) + " has ragged rows");
        for (double v : r) {
          if (!std::isfinite(v)) throw Error(ErrorCode::ParseError, where(i, k) + " has a non-finite value");
        }
      }
    }
  }
}

const Execution& RawDataset::execution(int gesture, int execution) const {
  return data_.at(static_cast<std::size_t>(gesture) * static_cast<std::size_t>(executions_per_gesture_) +
                  static_cast<std::size_t>(execution));
}

std::span<const double> RawDataset::row(const SequenceId& id) const {
  return execution(id.gesture, id.execution).rows.at(static_cast<std::size_t>(id.sensor));
}

std::size_t RawDataset::length(int gesture, int execution) const {
  return this->execution(gesture, execution).length();
}

void SyntheticSpec::validate() const {
  if (gestures < 1 || sensors < 1 || executions < 1) {
    throw Error(ErrorCode::SpecError, "I, J and K must be positive");
  }
  if (min_length < 2 || max_length < min_length) {
    throw Error(ErrorCode::SpecError, "length_range must satisfy 2 <= min <= max");
  }
  if (!(noise_amplitude >= 0.0) || !std::isfinite(noise_amplitude)) {
    throw Error(ErrorCode::SpecError, "noise_amplitude must be finite and >= 0");
  }
  if (!sensor_noise.empty()) {
    if (sensor_noise.size() != static_cast<std::size_t>(sensors)) {
      throw Error(ErrorCode::SpecError, "sensor_noise must list one amplitude per sensor");
    }
    for (double a : sensor_noise) {
      if (!(a >= 0.0) || !std::isfinite(a)) throw Error(ErrorCode::SpecError, "sensor_noise entries must be >= 0");
    }
  }
  if (target_cp.size() != static_cast<std::size_t>(gestures)) {
    throw Error(ErrorCode::SpecError, "target_cp must have one row per gesture");
  }
  for (const auto& per_sensor : target_cp) {
    if (per_sensor.size() != static_cast<std::size_t>(sensors)) {
      throw Error(ErrorCode::SpecError, "target_cp rows must have one entry per sensor");
    }
    for (int e : per_sensor) {
      if (e < 0) throw Error(ErrorCode::SpecError, "target_cp values must be >= 0");
      // e interior extrema need e interior samples.
      if (e + 2 > min_length) {
        throw Error(ErrorCode::SpecError, "target_cp " + std::to_string(e) +
                                              " needs at least " + std::to_string(e + 2) +
                                              " samples, min_length is " + std::to_string(min_length));
      }
    }
  }
}

SyntheticSpec synthetic_spec_from_json(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SpecError, std::string("invalid JSON: ") + e.what());
  }
  SyntheticSpec spec;
  try {
    spec.gestures = j.at("I").get<int>();
    spec.sensors = j.at("J").get<int>();
    spec.executions = j.at("K").get<int>();
    const auto& t = j.at("target_cp");
    if (t.is_number_integer()) {
      spec.target_cp.assign(static_cast<std::size_t>(std::max(spec.gestures, 0)),
                            std::vector<int>(static_cast<std::size_t>(std::max(spec.sensors, 0)), t.get<int>()));
    } else {
      spec.target_cp = t.get<std::vector<std::vector<int>>>();
    }
    const auto range = j.value("length_range", std::vector<int>{32, 64});
    if (range.size() != 2) throw Error(ErrorCode::SpecError, "length_range must be [min, max]");
    spec.min_length = range[0];
    spec.max_length = range[1];
    spec.noise_amplitude = j.value("noise_amplitude", 0.0);
    spec.sensor_noise = j.value("sensor_noise", std::vector<double>{});
    spec.seed = j.value("seed", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SpecError, std::string("malformed synthetic spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

namespace {

json spec_as_json(const SyntheticSpec& spec) {
  json j;
  j["I"] = spec.gestures;
  j["J"] = spec.sensors;
  j["K"] = spec.executions;
  j["target_cp"] = spec.target_cp;
  j["length_range"] = {spec.min_length, spec.max_length};
  j["noise_amplitude"] = spec.noise_amplitude;
  if (!spec.sensor_noise.empty()) j["sensor_noise"] = spec.sensor_noise;
  j["seed"] = spec.seed;
  return j;
}

}  // namespace

std::string synthetic_spec_to_json(const SyntheticSpec& spec) { return spec_as_json(spec).dump(2) + "\n"; }

RawDataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  std::vector<Execution> executions;
  executions.reserve(static_cast<std::size_t>(spec.gestures) * static_cast<std::size_t>(spec.executions));
  for (int i = 0; i < spec.gestures; ++i) {
    for (int k = 0; k < spec.executions; ++k) {
      Rng length_rng(derive_seed(spec.seed, {0, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(k)}));
      const auto length = static_cast<int>(length_rng.uniform_int(spec.min_length, spec.max_length));
      Execution e;
      e.rows.reserve(static_cast<std::size_t>(spec.sensors));
      for (int j = 0; j < spec.sensors; ++j) {
        Rng rng(derive_seed(spec.seed, {1, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j),
                                        static_cast<std::uint64_t>(k)}));
        const int extrema = spec.target_cp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        e.rows.push_back(arch_chain(extrema, length, spec.noise_for(j), rng));
      }
      executions.push_back(std::move(e));
    }
  }
  return RawDataset(spec.gestures, spec.sensors, spec.executions, std::move(executions));
}

void save_dataset(const RawDataset& dataset, const std::filesystem::path& root,
                  const std::optional<SyntheticSpec>& synthetic) {
  std::error_code ec;
  std::filesystem::create_directories(root, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + root.string() + ": " + ec.message());

  json manifest;
  manifest["I"] = dataset.gestures();
  manifest["J"] = dataset.sensors();
  manifest["K"] = dataset.executions();
  if (synthetic) manifest["synthetic"] = spec_as_json(*synthetic);
  write_text_file(root / "manifest.json", manifest.dump(2) + "\n");

  for (int i = 0; i < dataset.gestures(); ++i) {
    for (int k = 0; k < dataset.executions(); ++k) {
      std::string text;
      for (const auto& r : dataset.execution(i, k).rows) {
        for (std::size_t m = 0; m < r.size(); ++m) {
          if (m) text += ',';
          text += format_double(r[m]);
        }
        text += '\n';
      }
      write_text_file(root / execution_file_name(i, k), text);
    }
  }
}

RawDataset load_dataset(const std::filesystem::path& root) {
  const auto manifest_path = root / "manifest.json";
  if (!std::filesystem::exists(manifest_path)) {
    throw Error(ErrorCode::IoError, "no manifest.json in " + root.string());
  }
  int gestures = 0, sensors = 0, executions = 0;
  try {
    const auto manifest = json::parse(read_text_file(manifest_path));
    gestures = manifest.at("I").get<int>();
    sensors = manifest.at("J").get<int>();
    executions = manifest.at("K").get<int>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed manifest: ") + e.what());
  }
  if (gestures < 1 || sensors < 1 || executions < 1) {
    throw Error(ErrorCode::ShapeError, "manifest counts must be positive");
  }

  std::vector<Execution> data;
  data.reserve(static_cast<std::size_t>(gestures) * static_cast<std::size_t>(executions));
  for (int i = 0; i < gestures; ++i) {
    for (int k = 0; k < executions; ++k) {
      const auto path = root / execution_file_name(i, k);
      if (!std::filesystem::exists(path)) {
        throw Error(ErrorCode::MissingExecution, where(i, k) + ": " + path.filename().string() + " not found");
      }
      const auto text = read_text_file(path);
      const auto lines = nonblank_lines(text);
      if (lines.size() != static_cast<std::size_t>(sensors)) {
        throw Error(ErrorCode::ShapeError, path.filename().string() + " has " + std::to_string(lines.size()) +
                                               " rows, expected J=" + std::to_string(sensors));
      }
      Execution e;
      for (auto line : lines) {
        std::vector<double> r;
        for (auto cell : split(line, ',')) {
          try {
            r.push_back(parse_double(cell));
          } catch (const Error& err) {
            throw Error(ErrorCode::ParseError, path.filename().string() + ": " + err.what());
          }
        }
        e.rows.push_back(std::move(r));
      }
      if (e.length() < 2) {
        throw Error(ErrorCode::LengthError, path.filename().string() + " has fewer than 2 samples");
      }
      data.push_back(std::move(e));
    }
  }
  return RawDataset(gestures, sensors, executions, std::move(data));
}

}  // namespace cphmm
