#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "json.hpp"

#include "spiked_fisher/bulk.hpp"
#include "spiked_fisher/covariance.hpp"
#include "spiked_fisher/csv.hpp"
#include "spiked_fisher/error.hpp"
#include "spiked_fisher/linear_model.hpp"
#include "spiked_fisher/montecarlo.hpp"
#include "spiked_fisher/populations.hpp"

namespace spiked_fisher {

using Json = nlohmann::json;

/// Where a run writes its files. Empty dir means nothing is written.
struct OutputPaths {
  std::filesystem::path dir;
  bool samples = true;
  bool histograms = true;
  bool spectra = false;
};

struct RunFile {
  RunConfig run;
  OutputPaths outputs;
};

namespace detail {

template <class T>
T field(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    fail(ErrorCode::Config, std::string("field '") + key + "': " + e.what());
  }
}

inline PopulationKind population_from_json(const Json& j) {
  if (j.is_string()) return {parse_law(j.get<std::string>()), 1};
  if (j.is_object()) {
    PopulationKind k{parse_law(field<std::string>(j, "law", "gaussian")), field<int>(j, "q", 1)};
    if (k.q_flag != 0 && k.q_flag != 1) fail(ErrorCode::Config, "q must be 0 or 1");
    return k;
  }
  fail(ErrorCode::Config, "population must be a name or {\"law\", \"q\"}");
}

/// A number is a point mass; an array is an empirical list; a string names a
/// file of values.
inline BulkMeasure bulk_from_json(const Json& j, const std::filesystem::path& base) {
  if (j.is_number()) return BulkMeasure::point_mass(j.get<double>());
  if (j.is_array()) return BulkMeasure::empirical(j.get<std::vector<double>>());
  if (j.is_string()) {
    std::filesystem::path file = j.get<std::string>();
    if (file.is_relative()) file = base / file;
    return BulkMeasure::empirical(read_values(file));
  }
  fail(ErrorCode::Config, "bulk must be a number, an array or a file name");
}

}  // namespace detail

inline Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::Config, path.string() + ": " + e.what());
  }
}

inline SpikeSpec spike_spec_from_json(const Json& j, const std::filesystem::path& base = {}) {
  SpikeSpec spec;
  spec.p = detail::field<Eigen::Index>(j, "p", 0);
  if (!j.contains("spikes") || !j.at("spikes").is_array()) {
    fail(ErrorCode::Config, "'spikes' must be an array of [alpha, multiplicity]");
  }
  for (const Json& s : j.at("spikes")) {
    if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number_integer()) {
      fail(ErrorCode::Config, "each spike is [alpha, multiplicity]");
    }
    spec.spikes.push_back({s[0].get<double>(), s[1].get<int>()});
  }
  if (j.contains("bulk")) spec.bulk = detail::bulk_from_json(j.at("bulk"), base);
  return spec;
}

inline CovarianceCase parse_case(const std::string& s) {
  if (s == "I" || s == "1") return CovarianceCase::I;
  if (s == "II" || s == "2") return CovarianceCase::II;
  fail(ErrorCode::Config, "case must be I or II, got '" + s + "'");
}

inline RunFile run_file_from_json(const Json& j, const std::filesystem::path& base = {}) {
  if (!j.is_object()) fail(ErrorCode::Config, "run config must be a JSON object");
  RunFile out;
  RunConfig& c = out.run;
  c.spec = spike_spec_from_json(j, base);
  c.covariance_case = parse_case(detail::field<std::string>(j, "case", "I"));
  c.rho = detail::field(j, "rho", c.rho);
  c.n1 = detail::field<Eigen::Index>(j, "n1", 0);
  c.n2 = detail::field<Eigen::Index>(j, "n2", 0);
  if (j.contains("population_x")) c.population_x = detail::population_from_json(j.at("population_x"));
  if (j.contains("population_y")) c.population_y = detail::population_from_json(j.at("population_y"));
  c.replications = detail::field(j, "replications", c.replications);
  c.base_seed = detail::field<std::uint64_t>(j, "base_seed", c.base_seed);
  c.truncate = detail::field(j, "truncate", c.truncate);
  c.eta = detail::field(j, "eta", c.eta);
  c.threads = detail::field(j, "threads", c.threads);
  c.reference_draws = detail::field<Eigen::Index>(j, "reference_draws", c.reference_draws);
  if (j.contains("outputs")) {
    const Json& o = j.at("outputs");
    if (o.is_string()) {
      out.outputs.dir = o.get<std::string>();
    } else if (o.is_object()) {
      out.outputs.dir = detail::field<std::string>(o, "dir", "");
      out.outputs.samples = detail::field(o, "samples", out.outputs.samples);
      out.outputs.histograms = detail::field(o, "histograms", out.outputs.histograms);
      out.outputs.spectra = detail::field(o, "spectra", out.outputs.spectra);
    } else {
      fail(ErrorCode::Config, "'outputs' must be a directory or an object");
    }
  }
  c.validate();
  return out;
}

inline RunFile load_run_file(const std::filesystem::path& path) {
  return run_file_from_json(load_json(path), path.parent_path());
}

/// {"p", "n", "q0", "q1", "level"} for the linear model or {"p", "m", "T",
/// "level"} for signal detection.
inline RoySetup roy_setup_from_json(const Json& j) {
  const auto p = detail::field<Eigen::Index>(j, "p", 0);
  const double level = detail::field(j, "level", 0.05);
  if (j.contains("m") || j.contains("T")) {
    return make_pencil_setup(p, detail::field<Eigen::Index>(j, "m", 0),
                             detail::field<Eigen::Index>(j, "T", 0), level);
  }
  return make_roy_setup(p, detail::field<Eigen::Index>(j, "n", 0),
                        detail::field<Eigen::Index>(j, "q0", 0),
                        detail::field<Eigen::Index>(j, "q1", 0), level);
}

}  // namespace spiked_fisher
