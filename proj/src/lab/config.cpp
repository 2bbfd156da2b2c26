#include "qgeo/lab/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "qgeo/lab/csv.hpp"

namespace qgeo::lab {

namespace pt = boost::property_tree;

namespace {

double to_double(const std::string& section, const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || text.find_first_not_of(" \t", used) != std::string::npos) {
    throw UsageError("config [" + section + "] " + key + ": not a number: '" + text + "'");
  }
  return value;
}

int to_int(const std::string& section, const std::string& key, const std::string& text) {
  const double value = to_double(section, key, text);
  if (value != std::floor(value) || std::abs(value) > 1e9) {
    throw UsageError("config [" + section + "] " + key + ": not an integer: '" + text + "'");
  }
  return static_cast<int>(value);
}

std::vector<double> to_list(const std::string& section, const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(to_double(section, key, item));
  }
  return out;
}

// Keys allowed in each section, per model where it matters.
const std::set<std::string> kCommonModelKeys{"name", "level"};
const std::map<ModelKind, std::set<std::string>> kModelKeys{
    {ModelKind::landau_zener, {"delta", "lambda_start", "lambda_end"}},
    {ModelKind::two_level, {"path"}},
    {ModelKind::ising, {"J", "N", "lambda_start", "lambda_end"}},
};
const std::set<std::string> kProtocolKeys{"kind", "file"};
const std::set<std::string> kRunKeys{"tau",     "tau_min", "tau_max", "tau_count", "abs_tol",
                                     "rel_tol", "samples", "workers", "out"};

ModelKind parse_model(const std::string& name) {
  if (name == "lz") return ModelKind::landau_zener;
  if (name == "two_level") return ModelKind::two_level;
  if (name == "ising") return ModelKind::ising;
  throw UsageError("config [model] name: unknown model '" + name + "' (expected lz, two_level or ising)");
}

ProtocolKind parse_protocol(const std::string& name) {
  if (name == "linear") return ProtocolKind::linear;
  if (name == "optimal") return ProtocolKind::optimal;
  if (name == "file") return ProtocolKind::file;
  throw UsageError("config [protocol] kind: unknown protocol '" + name + "' (expected linear, optimal or file)");
}

SpherePath parse_path(const std::string& name) {
  if (name == "small_circle") return SpherePath::small_circle;
  if (name == "large_circle") return SpherePath::large_circle;
  throw UsageError("config [model] path: unknown path '" + name + "' (expected small_circle or large_circle)");
}

void reject_unknown(const pt::ptree& section, const std::string& name, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : section) {
    if (!value.empty()) throw UsageError("config [" + name + "] " + key + ": nested keys are not allowed");
    if (!allowed.count(key)) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      throw UsageError("config [" + name + "]: unknown key '" + key + "' (allowed: " + list + ")");
    }
  }
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::landau_zener: return "lz";
    case ModelKind::two_level: return "two_level";
    case ModelKind::ising: return "ising";
  }
  return "";
}

std::string to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::linear: return "linear";
    case ProtocolKind::optimal: return "optimal";
    case ProtocolKind::file: return "file";
  }
  return "";
}

std::string to_string(SpherePath path) {
  return path == SpherePath::small_circle ? "small_circle" : "large_circle";
}

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  for (const auto& [name, section] : tree) {
    if (name != "model" && name != "protocol" && name != "run" && name != "manifest") {
      if (section.empty()) throw UsageError("config: key '" + name + "' outside of a section");
      throw UsageError("config: unknown section [" + name + "] (expected model, protocol, run)");
    }
  }

  ExperimentConfig config;
  const pt::ptree empty;
  const pt::ptree& model = tree.get_child("model", empty);
  const pt::ptree& protocol = tree.get_child("protocol", empty);
  const pt::ptree& run = tree.get_child("run", empty);

  auto text = [](const pt::ptree& section, const std::string& key) -> std::optional<std::string> {
    if (auto v = section.get_optional<std::string>(key)) return *v;
    return std::nullopt;
  };

  // [model]
  config.model.kind = parse_model(text(model, "name").value_or("lz"));
  std::set<std::string> allowed = kCommonModelKeys;
  allowed.insert(kModelKeys.at(config.model.kind).begin(), kModelKeys.at(config.model.kind).end());
  reject_unknown(model, "model", allowed);
  if (auto v = text(model, "level")) config.model.level = to_int("model", "level", *v);
  switch (config.model.kind) {
    case ModelKind::landau_zener:
      config.model.lambda_start = -10.0;
      config.model.lambda_end = 10.0;
      if (auto v = text(model, "delta")) config.model.delta = to_double("model", "delta", *v);
      break;
    case ModelKind::ising:
      config.model.lambda_start = 2.0;
      config.model.lambda_end = 0.0;
      if (auto v = text(model, "J")) config.model.coupling = to_double("model", "J", *v);
      if (auto v = text(model, "N")) config.model.sites = to_int("model", "N", *v);
      break;
    case ModelKind::two_level:
      if (auto v = text(model, "path")) config.model.path = parse_path(*v);
      break;
  }
  if (auto v = text(model, "lambda_start")) config.model.lambda_start = to_double("model", "lambda_start", *v);
  if (auto v = text(model, "lambda_end")) config.model.lambda_end = to_double("model", "lambda_end", *v);

  // [protocol]
  reject_unknown(protocol, "protocol", kProtocolKeys);
  if (auto v = text(protocol, "kind")) config.protocol.kind = parse_protocol(*v);
  if (auto v = text(protocol, "file")) config.protocol.file = *v;
  if (config.protocol.kind == ProtocolKind::file && config.protocol.file.empty()) {
    throw UsageError("config [protocol]: kind = file needs a 'file' key");
  }
  if (config.protocol.kind != ProtocolKind::file && !config.protocol.file.empty()) {
    throw UsageError("config [protocol]: 'file' is only used with kind = file");
  }

  // [run]
  reject_unknown(run, "run", kRunKeys);
  const bool has_list = text(run, "tau").has_value();
  const bool has_range = text(run, "tau_min") || text(run, "tau_max") || text(run, "tau_count");
  if (has_list && has_range) throw UsageError("config [run]: give either tau or tau_min/tau_max/tau_count");
  if (has_list) config.run.taus = to_list("run", "tau", *text(run, "tau"));
  if (has_range) {
    if (!text(run, "tau_min") || !text(run, "tau_max") || !text(run, "tau_count")) {
      throw UsageError("config [run]: tau_min, tau_max and tau_count go together");
    }
    const double lo = to_double("run", "tau_min", *text(run, "tau_min"));
    const double hi = to_double("run", "tau_max", *text(run, "tau_max"));
    const int count = to_int("run", "tau_count", *text(run, "tau_count"));
    if (count < 1) throw UsageError("config [run] tau_count: must be at least 1");
    for (int i = 0; i < count; ++i) config.run.taus.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  }
  if (auto v = text(run, "abs_tol")) config.run.tolerances.abs_tol = to_double("run", "abs_tol", *v);
  if (auto v = text(run, "rel_tol")) config.run.tolerances.rel_tol = to_double("run", "rel_tol", *v);
  if (auto v = text(run, "samples")) config.run.samples = to_int("run", "samples", *v);
  if (auto v = text(run, "workers")) config.run.workers = to_int("run", "workers", *v);
  if (auto v = text(run, "out")) config.run.out = *v;

  validate(config);
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_config(in);
}

void validate(const ExperimentConfig& config) {
  for (double tau : config.run.taus) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
      throw UsageError("config [run]: operation times must be positive, got " + format_double(tau));
    }
  }
  if (config.run.samples < 2) throw UsageError("config [run] samples: need at least 2");
  if (config.run.workers < 0) throw UsageError("config [run] workers: must be non-negative");
  if (!(config.run.tolerances.abs_tol > 0.0) || !(config.run.tolerances.rel_tol > 0.0)) {
    throw UsageError("config [run]: tolerances must be positive");
  }
  if (config.model.level < 0 || config.model.level > 1) {
    throw UsageError("config [model] level: out of range for a two-level model");
  }
  if (config.model.kind == ModelKind::ising && config.model.level != 0) {
    throw UsageError("config [model] level: the Ising chain is tracked from its ground state (level 0)");
  }
}

std::string echo(const ExperimentConfig& config) {
  std::ostringstream out;
  const auto& m = config.model;
  out << "[model]\n";
  out << "name = " << to_string(m.kind) << "\n";
  out << "level = " << m.level << "\n";
  switch (m.kind) {
    case ModelKind::landau_zener:
      out << "delta = " << format_double(m.delta) << "\n";
      out << "lambda_start = " << format_double(m.lambda_start) << "\n";
      out << "lambda_end = " << format_double(m.lambda_end) << "\n";
      break;
    case ModelKind::ising:
      out << "J = " << format_double(m.coupling) << "\n";
      out << "N = " << m.sites << "\n";
      out << "lambda_start = " << format_double(m.lambda_start) << "\n";
      out << "lambda_end = " << format_double(m.lambda_end) << "\n";
      break;
    case ModelKind::two_level:
      out << "path = " << to_string(m.path) << "\n";
      break;
  }
  out << "\n[protocol]\n";
  out << "kind = " << to_string(config.protocol.kind) << "\n";
  if (config.protocol.kind == ProtocolKind::file) out << "file = " << config.protocol.file << "\n";
  out << "\n[run]\n";
  if (!config.run.taus.empty()) {
    out << "tau = ";
    for (std::size_t i = 0; i < config.run.taus.size(); ++i) {
      out << (i ? ", " : "") << format_double(config.run.taus[i]);
    }
    out << "\n";
  }
  out << "abs_tol = " << format_double(config.run.tolerances.abs_tol) << "\n";
  out << "rel_tol = " << format_double(config.run.tolerances.rel_tol) << "\n";
  out << "samples = " << config.run.samples << "\n";
  out << "workers = " << config.run.workers << "\n";
  out << "out = " << config.run.out << "\n";
  return out.str();
}

}  // namespace qgeo::lab
