// Copyright 2026 The irho Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "irho/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include "irho/ensemble.hpp"
#include "irho/errors.hpp"
#include "irho/measurement.hpp"
#include "irho/protocol.hpp"
#include "irho/qstate.hpp"
#include "irho/stats.hpp"

namespace irho::cli {
namespace {

using Json = nlohmann::ordered_json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "seed", "out", "format", "n", "message", "device", "m-clones", "basis0", "basis1",
      "mode", "differential", "trials", "timing"};
  return keys;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

// Typed access to manifest parameters; every failure names the field.
class ParamReader {
 public:
  explicit ParamReader(const Params& p) : p_(p) {}

  std::uint64_t u64(const std::string& key, std::uint64_t fallback) const {
    const auto it = p_.find(key);
    if (it == p_.end()) return fallback;
    const std::string& v = it->second;
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError(key + ": expected a non-negative integer, got '" + v + "'");
    }
    try {
      return std::stoull(v);
    } catch (const std::exception&) {
      throw UsageError(key + ": value out of range '" + v + "'");
    }
  }

  std::size_t count(const std::string& key, std::size_t fallback) const {
    const auto v = u64(key, fallback);
    if (v == 0) throw UsageError(key + ": must be at least 1");
    return static_cast<std::size_t>(v);
  }

  std::string str(const std::string& key, const std::string& fallback) const {
    const auto it = p_.find(key);
    return it == p_.end() ? fallback : it->second;
  }

  bool flag(const std::string& key) const {
    const auto it = p_.find(key);
    if (it == p_.end()) return false;
    if (it->second == "true" || it->second == "1" || it->second.empty()) return true;
    if (it->second == "false" || it->second == "0") return false;
    throw UsageError(key + ": expected true or false, got '" + it->second + "'");
  }

  Basis basis(const std::string& key, const Basis& fallback) const {
    const auto it = p_.find(key);
    if (it == p_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "up-down") return bases::up_down();
    if (v == "right-left" || v == "left-right") return bases::right_left();
    if (v == "in-out") return bases::in_out();
    const auto comma = v.find(',');
    if (comma == std::string::npos) {
      throw UsageError(key + ": expected 'theta,phi' or up-down|right-left|in-out, got '" + v + "'");
    }
    try {
      std::size_t used = 0;
      const std::string t = trim(v.substr(0, comma));
      const std::string ph = trim(v.substr(comma + 1));
      const double theta = std::stod(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      const double phi = std::stod(ph, &used);
      if (used != ph.size()) throw std::invalid_argument(ph);
      return basis_from_axis(theta, phi);
    } catch (const DomainError& e) {
      throw UsageError(key + ": " + e.what());
    } catch (const std::exception&) {
      throw UsageError(key + ": cannot parse angles in '" + v + "'");
    }
  }

  SplitMode mode() const {
    const std::string v = str("mode", "sampled");
    if (v == "sampled") return SplitMode::kSampled;
    if (v == "exact-half") return SplitMode::kExactHalf;
    throw UsageError("mode: expected sampled or exact-half, got '" + v + "'");
  }

 private:
  const Params& p_;
};

// Collects records; every record carries the seed and config hash.
class ResultSink {
 public:
  ResultSink(Format format, std::uint64_t seed, std::string hash)
      : format_(format), seed_(seed), hash_(std::move(hash)) {
    if (format_ == Format::kCsv) out_ << "row,record,field,value,seed,config_hash\n";
  }

  void emit(const std::string& record, const Json& fields) {
    if (format_ == Format::kJsonLines) {
      Json j;
      j["record"] = record;
      for (const auto& [k, v] : fields.items()) j[k] = v;
      j["seed"] = seed_;
      j["config_hash"] = hash_;
      out_ << j.dump() << '\n';
    } else {
      for (const auto& [k, v] : fields.items()) {
        out_ << row_ << ',' << record << ',' << k << ','
             << (v.is_string() ? v.get<std::string>() : v.dump()) << ',' << seed_ << ',' << hash_
             << '\n';
      }
    }
    ++row_;
  }

  std::string str() const { return out_.str(); }

 private:
  Format format_;
  std::uint64_t seed_;
  std::string hash_;
  std::ostringstream out_;
  std::size_t row_ = 0;
};

struct CommandResult {
  Json headline = Json::object();
  bool passed = true;
};

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json matrix_json(const DensityMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Json bloch_json(const BlochVector& r) { return Json::array({r.x, r.y, r.z}); }

Basis random_basis(Rng& rng) {
  const double theta = std::acos(std::clamp(2.0 * rng.uniform() - 1.0, -1.0, 1.0));
  return basis_from_axis(theta, 2.0 * std::numbers::pi * rng.uniform());
}

CommandResult cmd_partial_trace(const ParamReader&, ResultSink& sink) {
  const auto psi = TwoQubitState::singlet();
  const char* names[2] = {"u", "d"};
  CommandResult res;
  double worst = 0.0;
  const auto half = DensityMatrix::maximally_mixed();
  for (int kept = 0; kept < 2; ++kept) {
    const DensityMatrix rho = kept == 0 ? partial_trace_first_kept(psi) : partial_trace_second_kept(psi);
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) {
        sink.emit("rho_entry", Json{{"kept", kept == 0 ? "first" : "second"},
                                    {"entry", std::string("rho_") + names[a] + names[b]},
                                    {"re", rho(a, b).real()},
                                    {"im", rho(a, b).imag()}});
      }
    }
    worst = std::max(worst, max_entry_difference(rho, half));
  }
  res.passed = worst <= kExactTol;
  res.headline["max_deviation_from_half_identity"] = worst;
  return res;
}

CommandResult cmd_rho_equality(const ParamReader& p, ResultSink& sink) {
  const std::size_t sweep = p.count("n", 1000);
  Rng rng(p.u64("seed", 1));
  const auto ud = bases::up_down();
  const auto rl = bases::right_left();
  const auto rho1 = mix({{0.5, ud.plus()}, {0.5, ud.minus()}});
  const auto rho2 = mix({{0.5, rl.plus()}, {0.5, rl.minus()}});
  const auto half = DensityMatrix::maximally_mixed();
  sink.emit("density", Json{{"name", "rho1"}, {"matrix", matrix_json(rho1)}});
  sink.emit("density", Json{{"name", "rho2"}, {"matrix", matrix_json(rho2)}});
  const double td = trace_distance(rho1, rho2);
  sink.emit("trace_distance", Json{{"pair", "rho1,rho2"}, {"value", td}});
  double worst = std::max(max_entry_difference(rho1, half), max_entry_difference(rho2, half));
  for (std::size_t i = 0; i < sweep; ++i) {
    const Basis b = random_basis(rng);
    worst = std::max(worst, max_entry_difference(mix({{0.5, b.plus()}, {0.5, b.minus()}}), half));
  }
  sink.emit("basis_sweep", Json{{"bases", sweep}, {"max_deviation", worst}});
  CommandResult res;
  res.passed = td <= kExactTol && worst <= kExactTol;
  res.headline["trace_distance"] = td;
  res.headline["sweep_max_deviation"] = worst;
  return res;
}

CommandResult cmd_nosignal(const ParamReader& p, ResultSink& sink) {
  const std::size_t n = p.count("n", 100000);
  const std::uint64_t seed = p.u64("seed", 1);
  const Basis b0 = p.basis("basis0", bases::up_down());
  const Basis b1 = p.basis("basis1", bases::right_left());
  const double td = trace_distance(expected_bob_density(b0), expected_bob_density(b1));
  sink.emit("analytic", Json{{"quantity", "trace_distance(rho_B|basis0, rho_B|basis1)"}, {"value", td}});
  CommandResult res;
  double min_p = 1.0;
  const Basis* bob_bases[2] = {&b0, &b1};
  for (std::size_t k = 0; k < 2; ++k) {
    Rng rng(Rng::derive(seed, k));
    const TestResult t = pooled_nosignal_test(n, b0, b1, *bob_bases[k], rng);
    sink.emit("empirical", Json{{"bob_basis", k == 0 ? "basis0" : "basis1"},
                                {"n_per_arm", n},
                                {"z", t.statistic},
                                {"p_value", t.p_value}});
    min_p = std::min(min_p, t.p_value);
  }
  res.passed = td <= kExactTol && min_p > 1e-3;
  res.headline["trace_distance"] = td;
  res.headline["min_p_value"] = min_p;
  return res;
}

ScenarioConfig scenario_from(const ParamReader& p, const std::string& default_device,
                             std::size_t default_n) {
  ScenarioConfig cfg;
  cfg.n_per_block = p.count("n", default_n);
  cfg.message = p.str("message", "1011");
  cfg.basis0 = p.basis("basis0", bases::up_down());
  cfg.basis1 = p.basis("basis1", bases::right_left());
  cfg.master_seed = p.u64("seed", 1);
  cfg.preparation_mode = p.mode();
  cfg.differential = p.flag("differential");
  const std::string device = p.str("device", default_device);
  if (device == "physical") {
    cfg.bob_device = PhysicalDevice{std::make_shared<ReferenceStrategy>(cfg.basis0, cfg.basis1)};
  } else if (device == "basis-oracle") {
    cfg.bob_device = BasisOracleDevice{};
  } else if (device == "clone-oracle") {
    cfg.bob_device = CloneOracleDevice{p.count("m-clones", 10000)};
  } else {
    throw UsageError("device: expected physical, basis-oracle or clone-oracle, got '" + device + "'");
  }
  try {
    cfg.validate();
  } catch (const DomainError& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  return cfg;
}

void emit_channel(const ChannelReport& report, ResultSink& sink) {
  for (const auto& b : report.blocks) {
    Json j{{"block", b.block_index}, {"alice_basis", b.alice_basis_bit}, {"alice_plus", b.alice_plus}};
    j["sent_bit"] = b.sent_bit ? Json(*b.sent_bit) : Json(nullptr);
    j["decoded_bit"] = b.decoded_bit ? Json(*b.decoded_bit) : Json(nullptr);
    j["statistic"] = b.statistic;
    if (!b.labels.empty()) j["labels"] = b.labels;
    sink.emit("block", j);
  }
}

CommandResult cmd_ftl_demo(const ParamReader& p, ResultSink& sink) {
  const ScenarioConfig cfg = scenario_from(p, "basis-oracle", 8);
  const ChannelReport report = run_channel(cfg);
  emit_channel(report, sink);
  CommandResult res;
  res.headline["device"] = report.device_mode;
  res.headline["sent"] = report.sent_message;
  res.headline["decoded"] = report.decoded_message;
  res.headline["bit_error_rate"] = report.bit_error_rate;
  // The basis oracle reads labels exactly, so anything but a clean channel is a bug.
  if (std::holds_alternative<BasisOracleDevice>(cfg.bob_device)) res.passed = report.bit_error_rate == 0.0;
  return res;
}

CommandResult cmd_flash_demo(const ParamReader& p, ResultSink& sink) {
  const ScenarioConfig cfg = scenario_from(p, "clone-oracle", 16);
  const ChannelReport report = run_channel(cfg);
  emit_channel(report, sink);
  CommandResult res;
  res.headline["device"] = report.device_mode;
  res.headline["sent"] = report.sent_message;
  res.headline["decoded"] = report.decoded_message;
  res.headline["bit_error_rate"] = report.bit_error_rate;
  if (const auto* c = std::get_if<CloneOracleDevice>(&cfg.bob_device); c && p.u64("trials", 0) > 0) {
    TrialSpec spec{cfg.n_per_block, p.count("trials", 1), cfg.basis0, cfg.basis1,
                   cfg.preparation_mode, Rng::derive(cfg.master_seed, 3ULL << 32)};
    const double acc = clone_oracle_accuracy(spec, c->m_clones);
    sink.emit("clone_accuracy", Json{{"m_clones", c->m_clones}, {"trials", spec.trials}, {"accuracy", acc}});
    res.headline["clone_accuracy"] = acc;
  }
  return res;
}

CommandResult cmd_chsh(const ParamReader& p, ResultSink& sink) {
  const std::size_t samples = p.count("n", 100000);
  Rng rng(p.u64("seed", 1));
  const auto settings = optimal_chsh_settings();
  const auto exact = chsh_correlators_exact(TwoQubitState::singlet(), settings);
  const auto sampled = chsh_correlators_sampled(settings, samples, rng);
  const char* names[4] = {"a1b1", "a1b2", "a2b1", "a2b2"};
  for (std::size_t k = 0; k < 4; ++k) {
    sink.emit("correlator", Json{{"setting", names[k]}, {"exact", exact[k]}, {"sampled", sampled[k]}});
  }
  double classical = 0.0;
  for (double s : deterministic_chsh_values()) classical = std::max(classical, std::abs(s));
  const double s_exact = chsh_value(exact);
  const double s_sampled = chsh_value(sampled);
  sink.emit("chsh", Json{{"analytic", s_exact}, {"sampled", s_sampled}, {"samples_per_setting", samples},
                         {"classical_max", classical}});
  CommandResult res;
  res.passed = std::abs(s_exact - 2 * std::numbers::sqrt2) <= kComposedTol && classical <= 2.0;
  res.headline["chsh_analytic"] = s_exact;
  res.headline["chsh_sampled"] = s_sampled;
  res.headline["classical_max"] = classical;
  return res;
}

CommandResult cmd_tomography(const ParamReader& p, ResultSink& sink) {
  const std::size_t n = p.count("n", 10000);
  const std::size_t trials = p.count("trials", 1000);
  const std::uint64_t seed = p.u64("seed", 1);
  const double bound = 5.0 / std::sqrt(static_cast<double>(n));
  std::size_t within = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(Rng::derive(seed, t));
    const auto state = counterfactual::clone_state(prepare_uniform_random(1, rng).particles().front());
    const auto est = tomography_estimate(sample_tomography_counts(state, n, rng));
    const BlochVector truth = bloch_of(state);
    const double err = (est.raw - truth).norm();
    within += err <= bound;
    sink.emit("tomography", Json{{"trial", t}, {"true", bloch_json(truth)}, {"estimate", bloch_json(est.raw)},
                                 {"error", err}});
  }
  const double frac = static_cast<double>(within) / static_cast<double>(trials);
  CommandResult res;
  res.passed = frac >= 0.99;
  res.headline["n_per_axis"] = n;
  res.headline["bound"] = bound;
  res.headline["fraction_within_bound"] = frac;
  return res;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"partial-trace", "rho-equality", "nosignal", "ftl-demo",
                                                 "flash-demo",    "chsh",         "tomography"};
  return names;
}

Params parse_config_text(std::string_view text) {
  Params out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = normalize_key(trim(content.substr(0, eq)));
    if (key.empty()) throw UsageError("config line " + std::to_string(line_no) + ": empty key");
    out[key] = trim(content.substr(eq + 1));
  }
  return out;
}

Params read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

RunManifest make_manifest(const std::string& command, const Params& config, const Params& overrides) {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), command) == names.end()) {
    throw UsageError("unknown command '" + command + "'");
  }
  RunManifest m;
  m.command = command;
  for (const auto& source : {config, overrides}) {
    for (const auto& [k, v] : source) {
      const std::string key = normalize_key(k);
      if (!known_keys().count(key)) throw UsageError("unknown field '" + k + "'");
      m.params[key] = v;
    }
  }
  if (auto it = m.params.find("out"); it != m.params.end()) {
    m.output_path = it->second;
    m.params.erase(it);
  }
  if (auto it = m.params.find("format"); it != m.params.end()) {
    if (it->second == "json") {
      m.format = Format::kJsonLines;
    } else if (it->second == "csv") {
      m.format = Format::kCsv;
    } else {
      throw UsageError("format: expected json or csv, got '" + it->second + "'");
    }
    m.params.erase(it);
  }
  if (auto it = m.params.find("timing"); it != m.params.end()) {
    m.record_timing = ParamReader(m.params).flag("timing");
    m.params.erase(it);
  }
  return m;
}

std::string config_hash(const RunManifest& m) {
  std::string canonical = m.command + '\n';
  for (const auto& [k, v] : m.params) canonical += k + '=' + v + '\n';
  canonical += m.format == Format::kCsv ? "format=csv\n" : "format=json\n";
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int run(const RunManifest& manifest, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  const ParamReader params(manifest.params);
  std::optional<std::ofstream> file;
  if (!manifest.output_path.empty() && manifest.output_path != "-") {
    file.emplace(manifest.output_path, std::ios::binary | std::ios::trunc);
    if (!*file) {
      log << "error: cannot write '" << manifest.output_path << "'\n";
      return kIoError;
    }
  }
  CommandResult result;
  std::uint64_t seed = 0;
  const std::string hash = config_hash(manifest);
  std::optional<ResultSink> sink;
  try {
    seed = params.u64("seed", 1);
    sink.emplace(manifest.format, seed, hash);
    const std::string& c = manifest.command;
    if (c == "partial-trace") {
      result = cmd_partial_trace(params, *sink);
    } else if (c == "rho-equality") {
      result = cmd_rho_equality(params, *sink);
    } else if (c == "nosignal") {
      result = cmd_nosignal(params, *sink);
    } else if (c == "ftl-demo") {
      result = cmd_ftl_demo(params, *sink);
    } else if (c == "flash-demo") {
      result = cmd_flash_demo(params, *sink);
    } else if (c == "chsh") {
      result = cmd_chsh(params, *sink);
    } else if (c == "tomography") {
      result = cmd_tomography(params, *sink);
    } else {
      throw UsageError("unknown command '" + c + "'");
    }
  } catch (const UsageError& e) {
    log << "usage error: " << e.what() << '\n';
    return kUsageError;
  }
  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  Json summary{{"command", manifest.command}, {"status", result.passed ? "pass" : "fail"}};
  for (const auto& [k, v] : result.headline.items()) summary[k] = v;
  if (manifest.record_timing) summary["wall_time_ms"] = wall_ms;
  sink->emit("summary", summary);

  const std::string text = sink->str();
  std::ostream& out = file ? static_cast<std::ostream&>(*file) : std::cout;
  out << text;
  out.flush();
  if (!out) {
    log << "error: write to '" << manifest.output_path << "' failed\n";
    return kIoError;
  }
  log << manifest.command << ": " << (result.passed ? "pass" : "FAIL") << " (seed " << seed << ", config "
      << hash << ", " << wall_ms << " ms)\n";
  return result.passed ? kOk : kAssertionFailed;
}

int main_entry(int argc, const char* const* argv, std::ostream& log) {
  CLI::App app{"Two-qubit I-rho laboratory: mixed-state indistinguishability and oracle channels"};
  std::string command;
  std::string config_path;
  Params overrides;
  app.add_option("command", command, "partial-trace | rho-equality | nosignal | ftl-demo | flash-demo | chsh | tomography")
      ->required();
  app.add_option("--config", config_path, "key = value config file");
  const char* value_flags[] = {"--seed",  "--out",  "--format", "--n",      "--message", "--device",
                               "--m-clones", "--basis0", "--basis1", "--mode", "--trials"};
  std::map<std::string, std::string> raw;
  for (const char* f : value_flags) app.add_option(f, raw[f + 2]);
  bool differential = false;
  bool timing = false;
  app.add_flag("--differential", differential, "encode bits as basis changes between blocks");
  app.add_flag("--timing", timing, "record wall time in the summary row");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    log << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    log << "usage error: " << e.what() << '\n' << app.help();
    return kUsageError;
  }
  for (const auto& [k, v] : raw) {
    if (app.count("--" + k) > 0) overrides[k] = v;
  }
  if (differential) overrides["differential"] = "true";
  if (timing) overrides["timing"] = "true";
  try {
    const Params config = config_path.empty() ? Params{} : read_config_file(config_path);
    return run(make_manifest(command, config, overrides), log);
  } catch (const IoError& e) {
    log << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const UsageError& e) {
    log << "usage error: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace irho::cli
