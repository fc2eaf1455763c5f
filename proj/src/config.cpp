// Copyright 2026 The qcompile Authors
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

#include "qcompile/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "qcompile/errors.hpp"
#include "qcompile/gateset.hpp"

namespace qcompile {

namespace {

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& text, const std::string& where) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(where + ": expected a number, got '" + text + "'");
  }
  return v;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

RawConfig parse_raw_config(std::istream& in, const std::string& source) {
  RawConfig raw;
  raw.source = source;
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = line.substr(0, line.find('#'));
    body = trim(body);
    if (body.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(body.substr(1, body.size() - 2));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      continue;
    }
    auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    std::string key = trim(body.substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": missing key before '='");
    std::string full = section.empty() ? key : section + "." + key;
    if (raw.entries.count(full)) {
      throw ConfigError(where + ": " + full + ": duplicate key (first set on line " +
                        std::to_string(raw.entries[full].line) + ")");
    }
    raw.entries[full] = {trim(body.substr(eq + 1)), lineno};
  }
  return raw;
}

RunConfig parse_run_config(std::istream& in, const std::string& source) {
  RawConfig raw = parse_raw_config(in, source);
  RunConfig cfg;
  auto where = [&](const std::string& key) {
    return source + ":" + std::to_string(raw.entries.at(key).line) + ": " + key;
  };
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = raw.entries.find(key);
    return it == raw.entries.end() ? nullptr : &it->second.value;
  };

  if (auto v = get("gateset.name")) cfg.gateset = *v;
  if (auto v = get("net.preset")) cfg.net_preset = *v;
  GateSet gs = [&] {
    try {
      return build_gateset(cfg.gateset);
    } catch (const ConfigError& e) {
      throw ConfigError((get("gateset.name") ? where("gateset.name") : source + ": gateset.name") +
                        ": " + e.what());
    }
  }();
  if (cfg.net_preset == "desk") {
    cfg.net = NetConfig::desk(gs);
  } else if (cfg.net_preset == "paper") {
    cfg.net = NetConfig::paper(gs);
  } else {
    throw ConfigError(where("net.preset") + ": unknown preset '" + cfg.net_preset +
                      "' (valid: desk, paper)");
  }

  using Setter = std::function<void(const std::string& value, const std::string& at)>;
  auto int_field = [](int& f) -> Setter {
    return [&f](const std::string& v, const std::string& at) { f = parse_number<int>(v, at); };
  };
  auto size_field = [](std::size_t& f) -> Setter {
    return [&f](const std::string& v, const std::string& at) { f = parse_number<std::size_t>(v, at); };
  };
  auto double_field = [](double& f) -> Setter {
    return [&f](const std::string& v, const std::string& at) { f = parse_number<double>(v, at); };
  };
  auto string_field = [](std::string& f) -> Setter {
    return [&f](const std::string& v, const std::string&) { f = v; };
  };
  TrainConfig& t = cfg.train;
  NetConfig& n = cfg.net;
  const std::map<std::string, Setter> fields = {
      {"gateset.name", [](const std::string&, const std::string&) {}},
      {"net.preset", [](const std::string&, const std::string&) {}},
      {"net.input_dim", int_field(n.input_dim)},
      {"net.hidden1", int_field(n.hidden1)},
      {"net.hidden2", int_field(n.hidden2)},
      {"net.blocks", int_field(n.blocks)},
      {"net.block_width", int_field(n.block_width)},
      {"net.outputs", int_field(n.outputs)},
      {"net.activation",
       [](const std::string& v, const std::string& at) {
         if (v != "relu") throw ConfigError(at + ": unknown activation '" + v + "' (valid: relu)");
       }},
      {"train.lr", double_field(t.lr)},
      {"train.weight_decay", double_field(t.weight_decay)},
      {"train.gamma", double_field(t.gamma)},
      {"train.delta", double_field(t.delta)},
      {"train.d_start", int_field(t.d_start)},
      {"train.d_max", int_field(t.d_max)},
      {"train.batch", size_field(t.batch)},
      {"train.transitions_per_depth", size_field(t.transitions_per_depth)},
      {"train.pool_capacity", size_field(t.pool_capacity)},
      {"train.target_sync_interval", size_field(t.target_sync_interval)},
      {"train.max_steps_per_depth", size_field(t.max_steps_per_depth)},
      {"train.resample_interval", size_field(t.resample_interval)},
      {"train.ema_half_life", double_field(t.ema_half_life)},
      {"train.eps", double_field(t.eps)},
      {"train.seed",
       [&t](const std::string& v, const std::string& at) { t.seed = parse_number<std::uint64_t>(v, at); }},
      {"output.model", string_field(cfg.model_path)},
      {"output.log", string_field(cfg.log_path)},
      {"output.checkpoint_dir", string_field(cfg.checkpoint_dir)},
  };

  for (const auto& [key, entry] : raw.entries) {
    auto it = fields.find(key);
    if (it == fields.end()) throw ConfigError(where(key) + ": unknown key");
    it->second(entry.value, where(key));
  }

  auto rethrow_with_line = [&](const ConfigError& e) {
    // Validation messages start with the field name; attach its line.
    std::string msg = e.what();
    std::string field = msg.substr(0, msg.find_first_of(" :"));
    if (raw.entries.count(field)) throw ConfigError(source + ":" + std::to_string(raw.entries.at(field).line) + ": " + msg);
    throw ConfigError(source + ": " + msg);
  };
  try {
    cfg.train.validate();
    cfg.net.validate();
  } catch (const ConfigError& e) {
    rethrow_with_line(e);
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  return parse_run_config(f, path);
}

void dump_run_config(std::ostream& out, const RunConfig& cfg) {
  const NetConfig& n = cfg.net;
  const TrainConfig& t = cfg.train;
  out << "[gateset]\n"
      << "name = " << cfg.gateset << "\n\n"
      << "[net]\n"
      << "preset = " << cfg.net_preset << "\n"
      << "input_dim = " << n.input_dim << "\n"
      << "hidden1 = " << n.hidden1 << "\n"
      << "hidden2 = " << n.hidden2 << "\n"
      << "blocks = " << n.blocks << "\n"
      << "block_width = " << n.block_width << "\n"
      << "outputs = " << n.outputs << "\n"
      << "activation = relu\n\n"
      << "[train]\n"
      << "lr = " << fmt_double(t.lr) << "\n"
      << "weight_decay = " << fmt_double(t.weight_decay) << "\n"
      << "gamma = " << fmt_double(t.gamma) << "\n"
      << "delta = " << fmt_double(t.delta) << "\n"
      << "d_start = " << t.d_start << "\n"
      << "d_max = " << t.d_max << "\n"
      << "batch = " << t.batch << "\n"
      << "transitions_per_depth = " << t.transitions_per_depth << "\n"
      << "pool_capacity = " << t.pool_capacity << "\n"
      << "target_sync_interval = " << t.target_sync_interval << "\n"
      << "max_steps_per_depth = " << t.max_steps_per_depth << "\n"
      << "resample_interval = " << t.resample_interval << "\n"
      << "ema_half_life = " << fmt_double(t.ema_half_life) << "\n"
      << "eps = " << fmt_double(t.eps) << "\n"
      << "seed = " << t.seed << "\n\n"
      << "[output]\n"
      << "model = " << cfg.model_path << "\n"
      << "log = " << cfg.log_path << "\n"
      << "checkpoint_dir = " << cfg.checkpoint_dir << "\n";
}

}  // namespace qcompile
