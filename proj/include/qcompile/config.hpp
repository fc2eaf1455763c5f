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

// Run configuration files: flat `key = value` lines grouped under
// `[section]` headers, '#' starts a comment.
//
//   [gateset]
//   name = clifford_t
//
//   [net]
//   preset = desk          # desk | paper; explicit widths override it
//   hidden1 = 256
//
//   [train]
//   d_start = 3
//   d_max = 8
//
//   [output]
//   model = model.qcm
//   log = train_log.csv
//   checkpoint_dir =       # empty: no per-depth checkpoints
//
// Sections and keys are fixed (see dump_run_config for the full list);
// unknown ones are errors. Diagnostics carry `<source>:<line>: <section.key>`.

#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "qcompile/qnet.hpp"

namespace qcompile {

struct ConfigEntry {
  std::string value;
  std::size_t line = 0;
};

/// Raw parse: "section.key" -> value. Keys before any section header live
/// in the "" section and are reported as unknown by parse_run_config.
struct RawConfig {
  std::string source;
  std::map<std::string, ConfigEntry> entries;
};

RawConfig parse_raw_config(std::istream& in, const std::string& source);

struct RunConfig {
  std::string gateset = "clifford_t";
  std::string net_preset = "desk";
  NetConfig net;
  TrainConfig train;
  std::string model_path = "model.qcm";
  std::string log_path = "train_log.csv";
  std::string checkpoint_dir;

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_run_config(std::istream& in, const std::string& source);
RunConfig load_run_config(const std::string& path);

/// Writes every field explicitly; parse_run_config of the output yields an
/// equal RunConfig.
void dump_run_config(std::ostream& out, const RunConfig& cfg);

}  // namespace qcompile
