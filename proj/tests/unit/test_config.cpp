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

#include <sstream>

#include "doctest.h"
#include "qcompile/config.hpp"
#include "qcompile/errors.hpp"

using namespace qcompile;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_run_config(in, "test.cfg");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "no error";
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("defaults and presets") {
  RunConfig d = parse("");
  CHECK(d.gateset == "clifford_t");
  CHECK(d.net == NetConfig::desk(build_gateset("clifford_t")));
  CHECK(d.train == TrainConfig{});

  RunConfig p = parse("[gateset]\nname = two_qubit_hrc\n[net]\npreset = paper\n");
  CHECK(p.net.hidden1 == 6000);
  CHECK(p.net.hidden2 == 2000);
  CHECK(p.net.input_dim == 32);
  CHECK(p.net.outputs == 14);
}

TEST_CASE("explicit fields override the preset") {
  RunConfig c = parse(
      "# toy\n[net]\npreset = desk\nhidden1 = 32   # small\n[train]\nd_start = 2\nd_max = 5\n"
      "lr = 5e-4\nseed = 18446744073709551615\n[output]\nmodel = m.qcm\ncheckpoint_dir = ck\n");
  CHECK(c.net.hidden1 == 32);
  CHECK(c.net.hidden2 == 128);
  CHECK(c.train.d_start == 2);
  CHECK(c.train.d_max == 5);
  CHECK(c.train.lr == 5e-4);
  CHECK(c.train.seed == 18446744073709551615ULL);
  CHECK(c.model_path == "m.qcm");
  CHECK(c.checkpoint_dir == "ck");
}

TEST_CASE("diagnostics carry the line and the field") {
  CHECK(error_of("[train]\nbogus = 1\n") == "test.cfg:2: train.bogus: unknown key");
  CHECK(error_of("[train]\nd_max = x3\n").find("test.cfg:2: train.d_max: expected a number, got 'x3'") == 0);
  CHECK(error_of("[train\n").find("test.cfg:1: unterminated") == 0);
  CHECK(error_of("[train]\nd_max\n").find("test.cfg:2:") == 0);
  CHECK(error_of("[train]\nd_max = 3\nd_max = 4\n").find("duplicate key") != std::string::npos);
  CHECK(error_of("[gateset]\nname = toffoli\n").find("test.cfg:2: gateset.name") == 0);
  CHECK(error_of("[net]\npreset = huge\n").find("test.cfg:2: net.preset") == 0);
  CHECK(error_of("[net]\nactivation = tanh\n").find("unknown activation") != std::string::npos);
  CHECK(error_of("lr = 1\n").find("test.cfg:1: lr: unknown key") == 0);

  std::string both = error_of("[train]\nd_start = 9\nd_max = 4\n");
  CHECK(both.find("test.cfg:3: train.d_max") == 0);
  CHECK(both.find("train.d_start") != std::string::npos);
  CHECK(error_of("[net]\nhidden2 = 0\n").find("test.cfg:2: net.hidden2") == 0);
  CHECK(error_of("[train]\nbatch = -1\n").find("train.batch") != std::string::npos);
  CHECK_THROWS_AS(load_run_config("/nonexistent/run.cfg"), ConfigError);
}

TEST_CASE("dump round trip") {
  RunConfig c = parse("[gateset]\nname = hrc\n[train]\nlr = 0.1\ndelta = 3.3e-3\nd_max = 12\n");
  std::ostringstream out;
  dump_run_config(out, c);
  RunConfig back = parse(out.str());
  CHECK(back == c);
  RunConfig empty_ck = parse("");
  std::ostringstream o2;
  dump_run_config(o2, empty_ck);
  CHECK(parse(o2.str()) == empty_ck);
}

}  // TEST_SUITE
