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

#pragma once

// Command-line front end: builds a RunManifest from a key=value config file
// plus flag overrides, runs one experiment and writes its records.
//
// Config files hold one `key = value` per line; `#` starts a comment. Keys
// match the long flag names (underscores are accepted for dashes). Angles
// are in radians; a basis is `theta,phi` or one of up-down, right-left
// (alias left-right), in-out.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace irho::cli {

enum ExitCode : int { kOk = 0, kAssertionFailed = 1, kUsageError = 2, kIoError = 3 };

class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

enum class Format { kJsonLines, kCsv };

using Params = std::map<std::string, std::string>;

struct RunManifest {
  std::string command;
  Params params;  // normalized keys, config file first, flags override
  std::string output_path;
  Format format = Format::kJsonLines;
  bool record_timing = false;
};

const std::vector<std::string>& command_names();

// Parses config text. UsageError names the offending line.
Params parse_config_text(std::string_view text);
// IoError when the file cannot be read.
Params read_config_file(const std::string& path);

// Merges config and overrides, lifts out/format, checks the command and keys.
RunManifest make_manifest(const std::string& command, const Params& config, const Params& overrides);

// 64-bit FNV-1a of the command and the sorted parameters, as 16 hex digits.
std::string config_hash(const RunManifest& m);

// Runs the manifest; diagnostics and wall time go to `log`. Returns an ExitCode.
int run(const RunManifest& manifest, std::ostream& log);

// Full entry point: argument parsing, manifest, run.
int main_entry(int argc, const char* const* argv, std::ostream& log);

}  // namespace irho::cli
