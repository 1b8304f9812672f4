// SPDX-License-Identifier: Apache-2.0
//
// JSON scenario files with flat keys named after SystemConfig fields.
// Precedence: KEY=VALUE override > file > built-in default.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "risee/model.hpp"

namespace risee {

// Parses JSON text on top of `base`. An empty or whitespace-only document
// yields `base`. Unknown keys, wrong types and syntax errors throw
// ConfigError naming the key or the line.
SystemConfig parse_config(std::string_view text, const SystemConfig& base = {});

// Reads and parses a file, then validates. Throws ConfigError.
SystemConfig load_config(const std::string& path);

// Applies "key=value" (or key, value) with the same key rules as the file.
void apply_override(SystemConfig& cfg, std::string_view key, std::string_view value);
void apply_override(SystemConfig& cfg, std::string_view assignment);

std::vector<std::string> config_keys();

// Canonical JSON dump, keys in declaration order.
std::string config_to_json(const SystemConfig& cfg);

}  // namespace risee
