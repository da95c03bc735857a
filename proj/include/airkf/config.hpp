// Copyright 2026 The airkf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <filesystem>
#include <string>

#include "airkf/scenario.hpp"

namespace airkf {

// JSON experiment configuration mirroring the ExperimentConfig fields.
// Unknown keys are errors. SNR values accept the string "inf".
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Serialization of a fully resolved config (all defaults expanded). The
// manifest written next to experiment outputs is exactly this text plus the
// tool version, which is sufficient to regenerate every output byte.
std::string config_to_json(const ExperimentConfig& config);

}  // namespace airkf
