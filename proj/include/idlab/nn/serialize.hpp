/* Copyright 2026 The Identity Lab Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "idlab/nn/params.hpp"

namespace idlab {

// Layout: 8-byte magic "IDLABPRM", little-endian uint64 header length, JSON
// header {"spec": ..., "blocks": [{name, rows, cols}, ...]}, then every
// parameter as a little-endian float64 in declared order (C first).
struct ParamFile {
  nlohmann::json spec;
  SplitParams params;
};

void write_params(std::ostream& out, const nlohmann::json& spec, const SplitParams& params);
ParamFile read_params(std::istream& in);

void save_params(const std::filesystem::path& path, const nlohmann::json& spec,
                 const SplitParams& params);
ParamFile load_params(const std::filesystem::path& path);

}  // namespace idlab
