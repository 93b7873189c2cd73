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

#include "idlab/nn/serialize.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "idlab/error.hpp"

namespace idlab {

namespace {

constexpr std::array<char, 8> kMagic{'I', 'D', 'L', 'A', 'B', 'P', 'R', 'M'};

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(bytes.data(), 8);
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), 8);
  require(in.gcount() == 8, ErrorKind::kIoError, "truncated parameter file");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[static_cast<std::size_t>(i)];
  return v;
}

}  // namespace

void write_params(std::ostream& out, const nlohmann::json& spec, const SplitParams& params) {
  nlohmann::json header;
  header["spec"] = spec;
  header["blocks"] = nlohmann::json::array();
  params.for_each([&](const std::string& name, const Matrix& m) {
    header["blocks"].push_back({{"name", name}, {"rows", m.rows()}, {"cols", m.cols()}});
  });
  const std::string text = header.dump();
  out.write(kMagic.data(), kMagic.size());
  put_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  params.for_each([&](const std::string&, const Matrix& m) {
    for (double v : m.values()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  });
  require(out.good(), ErrorKind::kIoError, "failed writing parameter stream");
}

ParamFile read_params(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  require(in.gcount() == 8, ErrorKind::kIoError, "truncated parameter file");
  require(magic == kMagic, ErrorKind::kFormatError, "not a parameter file (bad magic)");
  const std::uint64_t len = get_u64(in);
  require(len < (1u << 26), ErrorKind::kFormatError, "implausible header length");
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  require(static_cast<std::uint64_t>(in.gcount()) == len, ErrorKind::kIoError,
          "truncated parameter header");
  ParamFile file;
  try {
    const auto header = nlohmann::json::parse(text);
    file.spec = header.at("spec");
    const auto& blocks = header.at("blocks");
    require(blocks.is_array() && !blocks.empty(), ErrorKind::kFormatError,
            "parameter header lists no blocks");
    bool first = true;
    for (const auto& blk : blocks) {
      const auto name = blk.at("name").get<std::string>();
      Matrix m(blk.at("rows").get<std::size_t>(), blk.at("cols").get<std::size_t>());
      for (double& v : m.values()) v = std::bit_cast<double>(get_u64(in));
      if (first) {
        file.params.c_name = name;
        file.params.c = std::move(m);
        first = false;
      } else {
        file.params.b.push_back({name, std::move(m)});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kFormatError, std::string("bad parameter header: ") + e.what());
  }
  return file;
}

void save_params(const std::filesystem::path& path, const nlohmann::json& spec,
                 const SplitParams& params) {
  std::ofstream out(path, std::ios::binary);
  require(out.is_open(), ErrorKind::kIoError, "cannot open " + path.string() + " for writing");
  write_params(out, spec, params);
}

ParamFile load_params(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.is_open(), ErrorKind::kIoError, "cannot open " + path.string());
  return read_params(in);
}

}  // namespace idlab
