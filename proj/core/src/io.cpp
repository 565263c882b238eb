// Copyright 2026 The loadplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "loadplan/io.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "loadplan/errors.hpp"

namespace loadplan {
namespace le {
namespace {

template <typename U>
void put_uint(std::ostream& out, U v) {
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t k = 0; k < sizeof(U); ++k) {
    bytes[k] = static_cast<char>((v >> (8 * k)) & 0xffu);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename U>
U get_uint(std::istream& in) {
  std::array<unsigned char, sizeof(U)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw FormatError("unexpected end of binary stream");
  U v = 0;
  for (std::size_t k = 0; k < sizeof(U); ++k) {
    v |= static_cast<U>(bytes[k]) << (8 * k);
  }
  return v;
}

}  // namespace

void put_u16(std::ostream& out, std::uint16_t v) { put_uint(out, v); }
void put_u32(std::ostream& out, std::uint32_t v) { put_uint(out, v); }
void put_f32(std::ostream& out, float v) {
  put_uint(out, std::bit_cast<std::uint32_t>(v));
}
void put_f64(std::ostream& out, double v) {
  put_uint(out, std::bit_cast<std::uint64_t>(v));
}
std::uint16_t get_u16(std::istream& in) { return get_uint<std::uint16_t>(in); }
std::uint32_t get_u32(std::istream& in) { return get_uint<std::uint32_t>(in); }
float get_f32(std::istream& in) {
  return std::bit_cast<float>(get_uint<std::uint32_t>(in));
}
double get_f64(std::istream& in) {
  return std::bit_cast<double>(get_uint<std::uint64_t>(in));
}

}  // namespace le

void write_hfld(std::ostream& out, const HeightField& field) {
  out.write(kHeightFieldMagic.data(), kHeightFieldMagic.size());
  le::put_u16(out, kHeightFieldVersion);
  le::put_u32(out, static_cast<std::uint32_t>(field.nx()));
  le::put_u32(out, static_cast<std::uint32_t>(field.ny()));
  le::put_f64(out, field.cell());
  le::put_f64(out, field.origin_x());
  le::put_f64(out, field.origin_y());
  for (double h : field.heights()) le::put_f32(out, static_cast<float>(h));
}

HeightField read_hfld(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || std::string_view(magic.data(), magic.size()) != kHeightFieldMagic) {
    throw FormatError("not an HFLD heightfield (bad magic)");
  }
  const std::uint16_t version = le::get_u16(in);
  if (version != kHeightFieldVersion) {
    throw FormatError("unsupported HFLD version " + std::to_string(version));
  }
  const std::uint32_t nx = le::get_u32(in);
  const std::uint32_t ny = le::get_u32(in);
  if (nx < 2 || ny < 2 || nx > 100000 || ny > 100000) {
    throw FormatError("HFLD grid dimensions out of range");
  }
  const double cell = le::get_f64(in);
  const double ox = le::get_f64(in);
  const double oy = le::get_f64(in);
  std::vector<double> heights(static_cast<std::size_t>(nx) * ny);
  for (double& h : heights) h = le::get_f32(in);
  return HeightField(static_cast<int>(nx), static_cast<int>(ny), cell, ox, oy,
                     std::move(heights));
}

void save_hfld(const std::filesystem::path& path, const HeightField& field) {
  std::ostringstream os(std::ios::binary);
  write_hfld(os, field);
  write_file_atomic(path, os.str());
}

HeightField load_hfld(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return read_hfld(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_heightfield_csv(std::ostream& out, const HeightField& field) {
  std::array<char, 32> buf{};
  for (int j = 0; j < field.ny(); ++j) {
    for (int i = 0; i < field.nx(); ++i) {
      if (i > 0) out << ',';
      std::snprintf(buf.data(), buf.size(), "%.17g", field(i, j));
      out << buf.data();
    }
    out << '\n';
  }
}

HeightField read_heightfield_csv(std::istream& in, double cell,
                                 double origin_x, double origin_y) {
  std::vector<double> heights;
  std::string line;
  int nx = -1;
  int ny = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::stringstream row(line);
    std::string token;
    int count = 0;
    while (std::getline(row, token, ',')) {
      try {
        heights.push_back(std::stod(token));
      } catch (const std::exception&) {
        throw FormatError("CSV row " + std::to_string(ny) +
                          ": bad number '" + token + "'");
      }
      ++count;
    }
    if (nx < 0) nx = count;
    if (count != nx) {
      throw FormatError("CSV row " + std::to_string(ny) + " has " +
                        std::to_string(count) + " values, expected " +
                        std::to_string(nx));
    }
    ++ny;
  }
  return HeightField(nx, ny, cell, origin_x, origin_y, std::move(heights));
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot rename into " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace loadplan
