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

/// \file
/// \brief File formats: HFLD heightfields, CSV heightfields, and atomic
/// file writes shared by every emitter.

#ifndef LOADPLAN_IO_HPP_
#define LOADPLAN_IO_HPP_

#include <filesystem>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "loadplan/heightfield.hpp"

namespace loadplan {

/// HFLD layout, little-endian: "HFLD", u16 version = 1, u32 nx, u32 ny,
/// f64 cell, f64 origin_x, f64 origin_y, then nx*ny f32 heights row-major.
inline constexpr std::string_view kHeightFieldMagic = "HFLD";
inline constexpr std::uint16_t kHeightFieldVersion = 1;

void write_hfld(std::ostream& out, const HeightField& field);
HeightField read_hfld(std::istream& in);

void save_hfld(const std::filesystem::path& path, const HeightField& field);
HeightField load_hfld(const std::filesystem::path& path);

/// ny lines of nx comma-separated heights; row j = 0 first. Grid geometry
/// is not stored and must be supplied on import.
void write_heightfield_csv(std::ostream& out, const HeightField& field);
HeightField read_heightfield_csv(std::istream& in, double cell,
                                 double origin_x, double origin_y);

/// Writes via a sibling temp file and rename so readers never observe a
/// partial file. Throws Error with the path on failure.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents);

/// Reads a whole file; throws Error naming the path on failure.
std::string read_file(const std::filesystem::path& path);

namespace le {
void put_u16(std::ostream& out, std::uint16_t v);
void put_u32(std::ostream& out, std::uint32_t v);
void put_f32(std::ostream& out, float v);
void put_f64(std::ostream& out, double v);
std::uint16_t get_u16(std::istream& in);
std::uint32_t get_u32(std::istream& in);
float get_f32(std::istream& in);
double get_f64(std::istream& in);
}  // namespace le

}  // namespace loadplan

#endif  // LOADPLAN_IO_HPP_
