#pragma once

// Binary field dumps.
//
//   complex: "RGS1" | u64 n | f64 L | n*n (re, im) f64 pairs
//   real:    "RGR1" | u64 n | f64 L | n*n f64
//
// All numbers little-endian, nodes row-major with x1 fastest.

#include "rgs/grid.hpp"

#include <filesystem>
#include <iosfwd>

namespace rgs {

void write_field(std::ostream& os, const ComplexField& f);
void write_field(std::ostream& os, const RealField& f);
ComplexField read_complex_field(std::istream& is);
RealField read_real_field(std::istream& is);

void save_field(const std::filesystem::path& path, const ComplexField& f);
void save_field(const std::filesystem::path& path, const RealField& f);
ComplexField load_complex_field(const std::filesystem::path& path);
RealField load_real_field(const std::filesystem::path& path);

} // namespace rgs
