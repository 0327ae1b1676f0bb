#include "rgs/field_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace rgs {

namespace {

constexpr std::array<char, 4> complex_magic{'R', 'G', 'S', '1'};
constexpr std::array<char, 4> real_magic{'R', 'G', 'R', '1'};

template <class T>
void put_le(std::ostream& os, T value)
{
    std::array<char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::ranges::reverse(bytes);
    }
    os.write(bytes.data(), bytes.size());
}

template <class T>
T get_le(std::istream& is)
{
    std::array<char, sizeof(T)> bytes;
    if (!is.read(bytes.data(), bytes.size())) {
        throw std::runtime_error("truncated field dump");
    }
    if constexpr (std::endian::native == std::endian::big) {
        std::ranges::reverse(bytes);
    }
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

void write_header(std::ostream& os, const std::array<char, 4>& magic, const GridSpec& grid)
{
    os.write(magic.data(), magic.size());
    put_le<std::uint64_t>(os, grid.n());
    put_le<double>(os, grid.half_width());
}

GridSpec read_header(std::istream& is, const std::array<char, 4>& magic)
{
    std::array<char, 4> got{};
    if (!is.read(got.data(), got.size()) || got != magic) {
        throw std::runtime_error("bad field dump magic, expected " + std::string(magic.begin(), magic.end()));
    }
    const auto n = get_le<std::uint64_t>(is);
    const auto half_width = get_le<double>(is);
    return GridSpec(half_width, static_cast<std::size_t>(n));
}

} // namespace

void write_field(std::ostream& os, const ComplexField& f)
{
    write_header(os, complex_magic, f.grid());
    for (const cplx& z : f.values()) {
        put_le<double>(os, z.real());
        put_le<double>(os, z.imag());
    }
}

void write_field(std::ostream& os, const RealField& f)
{
    write_header(os, real_magic, f.grid());
    for (double x : f.values()) {
        put_le<double>(os, x);
    }
}

ComplexField read_complex_field(std::istream& is)
{
    ComplexField f(read_header(is, complex_magic));
    for (auto& z : f.values()) {
        const double re = get_le<double>(is);
        const double im = get_le<double>(is);
        z = {re, im};
    }
    return f;
}

RealField read_real_field(std::istream& is)
{
    RealField f(read_header(is, real_magic));
    for (auto& x : f.values()) {
        x = get_le<double>(is);
    }
    return f;
}

void save_field(const std::filesystem::path& path, const ComplexField& f)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    write_field(os, f);
}

void save_field(const std::filesystem::path& path, const RealField& f)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    write_field(os, f);
}

ComplexField load_complex_field(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return read_complex_field(is);
}

RealField load_real_field(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return read_real_field(is);
}

} // namespace rgs
