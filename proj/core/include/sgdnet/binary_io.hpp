#pragma once

#include "sgdnet/errors.hpp"
#include "sgdnet/matrix.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>

namespace sgdnet::binary {

template <typename T>
void write_le(std::ostream& out, T value) {
    static_assert(std::is_arithmetic_v<T>);
    std::array<char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    out.write(bytes.data(), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
    static_assert(std::is_arithmetic_v<T>);
    std::array<char, sizeof(T)> bytes;
    if (!in.read(bytes.data(), sizeof(T))) throw DataError("unexpected end of file");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

inline void write_magic(std::ostream& out, const char (&magic)[5]) { out.write(magic, 4); }

inline void expect_magic(std::istream& in, const char (&magic)[5], const std::string& what) {
    char got[4] = {};
    if (!in.read(got, 4) || std::memcmp(got, magic, 4) != 0) {
        throw DataError(what + ": bad magic (expected '" + std::string(magic, 4) + "')");
    }
}

/// Row-major doubles, no shape prefix.
inline void write_matrix(std::ostream& out, const Matrix& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) write_le<double>(out, m.data()[i]);
}

inline Matrix read_matrix(std::istream& in, Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    if constexpr (std::endian::native == std::endian::little) {
        const auto bytes = static_cast<std::streamsize>(m.size() * sizeof(double));
        if (!in.read(reinterpret_cast<char*>(m.data()), bytes)) {
            throw DataError("unexpected end of file in matrix payload");
        }
    } else {
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = read_le<double>(in);
    }
    return m;
}

}  // namespace sgdnet::binary
