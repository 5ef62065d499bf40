#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace voxsie {

inline constexpr double kEps0 = 8.8541878128e-12;
inline constexpr double kPi = 3.14159265358979323846;
// regularizer added to log/atan arguments of the closed-form field integrals
inline constexpr double kEpsReg = 1e-37;

enum class Axis : int { X = 0, Y = 1, Z = 2 };

inline constexpr std::array<Axis, 3> kAxes{Axis::X, Axis::Y, Axis::Z};

inline int idx(Axis a) { return static_cast<int>(a); }
inline char axis_name(Axis a) { return "xyz"[idx(a)]; }

using Index3 = std::array<int, 3>;
using Vec3 = std::array<double, 3>;

struct Dims3 {
    int nx = 0, ny = 0, nz = 0;
    int operator[](int i) const { return i == 0 ? nx : (i == 1 ? ny : nz); }
    int& operator[](int i) { return i == 0 ? nx : (i == 1 ? ny : nz); }
    std::size_t total() const {
        return static_cast<std::size_t>(nx) * ny * nz;
    }
    bool operator==(const Dims3&) const = default;
};

std::string to_string(const Dims3& d);

// Bad user input: malformed structure, bad flags, out-of-range values.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Broken internal precondition.
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

struct CacheError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace voxsie
