#pragma once

#include <array>
#include <complex>
#include <numbers>

namespace optocirc {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Wrap an angle into [0, 2π).
double normalize_angle(double angle);

// Signal ports of the three-mode model, in matrix order.
enum class Port { a2 = 0, b1 = 1, b2 = 2 };

inline constexpr std::array<const char*, 3> port_names{"a2", "b1", "b2"};

// Ordered (output, input) pair; T[out][in].
struct PortPair {
    Port out;
    Port in;

    friend bool operator==(const PortPair&, const PortPair&) = default;
};

inline constexpr int index(Port p) { return static_cast<int>(p); }

} // namespace optocirc
