#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nslab {

using cdouble = std::complex<double>;
using Int3 = std::array<int, 3>;
using Vec3 = std::array<double, 3>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Relative divergence tolerance for spectral velocity fields.
inline constexpr double kDivTolerance = 1e-12;

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Advective CFL violation; carries the offending values.
class CflError : public Error {
  public:
    CflError(double dt, double limit, double max_velocity)
        : Error("CFL violation: dt=" + std::to_string(dt) + " exceeds limit " +
                std::to_string(limit) + " (max velocity " + std::to_string(max_velocity) + ")"),
          dt(dt), limit(limit), max_velocity(max_velocity) {}
    double dt;
    double limit;
    double max_velocity;
};

inline double sq(double x) { return x * x; }

}  // namespace nslab
