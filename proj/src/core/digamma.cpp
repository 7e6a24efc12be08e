#include "digamma.hpp"

#include <array>
#include <cmath>

#include "error.hpp"

namespace zetalab {

std::complex<double> digamma(std::complex<double> z) {
  require(z.real() > 0.0, ErrorCode::DomainError, "digamma implemented for Re z > 0");
  std::complex<double> shift = 0.0;
  while (std::abs(z) < 10.0) {
    shift -= 1.0 / z;
    z += 1.0;
  }
  // B_{2k} / (2k) for k = 1..8
  static constexpr std::array<double, 8> c = {
      1.0 / 12.0,          -1.0 / 120.0,     1.0 / 252.0,       -1.0 / 240.0,
      1.0 / 132.0,         -691.0 / 32760.0, 1.0 / 12.0,        -3617.0 / 8160.0,
  };
  const std::complex<double> inv2 = 1.0 / (z * z);
  std::complex<double> series = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) series = (series + c[k]) * inv2;
  return shift + std::log(z) - 0.5 / z - series;
}

}  // namespace zetalab
