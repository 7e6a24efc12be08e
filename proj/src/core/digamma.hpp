#pragma once

#include <complex>

namespace zetalab {

// psi(z) = Gamma'(z)/Gamma(z) for Re z > 0. The argument is shifted upward
// until |z| >= 10 and the asymptotic series is summed there (abs. error
// below 1e-13).
std::complex<double> digamma(std::complex<double> z);

}  // namespace zetalab
