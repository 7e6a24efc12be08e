#pragma once

namespace zetalab::constants {

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double two_pi = 6.28318530717958647692528676655900577;
inline constexpr double log_two_pi = 1.83787706640934548356065947281123527;
inline constexpr double sqrt_pi = 1.77245385090551602729816748334114518;
inline constexpr double sqrt_two = 1.41421356237309504880168872420969808;
inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;
// 2*gamma - 1, the constant of the Dirichlet divisor main term.
inline constexpr double two_gamma_minus_one = 0.15443132980306572121302418016480486;
inline constexpr long double two_gamma_minus_one_l = 0.15443132980306572121302418016480486L;

}  // namespace zetalab::constants
