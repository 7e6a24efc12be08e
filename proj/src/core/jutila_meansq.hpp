#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "divisor_arith.hpp"
#include "moments.hpp"

namespace zetalab {

struct DiffMeanSquareSpec {
  double T = 3000.0;
  double H = 3000.0;
  double U = 25.0;

  void validate() const;
};

enum class DiffMethod { Direct, Series };

// Normalisation of the series side. ForE uses the constant and phase that
// match the Voronoi-type series of E(x):
//   (1/sqrt(2 pi)) sum d(n)^2 n^{-3/2} int x^{1/2} |exp(i U sqrt(2 pi n/x)) - 1|^2 dx.
// Printed keeps the typeset form
//   (1/4pi^2) sum d(n)^2 n^{-3/2} int x^{1/2} |exp(2 pi i U sqrt(n/x)) - 1|^2 dx,
// which is the normalisation of the divisor-problem analogue for Delta(x).
enum class SeriesNormalization { ForE, Printed };

// Direct: int_T^{T+H} (E(x+U) - E(x))^2 dx from one |zeta|^2 grid of spacing
// U/m (m even, spacing within min(U/8, zero-gap rule)).
MomentResult diff_meansq_direct(const DiffMeanSquareSpec& spec, const QuadratureOptions& q);

struct JutilaSeries {
  double value = 0.0;
  std::int64_t cutoff = 0;
  std::vector<double> terms;  // term n at index n-1, each >= 0
};

// Series over n <= T/2U with the inner x-integral over [T, T+H].
// U must lie in [2, sqrt(T)/2]; cutoff_override replaces floor(T/2U).
JutilaSeries diff_meansq_series_terms(const DiffMeanSquareSpec& spec, const DivisorTable& table,
                                      std::optional<std::int64_t> cutoff_override = {},
                                      SeriesNormalization norm = SeriesNormalization::ForE);

MomentResult diff_meansq(const DiffMeanSquareSpec& spec, DiffMethod method,
                         const QuadratureOptions& q, const DivisorTable* table,
                         SeriesNormalization norm = SeriesNormalization::ForE);

// direct(T, T, U) / (T U log^3(sqrt(T)/U)), 2 <= U < sqrt(T).
double asymp_ratio(double T, double U, const QuadratureOptions& q);

// direct(T, H, U) / (H U log^3(sqrt(T)/U)).
double asymp_ratio_subrange(double T, double H, double U, const QuadratureOptions& q);

}  // namespace zetalab
