#pragma once

#include <cstdint>

namespace zetalab {

struct CountQuery3 {
  std::int64_t M = 1;
  std::int64_t Mp = 1;  // M'
  double delta = 1e-3;
  double c_bound = 1.0;

  void validate() const;
};

struct CountQuery4 {
  std::int64_t N = 1;
  double delta = 1e-3;
  int k_root = 2;
  double c_bound = 1.0;

  void validate() const;
};

struct CountReport {
  std::int64_t count = 0;
  double bound_value = 0.0;
  double ratio = 0.0;
};

// Triples M < m <= 2M, M' < n <= 2M', k >= 1 with |sqrt m + sqrt n - sqrt k| <= delta sqrt M.
// bound_value = c_bound log(M+2) (M^2 M' delta + sqrt(M M')).
CountReport count_lemma3(const CountQuery3& q, std::int64_t max_M = 10'000);

// Exact solutions sqrt m + sqrt n = sqrt k in the same box, enumerated as
// m = a^2 d, n = b^2 d, k = (a+b)^2 d with d squarefree.
std::int64_t count_exact_sqrt_solutions(std::int64_t M, std::int64_t Mp);

// Ordered quadruples N < n_i <= 2N with
// |n1^(1/k) + n2^(1/k) - n3^(1/k) - n4^(1/k)| < delta N^(1/k).
// bound_value = c_bound log(N+2) (N^4 delta + N^2).
CountReport count_lemma4_naive(const CountQuery4& q, std::int64_t max_N = 300);
CountReport count_lemma4(const CountQuery4& q, std::int64_t max_N = 3000);

}  // namespace zetalab
