#pragma once

// Resonance condition D_N(z) = 0 for a delta system, three ways:
//   direct_determinant  the 2N x 2N matching-condition matrix (oracle)
//   closed_form         D~_N = 1 + sum_n (-1)^n sum_{I_n^N} R_{j1}^{k1} ... R_{jn}^{kn}
//   truncated_form      1 + sum_{j<k} C_j C_k h^(b_j+b_k) / (4 z^2) w^(2(x_k-x_j))
// with D_N = c * D~_N and c = -prod_j w^(-2 x_j) (2iz - C_j h^b_j).

#include <cstddef>
#include <vector>

#include "resonance/model.hpp"

namespace resonance {

/// One element of I_n^N: pairs (j_1,k_1), ..., (j_n,k_n) with
/// j_1 < k_1 < j_2 < k_2 < ... (0-based).
struct PairIndexTuple {
  std::vector<PairIndex> pairs;

  friend bool operator==(const PairIndexTuple&, const PairIndexTuple&) = default;
};

/// I_n^N in lexicographic order.
std::vector<PairIndexTuple> enumerate_index_sets(std::size_t n_deltas, std::size_t n);
/// Union of I_n^N over n = 1 .. floor(N/2), grouped by n.
std::vector<PairIndexTuple> enumerate_index_sets(std::size_t n_deltas);

/// Largest N for which the closed form enumerates I_n^N (2^(N-1) - 1 tuples).
inline constexpr std::size_t kMaxEnumeratedDeltas = 12;

/// value * exp(scale_log + i scale_arg).
struct DeterminantValue {
  Complex value;
  double scale_log = 0.0;
  double scale_arg = 0.0;

  /// log of the full quantity; -inf real part when value == 0.
  Complex log() const;
};

/// LU with partial pivoting on the column-equilibrated matrix. The scale
/// fields stay zero unless the determinant leaves double range, in which case
/// they carry the factored-out magnitude.
DeterminantValue direct_determinant(const DeltaSystem& system, Complex z);

/// log c as (log|c|, arg c) with arg in (-pi, pi].
Complex log_prefactor(const DeltaSystem& system, Complex z);

/// value = D~_N, scale = c. Throws PoleError, OverflowError.
DeterminantValue closed_form(const DeltaSystem& system, Complex z);

/// Throws PoleError for z == 0 and OverflowError past the exp guard.
Complex truncated_form(const DeltaSystem& system, Complex z);

/// direct / c, divided in log space.
Complex reduced_from_direct(const DeltaSystem& system, Complex z);

/// Closed-form evaluator with the index sets precomputed, for repeated
/// evaluation over a grid. Falls back to direct/c when N exceeds
/// kMaxEnumeratedDeltas.
class ReducedDeterminant {
 public:
  struct Evaluation {
    Complex value;
    double max_term = 0.0;  // largest |summand|, including the leading 1
    bool overflow = false;
  };

  explicit ReducedDeterminant(DeltaSystem system);

  Evaluation evaluate(Complex z) const;
  Complex operator()(Complex z) const { return evaluate(z).value; }

  const DeltaSystem& system() const { return system_; }
  std::size_t term_count() const { return tuples_.size() + 1; }

 private:
  DeltaSystem system_;
  std::vector<PairIndexTuple> tuples_;
  std::vector<double> couplings_;
  bool enumerate_ = true;
};

}  // namespace resonance
