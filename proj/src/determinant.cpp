#include "resonance/determinant.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "resonance/errors.hpp"

namespace resonance {

namespace {

constexpr Complex kI{0.0, 1.0};

void enumerate_from(std::size_t first, std::size_t n_deltas, std::size_t remaining, PairIndexTuple& current,
                    std::vector<PairIndexTuple>& out) {
  if (remaining == 0) {
    out.push_back(current);
    return;
  }
  // Each remaining pair needs two indices after `first`.
  for (std::size_t j = first; j + 2 * remaining <= n_deltas; ++j) {
    for (std::size_t k = j + 1; k + 2 * (remaining - 1) < n_deltas; ++k) {
      current.pairs.push_back({j, k});
      enumerate_from(k + 1, n_deltas, remaining - 1, current, out);
      current.pairs.pop_back();
    }
  }
}

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

void require_nonempty(const DeltaSystem& system) {
  if (system.deltas.empty()) throw ConfigError("determinant needs at least one delta");
}

// i z lambda / h, the exponent of omega^lambda.
Complex omega_exponent(const DeltaSystem& system, Complex z, double lambda) {
  return kI * z * lambda / system.h;
}

}  // namespace

std::vector<PairIndexTuple> enumerate_index_sets(std::size_t n_deltas, std::size_t n) {
  std::vector<PairIndexTuple> out;
  if (n == 0 || 2 * n > n_deltas) return out;
  PairIndexTuple current;
  enumerate_from(0, n_deltas, n, current, out);
  return out;
}

std::vector<PairIndexTuple> enumerate_index_sets(std::size_t n_deltas) {
  std::vector<PairIndexTuple> out;
  for (std::size_t n = 1; 2 * n <= n_deltas; ++n) {
    auto level = enumerate_index_sets(n_deltas, n);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

Complex DeterminantValue::log() const {
  if (value == Complex(0.0, 0.0)) return {-std::numeric_limits<double>::infinity(), 0.0};
  return std::log(value) + Complex(scale_log, scale_arg);
}

DeterminantValue direct_determinant(const DeltaSystem& system, Complex z) {
  require_nonempty(system);
  const std::size_t n = system.size();
  const std::size_t dim = 2 * n;

  // Entries are coef * exp(expo); kept apart so each column can be rescaled
  // before forming doubles.
  struct Entry {
    Complex coef{0.0, 0.0};
    Complex expo{0.0, 0.0};
    bool set = false;
  };
  std::vector<Entry> entries(dim * dim);
  auto put = [&](std::size_t row, std::size_t col, Complex coef, Complex expo) {
    entries[row * dim + col] = {coef, expo, true};
  };

  const Complex iz = kI * z;
  for (std::size_t d = 1; d <= n; ++d) {
    const std::size_t r_cont = 2 * (d - 1);
    const std::size_t r_jump = r_cont + 1;
    const double cj = system.coupling(d - 1);
    const Complex w = omega_exponent(system, z, -2.0 * system.deltas[d - 1].x);

    // v_{d-1}^- ; column 0 for v_0^-.
    const std::size_t col_left_minus = d == 1 ? 0 : 2 * (d - 1) - 1;
    put(r_cont, col_left_minus, 1.0, w);
    put(r_jump, col_left_minus, -iz, w);
    // v_{d-1}^+ ; v_0^+ = 0.
    if (d >= 2) {
      put(r_cont, 2 * (d - 1), 1.0, 0.0);
      put(r_jump, 2 * (d - 1), iz, 0.0);
    }
    // v_d^- ; v_N^- = 0.
    if (d < n) {
      put(r_cont, 2 * d - 1, -1.0, w);
      put(r_jump, 2 * d - 1, iz + cj, w);
    }
    // v_d^+ ; column 2N-1 for v_N^+.
    const std::size_t col_right_plus = d < n ? 2 * d : 2 * n - 1;
    put(r_cont, col_right_plus, -1.0, 0.0);
    put(r_jump, col_right_plus, -iz + cj, 0.0);
  }

  std::vector<Complex> a(dim * dim, Complex(0.0, 0.0));
  double total_scale = 0.0;
  for (std::size_t col = 0; col < dim; ++col) {
    double scale = -std::numeric_limits<double>::infinity();
    for (std::size_t row = 0; row < dim; ++row) {
      const Entry& e = entries[row * dim + col];
      if (e.set && e.coef != Complex(0.0, 0.0)) scale = std::max(scale, std::log(std::abs(e.coef)) + e.expo.real());
    }
    if (!std::isfinite(scale)) return {Complex(0.0, 0.0), 0.0, 0.0};
    total_scale += scale;
    for (std::size_t row = 0; row < dim; ++row) {
      const Entry& e = entries[row * dim + col];
      if (e.set) a[row * dim + col] = e.coef * std::exp(e.expo - scale);
    }
  }

  Complex det_mantissa(1.0, 0.0);
  double det_log = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    std::size_t pivot = k;
    for (std::size_t row = k + 1; row < dim; ++row) {
      if (std::abs(a[row * dim + k]) > std::abs(a[pivot * dim + k])) pivot = row;
    }
    const Complex p = a[pivot * dim + k];
    if (p == Complex(0.0, 0.0)) return {Complex(0.0, 0.0), 0.0, 0.0};
    if (pivot != k) {
      for (std::size_t col = 0; col < dim; ++col) std::swap(a[k * dim + col], a[pivot * dim + col]);
      det_mantissa = -det_mantissa;
    }
    det_log += std::log(std::abs(p));
    det_mantissa *= p / std::abs(p);
    for (std::size_t row = k + 1; row < dim; ++row) {
      const Complex factor = a[row * dim + k] / p;
      if (factor == Complex(0.0, 0.0)) continue;
      for (std::size_t col = k + 1; col < dim; ++col) a[row * dim + col] -= factor * a[k * dim + col];
    }
  }

  const double log_mag = det_log + total_scale;
  if (std::abs(log_mag) < kOverflowExponent) return {det_mantissa * std::exp(log_mag), 0.0, 0.0};
  return {det_mantissa, log_mag, 0.0};
}

Complex log_prefactor(const DeltaSystem& system, Complex z) {
  require_nonempty(system);
  Complex acc(0.0, std::numbers::pi);
  for (std::size_t j = 0; j < system.size(); ++j) {
    const Complex denom = 2.0 * kI * z - system.coupling(j);
    if (std::abs(denom) < kPoleTolerance) {
      throw PoleError("z is on the pole of R/T for delta " + std::to_string(j + 1));
    }
    acc += omega_exponent(system, z, -2.0 * system.deltas[j].x) + std::log(denom);
  }
  return {acc.real(), wrap_angle(acc.imag())};
}

DeterminantValue closed_form(const DeltaSystem& system, Complex z) {
  const auto eval = ReducedDeterminant(system).evaluate(z);
  if (eval.overflow) throw OverflowError("closed form overflowed the exponential guard");
  const Complex log_c = log_prefactor(system, z);
  return {eval.value, log_c.real(), log_c.imag()};
}

Complex truncated_form(const DeltaSystem& system, Complex z) {
  require_nonempty(system);
  if (std::abs(z) < kPoleTolerance) throw PoleError("truncated form is singular at z = 0");
  Complex sum(1.0, 0.0);
  for (std::size_t j = 0; j < system.size(); ++j) {
    for (std::size_t k = j + 1; k < system.size(); ++k) {
      const auto w = omega_pow(system, z, 2.0 * (system.deltas[k].x - system.deltas[j].x));
      if (!w) throw OverflowError("truncated form overflowed the exponential guard");
      sum += system.coupling(j) * system.coupling(k) / (4.0 * z * z) * *w;
    }
  }
  return sum;
}

Complex reduced_from_direct(const DeltaSystem& system, Complex z) {
  const DeterminantValue direct = direct_determinant(system, z);
  if (direct.value == Complex(0.0, 0.0)) return {0.0, 0.0};
  return std::exp(direct.log() - log_prefactor(system, z));
}

ReducedDeterminant::ReducedDeterminant(DeltaSystem system) : system_(std::move(system)) {
  require_nonempty(system_);
  enumerate_ = system_.size() <= kMaxEnumeratedDeltas;
  if (enumerate_) tuples_ = enumerate_index_sets(system_.size());
  couplings_.reserve(system_.size());
  for (std::size_t j = 0; j < system_.size(); ++j) couplings_.push_back(system_.coupling(j));
}

ReducedDeterminant::Evaluation ReducedDeterminant::evaluate(Complex z) const {
  const std::size_t n = system_.size();
  if (!enumerate_) {
    const Complex v = reduced_from_direct(system_, z);
    return {v, std::max(1.0, std::abs(v)), !std::isfinite(std::abs(v))};
  }

  const Complex two_iz = 2.0 * kI * z;
  std::vector<Complex> r(n), s(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Complex denom = two_iz - couplings_[j];
    if (std::abs(denom) < kPoleTolerance) {
      throw PoleError("z is on the pole of R/T for delta " + std::to_string(j + 1));
    }
    r[j] = couplings_[j] / denom;
    s[j] = (two_iz + couplings_[j]) / denom;  // T_j + R_j
  }

  // rjk[j*n+k] = R_j (prod_{j<i<k} (T_i + R_i)) R_k omega^(2(x_k - x_j))
  std::vector<Complex> rjk(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex chain = r[j];
    for (std::size_t k = j + 1; k < n; ++k) {
      const auto w = omega_pow(system_, z, 2.0 * (system_.deltas[k].x - system_.deltas[j].x));
      if (!w) return {Complex(0.0, 0.0), 0.0, true};
      rjk[j * n + k] = chain * r[k] * *w;
      chain *= s[k];
    }
  }

  Evaluation out{Complex(1.0, 0.0), 1.0, false};
  for (const auto& tuple : tuples_) {
    Complex term = tuple.pairs.size() % 2 == 0 ? Complex(1.0, 0.0) : Complex(-1.0, 0.0);
    for (const auto& p : tuple.pairs) term *= rjk[p.j * n + p.k];
    out.value += term;
    out.max_term = std::max(out.max_term, std::abs(term));
  }
  if (!std::isfinite(out.value.real()) || !std::isfinite(out.value.imag())) out.overflow = true;
  return out;
}

}  // namespace resonance
