#pragma once

// Independent reference computations used only by the tests. None of these
// call into the evaluators they check.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <random>
#include <set>
#include <vector>

#include "resonance/determinant.hpp"
#include "resonance/model.hpp"
#include "resonance/rational.hpp"

namespace oracle {

using resonance::Complex;
using resonance::DeltaSystem;
using resonance::PairIndex;
using resonance::PairIndexTuple;
using resonance::Rational;

/// Every 2n-subset of {0..N-1}, read off in sorted order as consecutive pairs.
inline std::vector<PairIndexTuple> index_sets_by_subsets(std::size_t n_deltas, std::size_t n) {
  std::vector<PairIndexTuple> out;
  for (unsigned mask = 0; mask < (1u << n_deltas); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != 2 * n) continue;
    std::vector<std::size_t> picked;
    for (std::size_t i = 0; i < n_deltas; ++i) {
      if (mask & (1u << i)) picked.push_back(i);
    }
    PairIndexTuple t;
    for (std::size_t i = 0; i < picked.size(); i += 2) t.pairs.push_back({picked[i], picked[i + 1]});
    out.push_back(t);
  }
  std::sort(out.begin(), out.end(), [](const PairIndexTuple& a, const PairIndexTuple& b) {
    return std::lexicographical_compare(a.pairs.begin(), a.pairs.end(), b.pairs.begin(), b.pairs.end());
  });
  return out;
}

inline std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// R_j^k with R, T written out from their defining formulas, in long double.
struct PairFactors {
  std::vector<std::complex<long double>> r, t;
  const DeltaSystem* system;

  PairFactors(const DeltaSystem& s, Complex z) : system(&s) {
    const std::complex<long double> zz(z.real(), z.imag());
    const std::complex<long double> two_iz = std::complex<long double>(0, 2) * zz;
    for (const auto& d : s.deltas) {
      const long double c = static_cast<long double>(d.c) * std::pow(static_cast<long double>(s.h), static_cast<long double>(d.beta));
      r.push_back(c / (two_iz - c));
      t.push_back(two_iz / (two_iz - c));
    }
    z_ = zz;
  }

  std::complex<long double> rjk(std::size_t j, std::size_t k) const {
    std::complex<long double> v = r[j] * r[k];
    for (std::size_t i = j + 1; i < k; ++i) v *= t[i] + r[i];
    const long double lambda = 2.0L * (static_cast<long double>(system->deltas[k].x) - system->deltas[j].x);
    return v * std::exp(std::complex<long double>(0, 1) * z_ * lambda / static_cast<long double>(system->h));
  }

 private:
  std::complex<long double> z_;
};

/// D~_M = D~_{M-1} - sum_{m=1}^{M-1} R_{M-m}^M D~_{M-m-1}, D~_0 = D~_1 = 1
/// (1-based indices in the recurrence).
inline Complex recurrence_determinant(const DeltaSystem& system, Complex z) {
  const PairFactors f(system, z);
  const std::size_t n = system.size();
  std::vector<std::complex<long double>> d(n + 1, 1.0L);
  for (std::size_t big_m = 2; big_m <= n; ++big_m) {
    std::complex<long double> v = d[big_m - 1];
    for (std::size_t m = 1; m <= big_m - 1; ++m) v -= f.rjk(big_m - m - 1, big_m - 1) * d[big_m - m - 1];
    d[big_m] = v;
  }
  return {static_cast<double>(d[n].real()), static_cast<double>(d[n].imag())};
}

/// Number of monomials generated by the recurrence.
inline std::size_t recurrence_term_count(std::size_t n) {
  std::vector<std::size_t> t(n + 1, 1);
  for (std::size_t big_m = 2; big_m <= n; ++big_m) {
    t[big_m] = t[big_m - 1];
    for (std::size_t m = 1; m <= big_m - 1; ++m) t[big_m] += t[big_m - m - 1];
  }
  return t[n];
}

/// N = 2 root near the m-th string point: solves omega^(2l) R_1 R_2 = 1 by the
/// fixed point z = (h / 2il) (2 pi i m - log(R_1 R_2)(z)) in long double.
inline Complex n2_root(const DeltaSystem& system, long m, Complex start, int iterations = 200) {
  using C = std::complex<long double>;
  const long double h = system.h;
  const long double l = static_cast<long double>(system.deltas[1].x) - system.deltas[0].x;
  const long double c1 = system.deltas[0].c * std::pow(h, static_cast<long double>(system.deltas[0].beta));
  const long double c2 = system.deltas[1].c * std::pow(h, static_cast<long double>(system.deltas[1].beta));
  C z(start.real(), start.imag());
  const long double pi = 3.141592653589793238462643383279502884L;
  for (int it = 0; it < iterations; ++it) {
    const C two_iz = C(0, 2) * z;
    const C rr = (c1 / (two_iz - c1)) * (c2 / (two_iz - c2));
    z = (h / (C(0, 2) * l)) * (C(0, 2 * pi * m) - std::log(rr));
  }
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

/// Slopes of the lower hull from brute force: a segment PQ is a hull edge iff
/// no point lies strictly below the line through P and Q.
inline std::set<Rational> brute_force_slopes(const DeltaSystem& system) {
  std::vector<std::pair<Rational, Rational>> pts{{Rational(0), Rational(0)}};
  for (std::size_t j = 0; j < system.size(); ++j) {
    for (std::size_t k = j + 1; k < system.size(); ++k) {
      pts.push_back({2 * (system.deltas[k].x_exact - system.deltas[j].x_exact),
                     system.deltas[j].beta_exact + system.deltas[k].beta_exact});
    }
  }
  std::set<Rational> slopes;
  for (const auto& p : pts) {
    for (const auto& q : pts) {
      if (!(p.first < q.first)) continue;
      const Rational slope = (q.second - p.second) / (q.first - p.first);
      bool supporting = true;
      for (const auto& r : pts) {
        if (r.second < p.second + slope * (r.first - p.first)) {
          supporting = false;
          break;
        }
      }
      // The lower hull over lambda >= 0 only uses edges whose left end is the
      // lowest point at its lambda and which are not vertical.
      if (supporting) slopes.insert(slope);
    }
  }
  return slopes;
}

/// Random system with x on a 1/4 grid and beta on a 1/20 grid, so that exact
/// coincidences occur often enough to exercise genericity handling.
inline DeltaSystem random_system(std::mt19937_64& rng, std::size_t n, double h) {
  std::uniform_int_distribution<int> gap(1, 12);
  std::uniform_int_distribution<int> beta(1, 60);
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::bernoulli_distribution sign(0.5);
  DeltaSystem s;
  s.h = h;
  Rational x = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j) x += Rational(gap(rng), 4);
    s.deltas.push_back(resonance::DeltaBarrier::make_exact(x, Rational(beta(rng), 20), (sign(rng) ? -1 : 1) * mag(rng)));
  }
  return s;
}

/// Continuous random system: gaps in [0.2, 1.5], beta in [0.1, 3],
/// |C| in [0.3, 3] with a random sign.
inline DeltaSystem random_physical(std::mt19937_64& rng, std::size_t n, double h) {
  std::uniform_real_distribution<double> gap(0.2, 1.5), beta(0.1, 3.0), mag(0.3, 3.0);
  std::bernoulli_distribution sign(0.5);
  DeltaSystem s;
  s.h = h;
  double x = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j) x += gap(rng);
    s.deltas.push_back(resonance::DeltaBarrier::make(x, beta(rng), (sign(rng) ? -1 : 1) * mag(rng)));
  }
  return s;
}

}  // namespace oracle
