#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "srtlab/criteria.hpp"
#include "srtlab/lattice_law.hpp"
#include "srtlab/renewal.hpp"

namespace srtlab {

/// SRT constant sin(pi alpha) / pi.
double const_C(double alpha);

struct BigJumpParams {
  double alpha = 0.0;
  double gamma = 0.0;  // (alpha/4)(1 - frac(1/alpha))
  int kappa = 0;       // floor(1/alpha) - 1
  double J = 0.0;      // (kappa + 1)(1 - 2 gamma) - 1/alpha

  /// xi = a_n^gamma x^(1 - gamma).
  double xi(double a_n, double x) const;
};

BigJumpParams big_jump_params(double alpha);

/// u_mass / (C h A(x)/x) from raw inputs.
double srt_ratio_raw(double u_mass, double A_over_x, double h, double alpha);

/// U(x + I) / (C h A(x) / x).
double srt_ratio(const LatticeLaw& F, const RenewalTable& table, double x);

/// U([0, x]) / ((C/alpha) A(x)).
double integrated_ratio(const LatticeLaw& F, const RenewalTable& table, double x);

/// alpha times the integral of y^-alpha phi(y) over [delta, 1/delta].
double riemann_C_delta(double alpha, double delta);

/// [sum over n <= A(delta x) of n^ell P(S_n in x + I, at least m big jumps)] / (A(x)^(ell+1) / x).
double lemma41_probe(const LatticeLaw& F, double delta, double x, int ell, int m);

/// [sum over n <= A(delta x) of n^ell sup_z P(S_n in z + I, no big jump)] / (A(x)^(ell+1) / x),
/// with z on the lattice in [delta^(gamma/2) x, 4 x] and big jumps measured against xi_{n,x}.
double lemma42_probe(const LatticeLaw& F, double delta, double x, int ell);

struct Lemma51Fit {
  std::vector<std::int64_t> n;
  std::vector<double> scaled;  // a_n P(S_n in z + I)
  double slope = 0.0;          // of ln scaled against n / A(z)
  double r_squared = 0.0;
  double c = 0.0;              // -slope / 2
  double C = 0.0;              // smallest constant at this c
  bool degenerate = false;
};

Lemma51Fit lemma51_probe(const LatticeLaw& F, std::span<const std::int64_t> n_list, double z);

struct NecessityReport {
  double w = 0.0;
  std::vector<double> x;
  /// series[m-1][j] = (x_j / A(x_j)) P(S_m in (x_j - w, x_j]), m = 1..m_max.
  std::vector<std::vector<double>> series;
  std::vector<Trend> trend;
};

NecessityReport necessity_probe(const LatticeLaw& F, std::span<const double> x_list, double w, int m_max = 1);

}  // namespace srtlab
