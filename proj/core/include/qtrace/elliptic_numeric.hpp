#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "qtrace/modular_group.hpp"
#include "qtrace/report.hpp"
#include "qtrace/series.hpp"

namespace qtrace {

struct Evaluation {
    Complex value;
    /// Sum of |term| over the terms of highest retained q-power.
    double tail = 0.0;
};

/// Numeric value of an exact or numeric series. The variable "q" receives
/// e^{2 pi i tau} and log q = 2 pi i tau; every other variable takes the next
/// entry of `z` in order, with principal logarithms.
Evaluation eval_at(const MultiSeries& s, const std::vector<Complex>& z, Complex tau);

/// e^{2 pi i tau}; throws DomainError unless Im tau > 0.
Complex nome(Complex tau);

/// G~_{2k+2}(tau) from sum_{l <= q_order} l^{2k+1} q^l / (1 - q^l).
Complex eisenstein_value(int k, Complex tau, int q_order = 40);
inline Complex g2_value(Complex tau, int q_order = 40) { return eisenstein_value(0, tau, q_order); }

/// Li_{-n}(w) = sum_{j=0}^{n} j! S(n+1, j+1) (w / (1 - w))^{j+1}, valid for every w != 1.
Complex polylog_neg(int n, Complex w);

/// P_m(x; q) as sum_{k=0}^{q_order} [Li_{1-m}(x q^k) - (-1)^{m-1} Li_{1-m}(q^{k+1} / x)]
/// times (2 pi i)^m / (m-1)!, m >= 1.
Complex kernel_value(int m, Complex x, Complex tau, int q_order = 40);

/// wp~_m(z; tau) for z off the lattice, through the P_m representation.
Complex wp_value(int m, Complex z, Complex tau, int q_order = 40);

/// Classical lattice sum z^{-2} + sum' [(z - w)^{-2} - w^{-2}] over w = k + l tau, |k|, |l| <= R.
Complex lattice_wp2(Complex z, Complex tau, int R);
/// lattice_wp2 at R = 20, 30, 60 with the R^{-2} and R^{-3} error terms eliminated.
Complex lattice_wp2_extrapolated(Complex z, Complex tau);

struct Sample {
    Complex z;
    Complex tau;
};

/// Parses a JSON array of {"z": [re, im], "tau": [re, im]}.
std::vector<Sample> samples_from_json(const nlohmann::json& j);
nlohmann::json samples_to_json(const std::vector<Sample>& samples);
/// Nine points with |q| <= 0.05 and 0.1 < |z| < 0.5.
std::vector<Sample> default_sample_grid();

/// m >= 2: weight-m invariance under g plus the two lattice periodicities.
/// m == 1: the two quasi-periodicity laws of wp_1 (g is not used).
CheckReport modular_covariance_check(int m, const GroupElement& g, const std::vector<Sample>& samples,
                                     double tol = 1e-8, int q_order = 40);
CheckReport quasi_periodicity_check(const std::vector<Sample>& samples, double tol = 1e-8, int q_order = 40);

/// wp_2 from the P representation against the extrapolated lattice sum.
CheckReport lattice_oracle_check(const std::vector<Sample>& samples, double tol = 1e-6, int q_order = 40);

}  // namespace qtrace
