#pragma once

#include <complex>
#include <vector>

#include "spinmf/variational.hpp"

namespace spinmf {

// R(w;z) = det[e^{w_i z_j}] prod_{i<j} (j-i)/((w_i-w_j)(z_i-z_j)).
// Arguments coinciding within conf_tol are merged and handled through
// divided-difference (derivative) rows/columns, exact in the limit.
std::complex<double> R_function(const std::vector<std::complex<double>>& w,
                                const std::vector<double>& z, double conf_tol = 1e-8);

// limiting correlation <exp{(1/n) sum W_i}> at the maximizer of F;
// defined only when the canonical maximizer is unique
struct CorrelationResult {
    bool unique = false;
    int multiplicity = 1;
    double value = 0.0;               // set when unique
    std::vector<double> candidates;   // R per maximizer otherwise
};
CorrelationResult limit_correlation(const TwoBlockParams& p, ModelKind kind,
                                    const std::vector<double>& w);

enum class Side { right, left };

// one-sided magnetisation derivatives at h = 0:
// right = max over maximizers of sum z_i w_i, left = min of sum z_i w_{r+1-i},
// z = spectrum of x* + y* (AB) or x* - y* (WB), re-sorted decreasing
double magnetisation(const TwoBlockParams& p, ModelKind kind, const std::vector<double>& w,
                     Side side);

// Phi(beta, h): free energy with field term h * sum_i z_i w_{sigma(i)},
// sigma identity for h > 0 and the reversal for h < 0
double free_energy_with_field(const TwoBlockParams& p, ModelKind kind,
                              const std::vector<double>& w, double h);

}  // namespace spinmf
