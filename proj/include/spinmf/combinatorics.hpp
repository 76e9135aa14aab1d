#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "spinmf/partitions.hpp"

namespace spinmf {

using BigInt = boost::multiprecision::cpp_int;

// sum of box contents (column - row) over the Young diagram:
// ct(lambda) = sum_j [ lambda_j(lambda_j+1)/2 - j*lambda_j ]
long long content(const Partition& lambda);

// dimension of the irreducible polynomial GL_r module with highest weight
// lambda:  prod_{i<j} (lambda_i - i - lambda_j + j)/(j - i).  Exact integer.
BigInt dim_gl(const Partition& lambda, int r);

// dimension of the rational GL_r module with highest weight [lambda,mu]
BigInt dim_gl_rational(const Partition& lambda, const Partition& mu, int r);

// dimension of the Specht module V_mu via the shifted-parts determinant form
// |mu|!/(m_1!...m_r!) prod_{i<j}(m_i - m_j),  m_i = mu_i + r - i
BigInt dim_specht(const Partition& mu);

// same number through the hook-length product; kept as an independent route
BigInt dim_specht_hook(const Partition& mu);

// Littlewood-Richardson coefficient c^lambda_{mu,nu}: number of
// lattice-word semistandard skew tableaux of shape lambda/mu, content nu.
long long lr_coeff(const Partition& lambda, const Partition& mu, const Partition& nu);

// iterated LR contraction c^lambda_{mu(1),...,mu(p)}
long long multi_lr_coeff(const Partition& lambda, const std::vector<Partition>& blocks);

// Horn compatibility: Hermitian X,Y with spectra mu,nu and X+Y with
// spectrum lambda exist  <=>  c^lambda_{mu,nu} > 0
bool horn_positive(const Partition& lambda, const Partition& mu, const Partition& nu, int r);

// walled-Brauer branching multiplicity b^{n,m,r}_{(lambda,mu),(pi,tau)},
// computed as the LR coefficient c^{[lambda,mu]+tau1}_{pi,[0,tau]+tau1}
long long wb_branch(const Partition& lambda, const Partition& mu,
                    const Partition& pi, const Partition& tau, int r);

// symmetric-group character chi_mu(gamma); gamma lists the nontrivial cycle
// lengths, fixed points are appended internally so |gamma_full| = |mu|
long long mn_character(const Partition& mu, const CycleType& gamma);

// rational GL_r character at eigenvalues x: det[x_i^{w_j+r-j}]/Vandermonde.
// Near-coincident eigenvalues (within conf_tol) are merged and evaluated
// through the confluent (derivative-row) determinant, exact in the limit.
std::complex<double> gl_character(const SignedWeight& w,
                                  const std::vector<std::complex<double>>& eigenvalues,
                                  double conf_tol = 1e-8);

// |C_n^gamma| = n!/z_gamma, fixed points included in the centralizer order
BigInt conjugacy_class_size(const CycleType& gamma, int n);

double to_double(const BigInt& v);

}  // namespace spinmf
