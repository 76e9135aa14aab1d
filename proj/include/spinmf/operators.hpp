#pragma once

#include <Eigen/Dense>

#include <vector>

#include "spinmf/models.hpp"

namespace spinmf {

// Dense real-symmetric operators on (C^r)^{tensor n}.  All operators built
// here are real; basis states are mixed-radix digit strings with site 1 in
// the least significant position.
using DenseOperator = Eigen::MatrixXd;

// refuse dimensions beyond desk scale
void check_dims(int n, int r);

// tensor-slot transposition T_{i,j}; 1-based sites, i < j
DenseOperator build_transposition(int i, int j, int n, int r);

// Q_{i,j}: <a1 a2|Q|a3 a4> = delta_{a1,a2} delta_{a3,a4} on slots i,j
DenseOperator build_Q(int i, int j, int n, int r);

// P_{i,j}: r times the singlet projection,
// <a1 a2|P|a3 a4> = (-1)^{a1-a3} delta_{a1,-a2} delta_{a3,-a4},
// with the basis indexed by a in {-S..S}, S = (r-1)/2
DenseOperator build_P(int i, int j, int n, int r);

// T_sigma for an arbitrary permutation (sigma maps site k to sigma[k-1])
DenseOperator build_perm_operator(const std::vector<int>& sigma, int n, int r);

// the model Hamiltonian of an instance
DenseOperator hamiltonian(const ModelInstance& inst);

// tr exp(-beta H) by symmetric eigendecomposition
double partition_function(const DenseOperator& H, double beta);

// tr[O exp(-beta H)] / Z
double thermal_expectation(const DenseOperator& H, double beta, const DenseOperator& O);

// tr exp(-beta H + h*Field) where the field is sum_i diag(w) at every site
// (AB/MB kinds) or sum_{i<=m} diag(w) - sum_{i>m} diag(w) (WB kinds)
double magnetized_partition_function(const ModelInstance& inst, double beta,
                                     const std::vector<double>& w, double h);

// sorted spectra of the WB-Q and WB-P Hamiltonians at equal couplings must
// coincide; also checks the explicit unitaries behind the equivalence
struct EquivalenceReport {
    double spectral_gap = 0.0;      // max |sorted spec(H_Q) - sorted spec(H_P)|
    double psi_antisym_err = -1.0;  // r=3: max over k of ||(psi^-1 S^k psi)^T + psi^-1 S^k psi||
    double psi_conj_err = -1.0;     // r=3: ||(psi x psi)^-1 Q (psi x psi) - P||
    double pair_conj_err = -1.0;    // even r: ||(al x ga)^-1 Q (al x ga) - P||
};
EquivalenceReport spectra_equal_under_equivalence(const ModelInstance& q_inst,
                                                  const ModelInstance& p_inst);

}  // namespace spinmf
