#pragma once

#include <vector>

#include "spinmf/partitions.hpp"

namespace spinmf {

enum class ModelKind { AB, WBQ, WBP, MB, BILBIQ };

// one interaction term of the multi-block Hamiltonian: cycle type gamma,
// per-block couplings a_k^gamma and the all-blocks coupling c^gamma
struct GammaTerm {
    CycleType gamma;
    std::vector<double> a;  // one entry per block; may be empty (all zero)
    double c = 0.0;
};

// A concrete finite-n model on (C^r)^{tensor n}.
//   AB    : transposition couplings (a within A, b within B, c across)
//   WBQ   : a,b transpositions, c times Q across the wall
//   WBP   : a,b transpositions, c times P across the wall
//   MB    : multi-block class-average model (blocks + terms)
//   BILBIQ: bilinear-biquadratic cross couplings J1*T + (J2-J1)*P (r=3 use)
struct ModelInstance {
    int r = 2;
    int n = 1;
    int m = 0;  // block-A size for two-block kinds
    ModelKind kind = ModelKind::AB;
    double a = 0.0, b = 0.0, c = 0.0;  // two-block couplings (or J1,J2 for BILBIQ in a,b)

    std::vector<int> block_sizes;  // MB only; sums to n
    std::vector<GammaTerm> terms;  // MB only

    long long dim() const {
        long long d = 1;
        for (int i = 0; i < n; ++i) d *= r;
        return d;
    }
};

// thermodynamic parameter point of a two-block model
struct TwoBlockParams {
    double a = 0.0, b = 0.0, c = 0.0;
    double rho = 0.5;
    int r = 2;
    double beta = 1.0;
};

// limiting multi-block model: block fractions rho_k and the Gamma table
struct MultiBlockParams {
    std::vector<double> rho;
    int r = 2;
    double beta = 1.0;
    std::vector<GammaTerm> terms;
};

}  // namespace spinmf
