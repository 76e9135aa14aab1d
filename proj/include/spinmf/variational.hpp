#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinmf/models.hpp"
#include "spinmf/repsum.hpp"  // Exec

namespace spinmf {

// point of the constrained product simplex Omega:
// x_i, y_i >= 0, sum x = rho, sum y = 1 - rho
struct ProfilePoint {
    std::vector<double> x, y;
};

ProfilePoint omega0(double rho, int r);
ProfilePoint omega1(double rho, int r);  // the second tcond maximizer

// canonical order: x decreasing; y decreasing when c > 0, increasing when c < 0
void canonical_order(ProfilePoint& w, double c);

// F(omega) = sum_i [ -x_i log x_i - y_i log y_i + (beta/2)(a x_i^2 + b y_i^2 + 2c x_i y_i) ]
double F_value(const ProfilePoint& w, const TwoBlockParams& p);

enum class MaximizeMethod { closed_form_candidate, numeric };

struct MaximizerReport {
    double value = 0.0;
    std::vector<ProfilePoint> points;  // canonical, deduplicated, all within 1e-9 of value
    bool at_omega0 = false;
    MaximizeMethod method = MaximizeMethod::numeric;
    bool converged = true;
    double kkt_residual = 0.0;
};

// global maximizer set of F over Omega
MaximizerReport maximize_F(const TwoBlockParams& p, Exec exec = Exec::parallel);

struct FreeEnergyResult {
    double value = 0.0;         // max F (paper normalization)
    double z_comparable = 0.0;  // value + rho log rho + rho' log rho', comparable to (1/n) log Z_n
    MaximizerReport report;
};

// Theorems FE-AB / FE-WB give the same value; the WB evaluation goes through
// the (a+c, b+c, -c z^2) form of the functional as an algebraic cross-check
FreeEnergyResult free_energy(const TwoBlockParams& p, ModelKind kind = ModelKind::AB,
                             Exec exec = Exec::parallel);

// F(omega) - F(omega0) = beta*E + H with H <= 0;
// E evaluated through the pair-difference identity (1/r) sum_{i<j} Q(xi-xj, yi-yj)
struct EnergyEntropy {
    double energy = 0.0;
    double entropy = 0.0;
};
EnergyEntropy energy_entropy_split(const ProfilePoint& w, const TwoBlockParams& p);

// threshold of the perturbation lemma; equals the r=2 critical temperature
double gamma_value(double a, double b, double c, double rho);

struct BetaCritResult {
    std::optional<double> value;
    std::string method;  // "none" | "closed-form-r2" | "closed-form-tcond" | "bisection"
    std::string reason;  // set when value is empty
};
BetaCritResult beta_crit(double a, double b, double c, double rho, int r,
                         bool force_numeric = false);

struct MultiBlockResult {
    double value = 0.0;
    std::vector<std::vector<double>> spectra;  // p x r, common index sorted by total
    double commuting_value = 0.0;
    double refinement_gain = 0.0;  // refined minus commuting value
    bool converged = true;
};
MultiBlockResult multi_block_free_energy(const MultiBlockParams& p, Exec exec = Exec::parallel);

struct BilBiqConversion {
    ModelKind kind = ModelKind::AB;
    double a = 0.0, b = 0.0, c = 0.0;  // two-block couplings when not mixed
    double J1 = 0.0, J2 = 0.0;         // retained for the mixed dense route
    bool mixed = false;
    double constant = 0.0;  // H_model - constant * m(n-m)/n reproduces the spin Hamiltonian
};
BilBiqConversion bilinear_biquadratic_convert(double J1, double J2);

}  // namespace spinmf
