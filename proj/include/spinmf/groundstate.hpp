#pragma once

#include <string>
#include <vector>

#include "spinmf/variational.hpp"

namespace spinmf {

// zero-temperature regions of the (a,b) plane at fixed c
enum class RegionTag {
    // c > 0
    D,
    BoundaryD,
    E1,
    E2,
    F,
    // c < 0 (D/BoundaryD shared)
    A,
    BoundaryAEdge,
    Bk,
    Ck,
    PCorner,
    BBBoundary,
    BCBoundary,
};

std::string region_name(RegionTag tag, int k = 0);

struct GroundClassification {
    RegionTag tag = RegionTag::D;
    int k = 0;  // index for Bk/Ck/PCorner/BBBoundary/BCBoundary
    double max_g = 0.0;
    std::vector<ProfilePoint> maximizers;
    std::string family;  // constraint description on infinite-family boundaries
};

// G(omega) = sum_i (1/2)(a x_i^2 + b y_i^2 + 2 c x_i y_i)
double G_value(const ProfilePoint& w, double a, double b, double c);

// region and maximizer set; c must be nonzero (c = 0 decouples the blocks).
// Classification normalizes |c| = 1 internally and rescales on output.
GroundClassification classify_ground_state(double a, double b, double c, double rho, int r,
                                           double tol = 1e-9);

// magnetisation at zero temperature for c > 0, trace-zero field, top entry w1
double ground_magnetisation(const GroundClassification& cls, double a, double b, double c,
                            double rho, double w1);

struct GridCell {
    double a = 0.0, b = 0.0;
    RegionTag tag = RegionTag::D;
    int k = 0;
    double max_g = 0.0;
};

// row-major labeled grid: a varies along rows (outer index), b along columns
std::vector<GridCell> diagram_grid(double a_min, double a_max, double b_min, double b_max,
                                   int res_a, int res_b, double c, double rho, int r,
                                   Exec exec = Exec::parallel);

}  // namespace spinmf
