#pragma once

#include <optional>
#include <vector>

#include "spinmf/models.hpp"

namespace spinmf {

enum class Exec { serial, parallel };

// Exact finite-n partition functions through representation-theoretic sums.
// The serial path is the straightforward reference loop; the parallel path
// splits over the outermost partition with per-partition partial sums
// reduced in a fixed order, so results are reproducible run to run.
//
// With a field spectrum w the AB/WB sums evaluate GL characters at e^{w_i}
// and equal tr[T(e^W) exp(-beta H)] for W = diag(w).

double z_ab_exact(const ModelInstance& inst, double beta,
                  const std::optional<std::vector<double>>& w = std::nullopt,
                  Exec exec = Exec::parallel);

double z_wb_exact(const ModelInstance& inst, double beta,
                  const std::optional<std::vector<double>>& w = std::nullopt,
                  Exec exec = Exec::parallel);

double z_mb_exact(const ModelInstance& inst, double beta, Exec exec = Exec::parallel);

// dispatch on inst.kind (AB, WBQ/WBP share z_wb_exact)
double z_exact(const ModelInstance& inst, double beta, Exec exec = Exec::parallel);

}  // namespace spinmf
