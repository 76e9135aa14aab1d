#include "spinmf/repsum.hpp"

#include <cmath>
#include <stdexcept>

#include "spinmf/combinatorics.hpp"

namespace spinmf {

namespace {

// compensated (Kahan) accumulator; summand magnitudes span e^{+-beta n O(1)}
struct Kahan {
    double sum = 0.0, carry = 0.0;
    void add(double v) {
        double y = v - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

double schur_at_field(const Partition& lam, int r, const std::vector<double>& w) {
    std::vector<std::complex<double>> x(r);
    for (int i = 0; i < r; ++i) x[i] = std::exp(w[i]);
    std::vector<int> e(r);
    for (int i = 0; i < r; ++i) e[i] = lam.part(i);
    return gl_character(SignedWeight(std::move(e)), x).real();
}

double rational_char_at_field(const Partition& lam, const Partition& mu, int r,
                              const std::vector<double>& w) {
    std::vector<std::complex<double>> x(r);
    for (int i = 0; i < r; ++i) x[i] = std::exp(w[i]);
    return gl_character(signed_weight(lam, mu, r), x).real();
}

void guard_enumeration(const ModelInstance& inst) {
    if (inst.n > 64) throw std::invalid_argument("repsum: n too large to enumerate");
}

// deterministic reduce: per-outer partial sums combined in index order
template <typename Term>
double reduce_outer(int count, Exec exec, Term&& per_outer) {
    std::vector<double> partial(count, 0.0);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < count; ++i) partial[i] = per_outer(i);
    } else {
        for (int i = 0; i < count; ++i) partial[i] = per_outer(i);
    }
    Kahan total;
    for (int i = 0; i < count; ++i) total.add(partial[i]);
    return total.sum;
}

}  // namespace

double z_ab_exact(const ModelInstance& inst, double beta,
                  const std::optional<std::vector<double>>& w, Exec exec) {
    if (inst.kind != ModelKind::AB) throw std::invalid_argument("z_ab_exact: kind must be AB");
    guard_enumeration(inst);
    const int n = inst.n, m = inst.m, r = inst.r;
    const double a = inst.a, b = inst.b, c = inst.c;

    const auto lams = partitions_of(n, r);
    const auto mus = partitions_of(m, r);
    const auto nus = partitions_of(n - m, r);

    if (exec == Exec::serial) {
        // reference loop, single compensated accumulator
        Kahan z;
        for (const auto& lam : lams) {
            const double slam = w ? schur_at_field(lam, r, *w) : to_double(dim_gl(lam, r));
            for (const auto& mu : mus) {
                if (!lam.contains(mu)) continue;
                for (const auto& nu : nus) {
                    long long lr = lr_coeff(lam, mu, nu);
                    if (!lr) continue;
                    double e = (beta / n) * ((a - c) * content(mu) + (b - c) * content(nu) +
                                             c * content(lam));
                    z.add(slam * double(lr) * to_double(dim_specht(mu) * dim_specht(nu)) *
                          std::exp(e));
                }
            }
        }
        return z.sum;
    }

    return reduce_outer(static_cast<int>(lams.size()), exec, [&](int li) {
        const auto& lam = lams[li];
        const double slam = w ? schur_at_field(lam, r, *w) : to_double(dim_gl(lam, r));
        Kahan part;
        for (const auto& mu : mus) {
            if (!lam.contains(mu)) continue;
            for (const auto& nu : nus) {
                long long lr = lr_coeff(lam, mu, nu);
                if (!lr) continue;
                double e = (beta / n) *
                           ((a - c) * content(mu) + (b - c) * content(nu) + c * content(lam));
                part.add(slam * double(lr) * to_double(dim_specht(mu) * dim_specht(nu)) *
                         std::exp(e));
            }
        }
        return part.sum;
    });
}

double z_wb_exact(const ModelInstance& inst, double beta,
                  const std::optional<std::vector<double>>& w, Exec exec) {
    if (inst.kind != ModelKind::WBQ && inst.kind != ModelKind::WBP)
        throw std::invalid_argument("z_wb_exact: kind must be WB-Q or WB-P");
    guard_enumeration(inst);
    const int n = inst.n, m = inst.m, r = inst.r;
    const double a = inst.a, b = inst.b, c = inst.c;
    const int mhat = std::min(m, n - m);

    const auto pis = partitions_of(m, r);
    const auto taus = partitions_of(n - m, r);

    auto per_pi = [&](int pi_idx) {
        const auto& pi = pis[pi_idx];
        Kahan part;
        for (const auto& tau : taus) {
            const double dpt = to_double(dim_specht(pi) * dim_specht(tau));
            for (int t = 0; t <= mhat; ++t) {
                for (const auto& lam : partitions_of(m - t, r)) {
                    for (const auto& mu : partitions_of(n - m - t, r)) {
                        if (lam.length() + mu.length() > r) continue;
                        long long bc = wb_branch(lam, mu, pi, tau, r);
                        if (!bc) continue;
                        double chi = w ? rational_char_at_field(lam, mu, r, *w)
                                       : to_double(dim_gl_rational(lam, mu, r));
                        double e = (beta / n) *
                                   ((c + a) * content(pi) + (c + b) * content(tau) -
                                    c * (content(lam) + content(mu) - double(r) * t));
                        part.add(chi * double(bc) * dpt * std::exp(e));
                    }
                }
            }
        }
        return part.sum;
    };

    if (exec == Exec::serial) {
        Kahan z;
        for (int i = 0; i < static_cast<int>(pis.size()); ++i) z.add(per_pi(i));
        return z.sum;
    }
    return reduce_outer(static_cast<int>(pis.size()), exec, per_pi);
}

double z_mb_exact(const ModelInstance& inst, double beta, Exec exec) {
    if (inst.kind != ModelKind::MB) throw std::invalid_argument("z_mb_exact: kind must be MB");
    guard_enumeration(inst);
    const int n = inst.n, r = inst.r;
    const int p = static_cast<int>(inst.block_sizes.size());

    const auto lams = partitions_of(n, r);
    std::vector<std::vector<Partition>> block_parts(p);
    for (int k = 0; k < p; ++k) block_parts[k] = partitions_of(inst.block_sizes[k], r);

    return reduce_outer(static_cast<int>(lams.size()), exec, [&](int li) {
        const auto& lam = lams[li];
        const double dU = to_double(dim_gl(lam, r));
        const double dlam = to_double(dim_specht(lam));
        double cpart = 0.0;
        for (const auto& term : inst.terms)
            if (term.c != 0.0)
                cpart += term.c * double(mn_character(lam, term.gamma)) / dlam;

        Kahan acc;
        std::vector<Partition> mus(p);
        auto rec = [&](auto&& self, int k) -> void {
            if (k == p) {
                long long mlr = multi_lr_coeff(lam, mus);
                if (!mlr) return;
                double dprod = 1.0, apart = 0.0;
                for (int kk = 0; kk < p; ++kk) {
                    double dmu = to_double(dim_specht(mus[kk]));
                    dprod *= dmu;
                    for (const auto& term : inst.terms) {
                        double ak = kk < static_cast<int>(term.a.size()) ? term.a[kk] : 0.0;
                        if (ak != 0.0)
                            apart += ak * double(mn_character(mus[kk], term.gamma)) / dmu;
                    }
                }
                acc.add(dU * double(mlr) * dprod * std::exp(n * beta * (apart + cpart)));
                return;
            }
            for (const auto& mu : block_parts[k]) {
                mus[k] = mu;
                self(self, k + 1);
            }
        };
        rec(rec, 0);
        return acc.sum;
    });
}

double z_exact(const ModelInstance& inst, double beta, Exec exec) {
    switch (inst.kind) {
        case ModelKind::AB:
            return z_ab_exact(inst, beta, std::nullopt, exec);
        case ModelKind::WBQ:
        case ModelKind::WBP:
            return z_wb_exact(inst, beta, std::nullopt, exec);
        case ModelKind::MB:
            return z_mb_exact(inst, beta, exec);
        default:
            throw std::invalid_argument("z_exact: unsupported model kind");
    }
}

}  // namespace spinmf
