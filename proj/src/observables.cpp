#include "spinmf/observables.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace spinmf {

namespace {

using cd = std::complex<double>;

struct Group {
    cd value;
    int mult;
};

template <typename T>
std::vector<Group> group_values(const std::vector<T>& vals, double tol) {
    std::vector<cd> sums;
    std::vector<int> mult;
    for (const auto& v : vals) {
        cd x(v);
        bool placed = false;
        for (std::size_t g = 0; g < sums.size(); ++g)
            if (std::abs(x - sums[g] / double(mult[g])) < tol) {
                sums[g] += x;
                ++mult[g];
                placed = true;
                break;
            }
        if (!placed) {
            sums.push_back(x);
            mult.push_back(1);
        }
    }
    std::vector<Group> out(sums.size());
    for (std::size_t g = 0; g < sums.size(); ++g) out[g] = {sums[g] / double(mult[g]), mult[g]};
    return out;
}

cd ipow(cd x, int e) {
    cd out = 1.0;
    for (int i = 0; i < e; ++i) out *= x;
    return out;
}

// d^p/dw^p d^q/dz^q e^{wz} / (p! q!)
cd exp_mixed_derivative(cd w, cd z, int p, int q) {
    cd s = 0.0;
    double binom = 1.0;  // C(p,k)
    double fall = 1.0;   // q (q-1) ... (q-k+1)
    for (int k = 0; k <= std::min(p, q); ++k) {
        if (k > 0) {
            binom *= double(p - k + 1) / double(k);
            fall *= double(q - k + 1);
        }
        s += binom * fall * ipow(w, q - k) * ipow(z, p - k);
    }
    double pf = 1.0, qf = 1.0;
    for (int i = 2; i <= p; ++i) pf *= i;
    for (int i = 2; i <= q; ++i) qf *= i;
    return s * std::exp(w * z) / (pf * qf);
}

std::vector<double> sorted_z(const ProfilePoint& pt, ModelKind kind) {
    const std::size_t r = pt.x.size();
    std::vector<double> z(r);
    const bool wb = kind == ModelKind::WBQ || kind == ModelKind::WBP;
    for (std::size_t i = 0; i < r; ++i) z[i] = wb ? pt.x[i] - pt.y[i] : pt.x[i] + pt.y[i];
    std::sort(z.rbegin(), z.rend());
    return z;
}

}  // namespace

std::complex<double> R_function(const std::vector<std::complex<double>>& w,
                                const std::vector<double>& z, double conf_tol) {
    const int r = static_cast<int>(w.size());
    if (static_cast<int>(z.size()) != r)
        throw std::invalid_argument("R_function: w and z must have equal length");
    if (r == 0) return 1.0;
    if (r == 1) return std::exp(w[0] * z[0]);

    auto wg = group_values(w, conf_tol);
    auto zg = group_values(z, conf_tol);

    Eigen::MatrixXcd M(r, r);
    double sign = 1.0;
    {
        int row = 0;
        for (const auto& gw : wg) {
            if (gw.mult % 4 == 2 || gw.mult % 4 == 3) sign = -sign;
            for (int p = 0; p < gw.mult; ++p, ++row) {
                int col = 0;
                for (const auto& gz : zg) {
                    for (int q = 0; q < gz.mult; ++q, ++col)
                        M(row, col) = exp_mixed_derivative(gw.value, gz.value, p, q);
                }
            }
        }
        for (const auto& gz : zg)
            if (gz.mult % 4 == 2 || gz.mult % 4 == 3) sign = -sign;
    }
    cd denom = 1.0;
    for (std::size_t g = 0; g < wg.size(); ++g)
        for (std::size_t h = g + 1; h < wg.size(); ++h)
            denom *= ipow(wg[g].value - wg[h].value, wg[g].mult * wg[h].mult);
    for (std::size_t g = 0; g < zg.size(); ++g)
        for (std::size_t h = g + 1; h < zg.size(); ++h)
            denom *= ipow(zg[g].value - zg[h].value, zg[g].mult * zg[h].mult);
    double pref = 1.0;
    for (int i = 1; i <= r; ++i)
        for (int j = i + 1; j <= r; ++j) pref *= double(j - i);
    if (!(std::abs(denom) > 0.0) || !std::isfinite(std::abs(denom)))
        throw std::runtime_error("R_function: both direct and confluent paths ill-conditioned");
    cd det = M.determinant();
    if (!std::isfinite(std::abs(det)))
        throw std::runtime_error("R_function: determinant not finite");
    return sign * pref * det / denom;
}

CorrelationResult limit_correlation(const TwoBlockParams& p, ModelKind kind,
                                    const std::vector<double>& w) {
    if (static_cast<int>(w.size()) != p.r)
        throw std::invalid_argument("limit_correlation: w must have r entries");
    MaximizerReport rep = maximize_F(p);
    CorrelationResult out;
    out.multiplicity = static_cast<int>(rep.points.size());
    std::vector<cd> wc(w.begin(), w.end());
    for (const auto& pt : rep.points)
        out.candidates.push_back(R_function(wc, sorted_z(pt, kind)).real());
    out.unique = out.multiplicity == 1;
    if (out.unique) out.value = out.candidates.front();
    return out;
}

double magnetisation(const TwoBlockParams& p, ModelKind kind, const std::vector<double>& w,
                     Side side) {
    if (static_cast<int>(w.size()) != p.r)
        throw std::invalid_argument("magnetisation: w must have r entries");
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (w[i] < w[i + 1])
            throw std::invalid_argument("magnetisation: w must be sorted decreasing");
    MaximizerReport rep = maximize_F(p);
    double best = side == Side::right ? -1e300 : 1e300;
    for (const auto& pt : rep.points) {
        auto z = sorted_z(pt, kind);
        double s = 0.0;
        for (int i = 0; i < p.r; ++i)
            s += z[i] * (side == Side::right ? w[i] : w[p.r - 1 - i]);
        best = side == Side::right ? std::max(best, s) : std::min(best, s);
    }
    return best;
}

namespace {

// field term h * sum_i sort_desc(x +- y)_i * w_{sigma(i)}
double field_term(const ProfilePoint& pt, ModelKind kind, const std::vector<double>& w,
                  double h) {
    auto z = sorted_z(pt, kind);
    const int r = static_cast<int>(z.size());
    double s = 0.0;
    for (int i = 0; i < r; ++i) s += z[i] * (h > 0 ? w[i] : w[r - 1 - i]);
    return h * s;
}

}  // namespace

double free_energy_with_field(const TwoBlockParams& p, ModelKind kind,
                              const std::vector<double>& w, double h) {
    if (static_cast<int>(w.size()) != p.r)
        throw std::invalid_argument("free_energy_with_field: w must have r entries");
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (w[i] < w[i + 1])
            throw std::invalid_argument("free_energy_with_field: w must be sorted decreasing");
    if (h == 0.0) return maximize_F(p).value;

    const bool wb = kind == ModelKind::WBQ || kind == ModelKind::WBP;
    auto objective = [&](const ProfilePoint& pt) {
        return F_value(pt, p) + field_term(pt, kind, w, h);
    };

    // ascent with the (piecewise-smooth) field gradient; re-sorted each step
    auto ascend_field = [&](ProfilePoint pt) {
        const int r = p.r;
        auto project = [&](ProfilePoint& q) {
            std::vector<double> vx = q.x, vy = q.y;
            // projection via sort-threshold on each scaled simplex
            auto proj = [](std::vector<double>& v, double s) {
                std::vector<double> u(v);
                std::sort(u.rbegin(), u.rend());
                double css = 0.0, theta = 0.0;
                for (std::size_t i = 0; i < u.size(); ++i) {
                    css += u[i];
                    double th = (css - s) / double(i + 1);
                    if (u[i] - th > 0) theta = th;
                }
                for (auto& vi : v) vi = std::max(0.0, vi - theta);
            };
            proj(vx, p.rho);
            proj(vy, 1.0 - p.rho);
            q.x = vx;
            q.y = vy;
        };
        project(pt);
        double f = objective(pt);
        double step = 0.25;
        for (int it = 0; it < 6000; ++it) {
            // gradient of F plus the field contribution through the z-sort
            std::vector<double> gx(r), gy(r);
            for (int i = 0; i < r; ++i) {
                double x = std::max(pt.x[i], 1e-300), y = std::max(pt.y[i], 1e-300);
                gx[i] = -std::log(x) - 1.0 + p.beta * (p.a * pt.x[i] + p.c * pt.y[i]);
                gy[i] = -std::log(y) - 1.0 + p.beta * (p.b * pt.y[i] + p.c * pt.x[i]);
            }
            {
                std::vector<int> idx(r);
                std::iota(idx.begin(), idx.end(), 0);
                std::vector<double> zv(r);
                for (int i = 0; i < r; ++i) zv[i] = wb ? pt.x[i] - pt.y[i] : pt.x[i] + pt.y[i];
                std::sort(idx.begin(), idx.end(), [&](int i, int j) { return zv[i] > zv[j]; });
                for (int rank = 0; rank < r; ++rank) {
                    int i = idx[rank];
                    double wr = h > 0 ? w[rank] : w[r - 1 - rank];
                    gx[i] += h * wr;
                    gy[i] += wb ? -h * wr : h * wr;
                }
            }
            double t = step;
            bool moved = false;
            for (int bt = 0; bt < 60; ++bt, t *= 0.5) {
                ProfilePoint cand = pt;
                for (int i = 0; i < r; ++i) {
                    cand.x[i] += t * gx[i];
                    cand.y[i] += t * gy[i];
                }
                project(cand);
                double fc = objective(cand);
                if (fc >= f) {
                    moved = fc > f + 1e-15;
                    pt = std::move(cand);
                    f = fc;
                    step = std::min(1.0, t * 4.0);
                    break;
                }
            }
            if (!moved) break;
        }
        return pt;
    };

    // starts: field-free maximizers, omega0/omega1, Dirichlet seeds
    std::vector<ProfilePoint> starts;
    {
        MaximizerReport rep = maximize_F(p);
        starts = rep.points;
        starts.push_back(omega0(p.rho, p.r));
        starts.push_back(omega1(p.rho, p.r));
        std::mt19937 rng(555019u);
        std::uniform_real_distribution<double> uni(1e-12, 1.0);
        for (int s = 0; s < 32; ++s) {
            ProfilePoint q{std::vector<double>(p.r), std::vector<double>(p.r)};
            double sx = 0, sy = 0;
            for (int i = 0; i < p.r; ++i) {
                q.x[i] = -std::log(uni(rng));
                q.y[i] = -std::log(uni(rng));
                sx += q.x[i];
                sy += q.y[i];
            }
            for (int i = 0; i < p.r; ++i) {
                q.x[i] *= p.rho / sx;
                q.y[i] *= (1.0 - p.rho) / sy;
            }
            starts.push_back(std::move(q));
        }
    }
    double best = -1e300;
    for (auto& s : starts) best = std::max(best, objective(ascend_field(std::move(s))));
    return best;
}

}  // namespace spinmf
