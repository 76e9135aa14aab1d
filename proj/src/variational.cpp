#include "spinmf/variational.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace spinmf {

namespace {

constexpr double kValueTol = 1e-9;   // maximizers must tie within this
constexpr double kDedupTol = 1e-6;   // cluster radius after canonical ordering
constexpr double kKktTol = 1e-10;

inline double xlogx(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

double quad(double a, double b, double c, double x, double y) {
    return 0.5 * (a * x * x + b * y * y + 2.0 * c * x * y);
}

// Euclidean projection onto { v >= 0, sum v = s }
void simplex_project(std::vector<double>& v, double s) {
    const int n = static_cast<int>(v.size());
    std::vector<double> u(v);
    std::sort(u.rbegin(), u.rend());
    double css = 0.0, theta = 0.0;
    int k = 0;
    for (int i = 0; i < n; ++i) {
        css += u[i];
        double th = (css - s) / (i + 1);
        if (u[i] - th > 0) {
            k = i + 1;
            theta = th;
        }
    }
    (void)k;
    for (auto& vi : v) vi = std::max(0.0, vi - theta);
}

void validate(const TwoBlockParams& p) {
    if (!(p.rho > 0.0 && p.rho < 1.0)) throw std::invalid_argument("rho must be in (0,1)");
    if (!(p.beta > 0.0)) throw std::invalid_argument("beta must be positive");
    if (p.r < 2) throw std::invalid_argument("r must be >= 2");
}

struct Gradient {
    std::vector<double> gx, gy;
};

Gradient grad_F(const ProfilePoint& w, const TwoBlockParams& p) {
    const int r = p.r;
    Gradient g{std::vector<double>(r), std::vector<double>(r)};
    for (int i = 0; i < r; ++i) {
        double x = std::max(w.x[i], 1e-300), y = std::max(w.y[i], 1e-300);
        g.gx[i] = -std::log(x) - 1.0 + p.beta * (p.a * w.x[i] + p.c * w.y[i]);
        g.gy[i] = -std::log(y) - 1.0 + p.beta * (p.b * w.y[i] + p.c * w.x[i]);
    }
    return g;
}

double kkt_residual(const ProfilePoint& w, const TwoBlockParams& p) {
    Gradient g = grad_F(w, p);
    auto block = [](const std::vector<double>& v, const std::vector<double>& grad) {
        double mean = 0.0;
        int support = 0;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] > 1e-12) {
                mean += grad[i];
                ++support;
            }
        mean /= std::max(support, 1);
        double res = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            double d = grad[i] - mean;
            res = std::max(res, v[i] > 1e-12 ? std::abs(d) : std::max(0.0, d));
        }
        return res;
    };
    return std::max(block(w.x, g.gx), block(w.y, g.gy));
}

// projected gradient ascent with backtracking; returns the refined point
ProfilePoint ascend(ProfilePoint w, const TwoBlockParams& p, int max_iter = 4000) {
    const double rho = p.rho;
    simplex_project(w.x, rho);
    simplex_project(w.y, 1.0 - rho);
    double f = F_value(w, p);
    double step = 0.5;
    for (int it = 0; it < max_iter; ++it) {
        Gradient g = grad_F(w, p);
        ProfilePoint cand;
        double fc = -1e300;
        double t = step;
        bool improved = false;
        for (int bt = 0; bt < 60; ++bt, t *= 0.5) {
            cand = w;
            for (int i = 0; i < p.r; ++i) {
                cand.x[i] += t * g.gx[i];
                cand.y[i] += t * g.gy[i];
            }
            simplex_project(cand.x, rho);
            simplex_project(cand.y, 1.0 - rho);
            canonical_order(cand, p.c);
            fc = F_value(cand, p);
            if (fc >= f) {
                improved = fc > f + 1e-16;
                break;
            }
        }
        if (fc >= f) {
            w = std::move(cand);
            f = fc;
            step = std::min(1.0, t * 4.0);
        }
        if (!improved && kkt_residual(w, p) <= kKktTol) break;
    }
    return w;
}

std::vector<ProfilePoint> candidate_points(const TwoBlockParams& p) {
    const int r = p.r;
    const double rho = p.rho, rhop = 1.0 - rho;
    std::vector<ProfilePoint> cands{omega0(rho, r), omega1(rho, r)};
    auto push = [&](std::vector<double> x, std::vector<double> y) {
        cands.push_back(ProfilePoint{std::move(x), std::move(y)});
    };
    // zero-temperature maximizers, later blended into the interior
    {
        std::vector<double> x(r, 0.0), y(r, 0.0);
        x[0] = rho;
        y[0] = rhop;
        push(x, y);  // omega_F
        y.assign(r, 0.0);
        y[r - 1] = rhop;
        push(x, y);  // omega_A
    }
    if (p.b < 0.0) {
        std::vector<double> x(r, 0.0), y(r, (p.b * rhop + p.c * rho) / (p.b * r));
        x[0] = rho;
        y[0] = (p.b * rhop - (r - 1) * p.c * rho) / (p.b * r);
        bool ok = true;
        for (double v : y) ok = ok && v >= 0.0;
        if (ok && y[0] >= 0.0) push(x, y);  // omega_E1
    }
    if (p.a < 0.0) {
        std::vector<double> x(r, (p.a * rho + p.c * rhop) / (p.a * r)), y(r, 0.0);
        x[0] = (p.a * rho - (r - 1) * p.c * rhop) / (p.a * r);
        y[0] = rhop;
        bool ok = true;
        for (double v : x) ok = ok && v >= 0.0;
        if (ok) push(x, y);  // omega_E2
    }
    for (int k = 1; k <= r - 1; ++k) {  // omega_{B_k}
        std::vector<double> x(r, 0.0), y(r, 0.0);
        for (int i = 0; i < k; ++i) x[i] = rho / k;
        for (int i = k; i < r; ++i) y[i] = rhop / (r - k);
        push(x, y);
    }
    for (int k = 1; k <= r; ++k) {  // omega_{C_k}
        double dk = k * (r + 1 - k) * p.a * p.b - (k - 1) * (r - k) * p.c * p.c;
        if (std::abs(dk) < 1e-14) continue;
        double x1 = ((r + 1 - k) * rho * p.a * p.b + rhop * p.b * p.c - (r - k) * rho * p.c * p.c) / dk;
        double x2 = ((r + 1 - k) * rho * p.a * p.b - (k - 1) * rhop * p.b * p.c) / dk;
        double y1 = (k * rhop * p.a * p.b - (r - k) * rho * p.a * p.c) / dk;
        double y2 = (k * rhop * p.a * p.b + rho * p.a * p.c - (k - 1) * rhop * p.c * p.c) / dk;
        if (x1 < 0 || x2 < 0 || y1 < 0 || y2 < 0) continue;
        std::vector<double> x(r, 0.0), y(r, 0.0);
        for (int i = 0; i < k - 1; ++i) x[i] = x1;
        x[k - 1] = x2;
        y[k - 1] = y1;
        for (int i = k; i < r; ++i) y[i] = y2;
        push(x, y);
    }
    // blend toward omega0 so every start has finite entropy gradient
    ProfilePoint w0 = omega0(rho, r);
    for (auto& cand : cands)
        for (int i = 0; i < r; ++i) {
            cand.x[i] = 0.999 * cand.x[i] + 0.001 * w0.x[i];
            cand.y[i] = 0.999 * cand.y[i] + 0.001 * w0.y[i];
        }
    return cands;
}

// deterministic Dirichlet(1) seeds on both simplices
// Newton refinement on the two-value reduction (x1, y1); valid whenever the
// point has the c>0 maximizer shape.  Pushes the KKT residual to ~1e-13.
ProfilePoint polish_two_value(ProfilePoint w, const TwoBlockParams& p) {
    const int r = p.r;
    if (r < 2) return w;
    const double rho = p.rho, rhop = 1.0 - rho;
    double x1 = w.x[0], y1 = w.y[0];
    for (int i = 2; i < r; ++i)
        if (std::abs(w.x[i] - w.x[1]) > 1e-4 || std::abs(w.y[i] - w.y[1]) > 1e-4) return w;
    auto value = [&](double ax, double ay) {
        double x2 = (rho - ax) / (r - 1), y2 = (rhop - ay) / (r - 1);
        if (ax < 0 || ay < 0 || x2 < 0 || y2 < 0) return -1e300;
        return -xlogx(ax) - xlogx(ay) - (r - 1) * (xlogx(x2) + xlogx(y2)) +
               p.beta * (quad(p.a, p.b, p.c, ax, ay) + (r - 1) * quad(p.a, p.b, p.c, x2, y2));
    };
    auto fx = [&](double x, double y) { return -std::log(x) - 1 + p.beta * (p.a * x + p.c * y); };
    auto fy = [&](double x, double y) { return -std::log(y) - 1 + p.beta * (p.b * y + p.c * x); };
    auto gnorm = [&](double ax, double ay) {
        double x2 = (rho - ax) / (r - 1), y2 = (rhop - ay) / (r - 1);
        return std::max(std::abs(fx(ax, ay) - fx(x2, y2)), std::abs(fy(ax, ay) - fy(x2, y2)));
    };
    const double f_start = value(x1, y1);
    double g = gnorm(x1, y1);
    for (int it = 0; it < 60 && g > 1e-13; ++it) {
        double x2 = (rho - x1) / (r - 1), y2 = (rhop - y1) / (r - 1);
        if (x1 <= 1e-13 || y1 <= 1e-13 || x2 <= 1e-13 || y2 <= 1e-13) break;
        double gx = fx(x1, y1) - fx(x2, y2);
        double gy = fy(x1, y1) - fy(x2, y2);
        double hxx = (p.beta * p.a - 1 / x1) + (p.beta * p.a - 1 / x2) / (r - 1);
        double hyy = (p.beta * p.b - 1 / y1) + (p.beta * p.b - 1 / y2) / (r - 1);
        double hxy = p.beta * p.c * (1.0 + 1.0 / (r - 1));
        double det = hxx * hyy - hxy * hxy;
        if (std::abs(det) < 1e-14) break;
        double dx = -(hyy * gx - hxy * gy) / det;
        double dy = -(hxx * gy - hxy * gx) / det;
        // accept on gradient-norm decrease: the value is flat to fp noise in
        // a ~sqrt(eps) neighborhood of the stationary point
        double t = 1.0;
        bool ok = false;
        for (int bt = 0; bt < 30; ++bt, t *= 0.5) {
            double nx = x1 + t * dx, ny = y1 + t * dy;
            if (nx <= 0 || ny <= 0 || nx >= rho || ny >= rhop) continue;
            double gc = gnorm(nx, ny);
            if (gc < g) {
                x1 = nx;
                y1 = ny;
                g = gc;
                ok = true;
                break;
            }
        }
        if (!ok) break;
    }
    // guard against drifting to a different stationary point
    if (value(x1, y1) < f_start - 1e-12) return w;
    double x2 = (rho - x1) / (r - 1), y2 = (rhop - y1) / (r - 1);
    w.x.assign(r, x2);
    w.y.assign(r, y2);
    w.x[0] = x1;
    w.y[0] = y1;
    return w;
}

std::vector<ProfilePoint> dirichlet_seeds(const TwoBlockParams& p, int count) {
    std::mt19937 rng(20240611u);
    std::uniform_real_distribution<double> uni(1e-12, 1.0);
    std::vector<ProfilePoint> seeds;
    seeds.reserve(count);
    for (int s = 0; s < count; ++s) {
        ProfilePoint w{std::vector<double>(p.r), std::vector<double>(p.r)};
        double sx = 0, sy = 0;
        for (int i = 0; i < p.r; ++i) {
            w.x[i] = -std::log(uni(rng));
            w.y[i] = -std::log(uni(rng));
            sx += w.x[i];
            sy += w.y[i];
        }
        for (int i = 0; i < p.r; ++i) {
            w.x[i] *= p.rho / sx;
            w.y[i] *= (1.0 - p.rho) / sy;
        }
        seeds.push_back(std::move(w));
    }
    return seeds;
}

// scan of the two-value form x1 >= x2 = ... = xr (any maximizer has this
// shape when c > 0); returns the grid-local maxima as ascent starts
std::vector<ProfilePoint> two_value_local_maxima(const TwoBlockParams& p, int grid) {
    const int r = p.r;
    const double rho = p.rho, rhop = 1.0 - rho;
    auto profile = [&](int i, int j) {
        double x1 = rho / r + (rho - rho / r) * (double(i) / grid) * 0.999;
        double y1 = rhop / r + (rhop - rhop / r) * (double(j) / grid) * 0.999;
        ProfilePoint w{std::vector<double>(r, (rho - x1) / (r - 1)),
                       std::vector<double>(r, (rhop - y1) / (r - 1))};
        w.x[0] = x1;
        w.y[0] = y1;
        return w;
    };
    std::vector<double> val((grid + 1) * (grid + 1));
    for (int i = 0; i <= grid; ++i)
        for (int j = 0; j <= grid; ++j) val[i * (grid + 1) + j] = F_value(profile(i, j), p);
    std::vector<ProfilePoint> starts;
    for (int i = 0; i <= grid; ++i)
        for (int j = 0; j <= grid; ++j) {
            double v = val[i * (grid + 1) + j];
            bool top = true;
            for (int di = -1; di <= 1 && top; ++di)
                for (int dj = -1; dj <= 1 && top; ++dj) {
                    int ii = i + di, jj = j + dj;
                    if (ii < 0 || jj < 0 || ii > grid || jj > grid || (di == 0 && dj == 0))
                        continue;
                    if (val[ii * (grid + 1) + jj] > v) top = false;
                }
            if (top) starts.push_back(profile(i, j));
        }
    return starts;
}

double max_abs_diff(const ProfilePoint& u, const ProfilePoint& v) {
    double d = 0.0;
    for (std::size_t i = 0; i < u.x.size(); ++i) {
        d = std::max(d, std::abs(u.x[i] - v.x[i]));
        d = std::max(d, std::abs(u.y[i] - v.y[i]));
    }
    return d;
}

}  // namespace

ProfilePoint omega0(double rho, int r) {
    return {std::vector<double>(r, rho / r), std::vector<double>(r, (1.0 - rho) / r)};
}

ProfilePoint omega1(double rho, int r) {
    ProfilePoint w{std::vector<double>(r, rho / (double(r) * (r - 1))),
                   std::vector<double>(r, (1.0 - rho) / (double(r) * (r - 1)))};
    w.x[0] = (r - 1) * rho / double(r);
    w.y[0] = (r - 1) * (1.0 - rho) / double(r);
    return w;
}

void canonical_order(ProfilePoint& w, double c) {
    std::sort(w.x.rbegin(), w.x.rend());
    if (c >= 0.0)
        std::sort(w.y.rbegin(), w.y.rend());
    else
        std::sort(w.y.begin(), w.y.end());
}

double F_value(const ProfilePoint& w, const TwoBlockParams& p) {
    double f = 0.0;
    for (int i = 0; i < p.r; ++i)
        f += -xlogx(w.x[i]) - xlogx(w.y[i]) +
             p.beta * quad(p.a, p.b, p.c, w.x[i], w.y[i]);
    return f;
}

MaximizerReport maximize_F(const TwoBlockParams& p, Exec exec) {
    validate(p);
    const int r = p.r;

    std::vector<ProfilePoint> starts = candidate_points(p);
    if (p.c > 0.0) {
        auto tv = two_value_local_maxima(p, 80);
        starts.insert(starts.end(), tv.begin(), tv.end());
    } else {
        auto seeds = dirichlet_seeds(p, 64);
        starts.insert(starts.end(), seeds.begin(), seeds.end());
    }

    const int count = static_cast<int>(starts.size());
    std::vector<ProfilePoint> results(count);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int s = 0; s < count; ++s) results[s] = ascend(starts[s], p);
    } else {
        for (int s = 0; s < count; ++s) results[s] = ascend(starts[s], p);
    }
    if (p.c > 0.0)
        for (auto& q : results) {
            // the value is fp-flat near a stationary point, so accept the
            // refined point up to noise; polish guards against real drops
            ProfilePoint refined = polish_two_value(q, p);
            if (F_value(refined, p) >= F_value(q, p) - 1e-12) q = std::move(refined);
        }

    MaximizerReport rep;
    rep.value = -1e300;
    for (int s = 0; s < count; ++s) rep.value = std::max(rep.value, F_value(results[s], p));

    // deterministic merge: keep near-optimal points, dedup after canonical order
    for (int s = 0; s < count; ++s) {
        if (F_value(results[s], p) < rep.value - kValueTol) continue;
        canonical_order(results[s], p.c);
        bool dup = false;
        for (const auto& q : rep.points)
            if (max_abs_diff(q, results[s]) < kDedupTol) {
                dup = true;
                break;
            }
        if (!dup) rep.points.push_back(results[s]);
    }
    std::sort(rep.points.begin(), rep.points.end(),
              [](const ProfilePoint& u, const ProfilePoint& v) { return u.x > v.x; });
    // the reported value is the best value over the returned points, so the
    // value and the point set always tell one story
    rep.value = -1e300;
    for (const auto& q : rep.points) rep.value = std::max(rep.value, F_value(q, p));

    ProfilePoint w0 = omega0(p.rho, r);
    double kkt = 0.0;
    for (const auto& q : rep.points) {
        if (max_abs_diff(q, w0) < 1e-7) rep.at_omega0 = true;
        kkt = std::max(kkt, kkt_residual(q, p));
    }
    rep.kkt_residual = kkt;
    rep.converged = kkt <= 1e-7;  // maximizers may sit at simplex corners at T=0 limits

    rep.method = MaximizeMethod::numeric;
    for (const auto& cand : {omega0(p.rho, r), omega1(p.rho, r)})
        for (const auto& q : rep.points)
            if (max_abs_diff(q, cand) < 1e-8) rep.method = MaximizeMethod::closed_form_candidate;
    return rep;
}

FreeEnergyResult free_energy(const TwoBlockParams& p, ModelKind kind, Exec exec) {
    FreeEnergyResult out;
    out.report = maximize_F(p, exec);
    if (kind == ModelKind::WBQ || kind == ModelKind::WBP) {
        // evaluate through the walled-Brauer form of the functional:
        // S(x)+S(y) + (beta/2)[(a+c) sum x^2 + (b+c) sum y^2 - c sum z^2], z = x - y
        out.value = -1e300;
        for (const auto& w : out.report.points) {
            double v = 0.0;
            for (int i = 0; i < p.r; ++i) {
                double z = w.x[i] - w.y[i];
                v += -xlogx(w.x[i]) - xlogx(w.y[i]) +
                     0.5 * p.beta *
                         ((p.a + p.c) * w.x[i] * w.x[i] + (p.b + p.c) * w.y[i] * w.y[i] -
                          p.c * z * z);
            }
            out.value = std::max(out.value, v);
        }
    } else {
        out.value = out.report.value;
    }
    out.z_comparable = out.value + p.rho * std::log(p.rho) + (1 - p.rho) * std::log(1 - p.rho);
    return out;
}

EnergyEntropy energy_entropy_split(const ProfilePoint& w, const TwoBlockParams& p) {
    const int r = p.r;
    EnergyEntropy out;
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j)
            out.energy += quad(p.a, p.b, p.c, w.x[i] - w.x[j], w.y[i] - w.y[j]);
    out.energy /= r;
    double h = 0.0;
    for (int i = 0; i < r; ++i) h += -xlogx(w.x[i]) - xlogx(w.y[i]);
    out.entropy = h + p.rho * std::log(p.rho / r) + (1 - p.rho) * std::log((1 - p.rho) / r);
    return out;
}

double gamma_value(double a, double b, double c, double rho) {
    const double rhop = 1.0 - rho;
    if (a <= 0.0 && b <= 0.0 && a * b >= c * c)
        throw std::invalid_argument("gamma_value: quadratic form is negative semidefinite");
    if (std::abs(a * b - c * c) < 1e-14) return 2.0 / (a * rho + b * rhop);
    double disc = std::sqrt((rho * a - rhop * b) * (rho * a - rhop * b) + 4 * rho * rhop * c * c);
    return (rho * a + rhop * b - disc) / (rho * rhop * (a * b - c * c));
}

BetaCritResult beta_crit(double a, double b, double c, double rho, int r, bool force_numeric) {
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must be in (0,1)");
    if (r < 2) throw std::invalid_argument("r must be >= 2");
    const double rhop = 1.0 - rho;
    BetaCritResult out;
    if (a <= 0.0 && b <= 0.0 && a * b >= c * c) {
        out.method = "none";
        out.reason = "Q negative semidefinite";
        return out;
    }
    const double gamma = gamma_value(a, b, c, rho);
    if (!force_numeric) {
        if (r == 2) {
            out.value = gamma;
            out.method = "closed-form-r2";
            return out;
        }
        if (c >= 0.0 && std::abs((a - c) * rho - (b - c) * rhop) <= 1e-12) {
            double t = (a - c) * rho;
            out.value = 2.0 * (r - 1) * std::log(double(r - 1)) / ((r - 2) * (c + t));
            out.method = "closed-form-tcond";
            return out;
        }
    }

    // bisection on "omega0 stops being the maximum", bracketed by the
    // homogeneous-model bounds
    const double beta_h =
        r == 2 ? 2.0 : 2.0 * (r - 1) * std::log(double(r - 1)) / double(r - 2);
    double upper = 0.5 * r * gamma;
    double qrr = quad(a, b, c, rho, rhop);
    if (r >= 3 && qrr > 0.0) upper = std::min(upper, beta_h / (2.0 * qrr));
    double lo = 1e-6, hi = 2.0 * upper;

    // value threshold 1e-12: at second-order transitions the excess above
    // F(omega0) grows quadratically in beta - beta_crit, and a looser
    // threshold would bias the bisection by more than the 1e-4 target
    auto above = [&](double beta) {
        TwoBlockParams p{a, b, c, rho, r, beta};
        MaximizerReport rep = maximize_F(p);
        return rep.value > F_value(omega0(rho, r), p) + 1e-12;
    };
    if (above(lo) || !above(hi)) {
        out.method = "bisection";
        out.reason = "bracket failure: [" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
        return out;
    }
    for (int it = 0; it < 60 && hi - lo > 1e-5; ++it) {
        double mid = 0.5 * (lo + hi);
        (above(mid) ? hi : lo) = mid;
    }
    out.value = 0.5 * (lo + hi);
    out.method = "bisection";
    return out;
}

namespace {

// ---- multi-block machinery ----------------------------------------------

double power_sum(const std::vector<double>& v, int q) {
    double s = 0.0;
    for (double vi : v) s += std::pow(vi, q);
    return s;
}

double mb_value_diag(const std::vector<std::vector<double>>& x, const MultiBlockParams& p) {
    const int pn = static_cast<int>(p.rho.size());
    double val = 0.0;
    for (int k = 0; k < pn; ++k)
        for (double v : x[k]) val -= xlogx(v);
    std::vector<double> s(p.r, 0.0);
    for (int k = 0; k < pn; ++k)
        for (int i = 0; i < p.r; ++i) s[i] += x[k][i];
    for (const auto& term : p.terms) {
        for (int k = 0; k < pn; ++k) {
            double ak = k < static_cast<int>(term.a.size()) ? term.a[k] : 0.0;
            if (ak == 0.0) continue;
            double prod = 1.0;
            for (int gj : term.gamma.parts().parts()) prod *= power_sum(x[k], gj);
            val += p.beta * ak * prod;
        }
        if (term.c != 0.0) {
            double prod = 1.0;
            for (int gj : term.gamma.parts().parts()) prod *= power_sum(s, gj);
            val += p.beta * term.c * prod;
        }
    }
    return val;
}

std::vector<std::vector<double>> mb_grad_diag(const std::vector<std::vector<double>>& x,
                                              const MultiBlockParams& p) {
    const int pn = static_cast<int>(p.rho.size()), r = p.r;
    std::vector<std::vector<double>> g(pn, std::vector<double>(r, 0.0));
    std::vector<double> s(r, 0.0);
    for (int k = 0; k < pn; ++k)
        for (int i = 0; i < r; ++i) s[i] += x[k][i];
    for (int k = 0; k < pn; ++k)
        for (int i = 0; i < r; ++i)
            g[k][i] = -std::log(std::max(x[k][i], 1e-300)) - 1.0;
    for (const auto& term : p.terms) {
        const auto& parts = term.gamma.parts().parts();
        for (int k = 0; k < pn; ++k) {
            double ak = k < static_cast<int>(term.a.size()) ? term.a[k] : 0.0;
            if (ak == 0.0) continue;
            std::vector<double> ps(parts.size());
            for (std::size_t j = 0; j < parts.size(); ++j) ps[j] = power_sum(x[k], parts[j]);
            for (std::size_t j = 0; j < parts.size(); ++j) {
                double rest = 1.0;
                for (std::size_t l = 0; l < parts.size(); ++l)
                    if (l != j) rest *= ps[l];
                for (int i = 0; i < r; ++i)
                    g[k][i] += p.beta * ak * rest * parts[j] * std::pow(x[k][i], parts[j] - 1);
            }
        }
        if (term.c != 0.0) {
            std::vector<double> ps(parts.size());
            for (std::size_t j = 0; j < parts.size(); ++j) ps[j] = power_sum(s, parts[j]);
            for (std::size_t j = 0; j < parts.size(); ++j) {
                double rest = 1.0;
                for (std::size_t l = 0; l < parts.size(); ++l)
                    if (l != j) rest *= ps[l];
                for (int i = 0; i < r; ++i) {
                    double d = p.beta * term.c * rest * parts[j] * std::pow(s[i], parts[j] - 1);
                    for (int k = 0; k < pn; ++k) g[k][i] += d;
                }
            }
        }
    }
    return g;
}

std::vector<std::vector<double>> mb_ascend(std::vector<std::vector<double>> x,
                                           const MultiBlockParams& p, int max_iter = 4000) {
    const int pn = static_cast<int>(p.rho.size());
    for (int k = 0; k < pn; ++k) simplex_project(x[k], p.rho[k]);
    double f = mb_value_diag(x, p);
    double step = 0.5;
    for (int it = 0; it < max_iter; ++it) {
        auto g = mb_grad_diag(x, p);
        double t = step;
        bool moved = false;
        for (int bt = 0; bt < 60; ++bt, t *= 0.5) {
            auto cand = x;
            for (int k = 0; k < pn; ++k) {
                for (int i = 0; i < p.r; ++i) cand[k][i] += t * g[k][i];
                simplex_project(cand[k], p.rho[k]);
            }
            double fc = mb_value_diag(cand, p);
            if (fc >= f) {
                moved = fc > f + 1e-16;
                x = std::move(cand);
                f = fc;
                step = std::min(1.0, t * 4.0);
                break;
            }
        }
        if (!moved) break;
    }
    return x;
}

}  // namespace

MultiBlockResult multi_block_free_energy(const MultiBlockParams& p, Exec exec) {
    const int pn = static_cast<int>(p.rho.size());
    if (pn < 1) throw std::invalid_argument("need at least one block");
    double sum = 0.0;
    for (double rk : p.rho) {
        if (rk <= 0.0) throw std::invalid_argument("block fractions must be positive");
        sum += rk;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("block fractions must sum to 1");
    if (!(p.beta > 0.0)) throw std::invalid_argument("beta must be positive");

    // stage 1: commuting ansatz on the product of simplices
    std::mt19937 rng(777001u);
    std::uniform_real_distribution<double> uni(1e-12, 1.0);
    std::vector<std::vector<std::vector<double>>> starts;
    {
        std::vector<std::vector<double>> uniform(pn);
        for (int k = 0; k < pn; ++k) uniform[k].assign(p.r, p.rho[k] / p.r);
        starts.push_back(uniform);
        for (int k0 = 0; k0 < pn; ++k0) {
            auto spiked = uniform;
            spiked[k0].assign(p.r, 0.001 * p.rho[k0] / p.r);
            spiked[k0][0] = p.rho[k0] - 0.001 * p.rho[k0] * (p.r - 1) / p.r;
            starts.push_back(spiked);
        }
        for (int s = 0; s < 64; ++s) {
            std::vector<std::vector<double>> x(pn, std::vector<double>(p.r));
            for (int k = 0; k < pn; ++k) {
                double tot = 0.0;
                for (int i = 0; i < p.r; ++i) {
                    x[k][i] = -std::log(uni(rng));
                    tot += x[k][i];
                }
                for (int i = 0; i < p.r; ++i) x[k][i] *= p.rho[k] / tot;
            }
            starts.push_back(std::move(x));
        }
    }
    const int count = static_cast<int>(starts.size());
    std::vector<std::vector<std::vector<double>>> results(count);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int s = 0; s < count; ++s) results[s] = mb_ascend(starts[s], p);
    } else {
        for (int s = 0; s < count; ++s) results[s] = mb_ascend(starts[s], p);
    }
    MultiBlockResult out;
    int best = 0;
    double bestv = -1e300;
    for (int s = 0; s < count; ++s) {
        double v = mb_value_diag(results[s], p);
        if (v > bestv) {
            bestv = v;
            best = s;
        }
    }
    out.commuting_value = bestv;
    auto x = results[best];

    // common reordering: sort the joint index by total weight, descending
    {
        std::vector<double> s(p.r, 0.0);
        for (int k = 0; k < pn; ++k)
            for (int i = 0; i < p.r; ++i) s[i] += x[k][i];
        std::vector<int> idx(p.r);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int i, int j) { return s[i] > s[j]; });
        auto xs = x;
        for (int k = 0; k < pn; ++k)
            for (int i = 0; i < p.r; ++i) xs[k][i] = x[k][idx[i]];
        x = std::move(xs);
    }
    out.spectra = x;

    // stage 2: first-order steps over relative orthogonal conjugations
    // (Cayley parameterization); only the joint tr[(sum X)^g] products move
    double refined = bestv;
    if (pn > 1) {
        using Mat = Eigen::MatrixXd;
        auto build = [&](const std::vector<Mat>& O) {
            std::vector<Mat> X(pn);
            for (int k = 0; k < pn; ++k) {
                Mat D = Mat::Zero(p.r, p.r);
                for (int i = 0; i < p.r; ++i) D(i, i) = x[k][i];
                X[k] = O[k] * D * O[k].transpose();
            }
            return X;
        };
        auto value = [&](const std::vector<Mat>& O) {
            auto X = build(O);
            double val = 0.0;
            for (int k = 0; k < pn; ++k)
                for (int i = 0; i < p.r; ++i) val -= xlogx(x[k][i]);
            Mat Z = Mat::Zero(p.r, p.r);
            for (int k = 0; k < pn; ++k) Z += X[k];
            for (const auto& term : p.terms) {
                for (int k = 0; k < pn; ++k) {
                    double ak = k < static_cast<int>(term.a.size()) ? term.a[k] : 0.0;
                    if (ak == 0.0) continue;
                    double prod = 1.0;
                    for (int gj : term.gamma.parts().parts()) prod *= power_sum(x[k], gj);
                    val += p.beta * ak * prod;
                }
                if (term.c != 0.0) {
                    double prod = 1.0;
                    for (int gj : term.gamma.parts().parts()) {
                        Mat Zp = Mat::Identity(p.r, p.r);
                        for (int e = 0; e < gj; ++e) Zp = Zp * Z;
                        prod *= Zp.trace();
                    }
                    val += p.beta * term.c * prod;
                }
            }
            return val;
        };
        const int nskew = p.r * (p.r - 1) / 2;
        std::vector<double> theta((pn - 1) * nskew, 0.0);
        auto orthogonals = [&](const std::vector<double>& th) {
            std::vector<Mat> O(pn, Mat::Identity(p.r, p.r));
            for (int k = 1; k < pn; ++k) {
                Mat A = Mat::Zero(p.r, p.r);
                int at = (k - 1) * nskew;
                for (int i = 0; i < p.r; ++i)
                    for (int j = i + 1; j < p.r; ++j) {
                        A(i, j) = th[at];
                        A(j, i) = -th[at];
                        ++at;
                    }
                Mat I = Mat::Identity(p.r, p.r);
                O[k] = (I - 0.5 * A).inverse() * (I + 0.5 * A);  // Cayley
            }
            return O;
        };
        double fcur = value(orthogonals(theta));
        double step = 0.1;
        for (int it = 0; it < 200; ++it) {
            std::vector<double> grad(theta.size());
            const double eps = 1e-6;
            for (std::size_t j = 0; j < theta.size(); ++j) {
                auto tp = theta, tm = theta;
                tp[j] += eps;
                tm[j] -= eps;
                grad[j] = (value(orthogonals(tp)) - value(orthogonals(tm))) / (2 * eps);
            }
            double t = step;
            bool moved = false;
            for (int bt = 0; bt < 40; ++bt, t *= 0.5) {
                auto cand = theta;
                for (std::size_t j = 0; j < cand.size(); ++j) cand[j] += t * grad[j];
                double fc = value(orthogonals(cand));
                if (fc > fcur + 1e-14) {
                    theta = std::move(cand);
                    fcur = fc;
                    step = std::min(0.5, t * 4.0);
                    moved = true;
                    break;
                }
            }
            if (!moved) break;
        }
        refined = fcur;
    }
    out.refinement_gain = refined - bestv;
    out.value = std::max(refined, bestv);
    out.converged = true;
    return out;
}

BilBiqConversion bilinear_biquadratic_convert(double J1, double J2) {
    BilBiqConversion out;
    out.J1 = J1;
    out.J2 = J2;
    out.constant = J2;
    if (J1 == 0.0 && J2 == 0.0) {
        out.kind = ModelKind::AB;  // zero Hamiltonian
        out.c = 0.0;
        out.constant = 0.0;
    } else if (J1 == J2) {
        out.kind = ModelKind::AB;
        out.c = J1;
    } else if (J1 == 0.0) {
        out.kind = ModelKind::WBP;
        out.c = J2;
    } else {
        out.kind = ModelKind::BILBIQ;
        out.mixed = true;
    }
    return out;
}

}  // namespace spinmf
