#include "spinmf/groundstate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinmf {

namespace {

double quad(double a, double b, double c, double x, double y) {
    return 0.5 * (a * x * x + b * y * y + 2.0 * c * x * y);
}

ProfilePoint point_D(double rho, int r) { return omega0(rho, r); }

ProfilePoint point_F(double rho, int r) {
    ProfilePoint w{std::vector<double>(r, 0.0), std::vector<double>(r, 0.0)};
    w.x[0] = rho;
    w.y[0] = 1.0 - rho;
    return w;
}

ProfilePoint point_A(double rho, int r) {
    ProfilePoint w{std::vector<double>(r, 0.0), std::vector<double>(r, 0.0)};
    w.x[0] = rho;
    w.y[r - 1] = 1.0 - rho;
    return w;
}

ProfilePoint point_E1(double a, double b, double c, double rho, int r) {
    (void)a;
    const double rhop = 1.0 - rho;
    ProfilePoint w{std::vector<double>(r, 0.0),
                   std::vector<double>(r, (b * rhop + c * rho) / (b * r))};
    w.x[0] = rho;
    w.y[0] = (b * rhop - (r - 1) * c * rho) / (b * r);
    return w;
}

ProfilePoint point_E2(double a, double b, double c, double rho, int r) {
    (void)b;
    const double rhop = 1.0 - rho;
    ProfilePoint w{std::vector<double>(r, (a * rho + c * rhop) / (a * r)),
                   std::vector<double>(r, 0.0)};
    w.x[0] = (a * rho - (r - 1) * c * rhop) / (a * r);
    w.y[0] = rhop;
    return w;
}

ProfilePoint point_Bk(double rho, int r, int k) {
    ProfilePoint w{std::vector<double>(r, 0.0), std::vector<double>(r, 0.0)};
    for (int i = 0; i < k; ++i) w.x[i] = rho / k;
    for (int i = k; i < r; ++i) w.y[i] = (1.0 - rho) / (r - k);
    return w;
}

ProfilePoint point_Ck(double a, double b, double c, double rho, int r, int k) {
    const double rhop = 1.0 - rho;
    const double dk = k * (r + 1 - k) * a * b - (k - 1) * (r - k) * c * c;
    const double x1 = ((r + 1 - k) * rho * a * b + rhop * b * c - (r - k) * rho * c * c) / dk;
    const double x2 = ((r + 1 - k) * rho * a * b - (k - 1) * rhop * b * c) / dk;
    const double y1 = (k * rhop * a * b - (r - k) * rho * a * c) / dk;
    const double y2 = (k * rhop * a * b + rho * a * c - (k - 1) * rhop * c * c) / dk;
    ProfilePoint w{std::vector<double>(r, 0.0), std::vector<double>(r, 0.0)};
    for (int i = 0; i < k - 1; ++i) w.x[i] = x1;
    w.x[k - 1] = x2;
    w.y[k - 1] = y1;
    for (int i = k; i < r; ++i) w.y[i] = y2;
    return w;
}

// classifier for c = +1
GroundClassification classify_pos(double a, double b, double rho, int r, double tol) {
    const double c = 1.0, rhop = 1.0 - rho;
    GroundClassification out;
    if (a < 0.0 && b < 0.0 && std::abs(a * b - c * c) <= tol) {
        out.tag = RegionTag::BoundaryD;
        out.maximizers = {point_D(rho, r)};
        out.family =
            "sqrt(-a)(x_i - rho/r) = sqrt(-b)(y_i - rho'/r) for all i, "
            "x decreasing with x_r >= rho/r - sqrt(b/a) rho'/r";
        out.max_g = G_value(out.maximizers.front(), a, b, c);
        return out;
    }
    if (a < 0.0 && b < 0.0 && a * b > c * c) {
        out.tag = RegionTag::D;
        out.maximizers = {point_D(rho, r)};
    } else if (b <= -c * rho / rhop && a * b < c * c) {
        out.tag = RegionTag::E1;
        out.maximizers = {point_E1(a, b, c, rho, r)};
    } else if (a <= -c * rhop / rho && a * b < c * c) {
        out.tag = RegionTag::E2;
        out.maximizers = {point_E2(a, b, c, rho, r)};
    } else {
        out.tag = RegionTag::F;
        out.maximizers = {point_F(rho, r)};
    }
    out.max_g = G_value(out.maximizers.front(), a, b, c);
    return out;
}

// classifier for c = -1
GroundClassification classify_neg(double a, double b, double rho, int r, double tol) {
    const double c = -1.0, rhop = 1.0 - rho;
    GroundClassification out;

    auto finish = [&](GroundClassification cls) {
        cls.max_g = G_value(cls.maximizers.front(), a, b, c);
        return cls;
    };

    // closed antiferromagnetic quadrant and its edges
    if (a > tol && b > tol) {
        out.tag = RegionTag::A;
        out.maximizers = {point_A(rho, r)};
        return finish(out);
    }
    if (a > tol && std::abs(b) <= tol) {
        out.tag = RegionTag::BoundaryAEdge;
        out.maximizers = {point_A(rho, r)};
        out.family = "x_1 = rho, x_2..x_r = y_1 = 0, y free on the remaining simplex";
        return finish(out);
    }
    if (std::abs(a) <= tol && b > tol) {
        out.tag = RegionTag::BoundaryAEdge;
        out.maximizers = {point_A(rho, r)};
        out.family = "y_r = rho', x_r = y_1..y_{r-1} = 0, x free on the remaining simplex";
        return finish(out);
    }
    if (std::abs(a) <= tol && std::abs(b) <= tol) {
        out.tag = RegionTag::BoundaryAEdge;
        out.maximizers = {point_A(rho, r)};
        out.family = "x_i y_i = 0 for all i";
        return finish(out);
    }
    // disordered region and its boundary curve
    if (a < 0.0 && b < 0.0 && std::abs(a * b - c * c) <= tol) {
        out.tag = RegionTag::BoundaryD;
        out.maximizers = {point_D(rho, r)};
        out.family = "sqrt(-a)(x_i - rho/r) + sqrt(-b)(y_i - rho'/r) = 0 for all i";
        return finish(out);
    }
    if (a < 0.0 && b < 0.0 && a * b > c * c) {
        out.tag = RegionTag::D;
        out.maximizers = {point_D(rho, r)};
        return finish(out);
    }

    // corners P_k between B_k, B_{k+1} and C_{k+1}
    for (int k = 1; k <= r - 2; ++k) {
        double pa = k * rhop * c / ((r - k) * rho);
        double pb = (r - k - 1) * rho * c / ((k + 1) * rhop);
        if (std::abs(a - pa) <= tol && std::abs(b - pb) <= tol) {
            out.tag = RegionTag::PCorner;
            out.k = k;
            out.maximizers = {point_Bk(rho, r, k), point_Bk(rho, r, k + 1)};
            out.family = "segment t*omega_B" + std::to_string(k) + " + (1-t)*omega_B" +
                         std::to_string(k + 1) + ", t in [0,1]";
            return finish(out);
        }
    }
    // segments between B_k and B_{k+1} (on the line through the origin and P_k)
    for (int k = 1; k <= r - 2; ++k) {
        double pa = k * rhop * c / ((r - k) * rho);
        double lhs = (r - k) * (r - k - 1) * rho * rho * a;
        double rhs = k * (k + 1) * rhop * rhop * b;
        double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
        if (std::abs(lhs - rhs) <= tol * scale && a > pa + tol && a < -tol) {
            out.tag = RegionTag::BBBoundary;
            out.k = k;
            out.maximizers = {point_Bk(rho, r, k), point_Bk(rho, r, k + 1)};
            return finish(out);
        }
    }
    // zig-zag segments: B_k / C_k boundaries (b equality) and B_k / C_{k+1} (a equality)
    for (int k = 1; k <= r - 1; ++k) {
        double qb = (r - k) * rho * c / (k * rhop);
        double qa = k * rhop * c / ((r - k) * rho);
        if (std::abs(b - qb) <= tol && a >= qa - tol) {
            out.tag = RegionTag::BCBoundary;
            out.k = k;
            out.maximizers = {point_Bk(rho, r, k)};
            return finish(out);
        }
        if (std::abs(a - qa) <= tol && b >= qb - tol) {
            out.tag = RegionTag::BCBoundary;
            out.k = k;
            out.maximizers = {point_Bk(rho, r, k)};
            return finish(out);
        }
    }

    // open regions B_k; for r = 2 the two one-sided definitions both carry
    // index 1 and their union is the whole B region (with omega_B1 = omega_A)
    auto in_Bk = [&](int k) {
        if (r == 2)
            return (a > rhop * c / rho && b > rho * c / rhop && b < 0) ||
                   (a > rhop * c / rho && a < 0 && b > rho * c / rhop);
        if (k == 1)
            return a > rhop * c / ((r - 1) * rho) && b > (r - 1) * rho * c / rhop && b < 0 &&
                   rho * rho * (r - 1) * (r - 2) * a > 2.0 * rhop * rhop * b;
        if (k == r - 1)
            return a > (r - 1) * rhop * c / rho && a < 0 && b > rho * c / ((r - 1) * rhop) &&
                   2.0 * rho * rho * a < rhop * rhop * (r - 1) * (r - 2) * b;
        return a > k * rhop * c / ((r - k) * rho) && b > (r - k) * rho * c / (k * rhop) &&
               (r - k) * (r - k - 1) * rho * rho * a > k * (k + 1) * rhop * rhop * b &&
               (r - k + 1) * (r - k) * rho * rho * a < (k - 1) * k * rhop * rhop * b;
    };
    for (int k = 1; k <= r - 1; ++k)
        if (in_Bk(k)) {
            out.tag = RegionTag::Bk;
            out.k = k;
            out.maximizers = {point_Bk(rho, r, k)};
            return finish(out);
        }
    // open regions C_k
    auto in_Ck = [&](int k) {
        if (a * b >= c * c) return false;
        if (k == 1) return b < (r - 1) * rho * c / rhop;
        if (k == r) return a < (r - 1) * rhop * c / rho;
        return a < (k - 1) * rhop * c / ((r - k + 1) * rho) && b < (r - k) * rho * c / (k * rhop);
    };
    for (int k = 1; k <= r; ++k)
        if (in_Ck(k)) {
            out.tag = RegionTag::Ck;
            out.k = k;
            out.maximizers = {point_Ck(a, b, c, rho, r, k)};
            return finish(out);
        }

    throw std::runtime_error("classify_ground_state: point not covered by any region test");
}

}  // namespace

std::string region_name(RegionTag tag, int k) {
    switch (tag) {
        case RegionTag::D:
            return "D";
        case RegionTag::BoundaryD:
            return "dD";
        case RegionTag::E1:
            return "E1";
        case RegionTag::E2:
            return "E2";
        case RegionTag::F:
            return "F";
        case RegionTag::A:
            return "A";
        case RegionTag::BoundaryAEdge:
            return "dA";
        case RegionTag::Bk:
            return "B" + std::to_string(k);
        case RegionTag::Ck:
            return "C" + std::to_string(k);
        case RegionTag::PCorner:
            return "P" + std::to_string(k);
        case RegionTag::BBBoundary:
            return "B" + std::to_string(k) + "|B" + std::to_string(k + 1);
        case RegionTag::BCBoundary:
            return "B" + std::to_string(k) + "|C";
    }
    return "?";
}

double G_value(const ProfilePoint& w, double a, double b, double c) {
    double g = 0.0;
    for (std::size_t i = 0; i < w.x.size(); ++i) g += quad(a, b, c, w.x[i], w.y[i]);
    return g;
}

GroundClassification classify_ground_state(double a, double b, double c, double rho, int r,
                                           double tol) {
    if (c == 0.0)
        throw std::invalid_argument(
            "classify_ground_state: c = 0 decouples the blocks (not classified here)");
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must be in (0,1)");
    if (r < 2) throw std::invalid_argument("r must be >= 2");
    const double s = std::abs(c);
    GroundClassification out = c > 0.0 ? classify_pos(a / s, b / s, rho, r, tol)
                                       : classify_neg(a / s, b / s, rho, r, tol);
    out.max_g *= s;
    return out;
}

double ground_magnetisation(const GroundClassification& cls, double a, double b, double c,
                            double rho, double w1) {
    if (c <= 0.0) throw std::invalid_argument("ground_magnetisation: requires c > 0");
    switch (cls.tag) {
        case RegionTag::D:
            return 0.0;
        case RegionTag::E1:
            return (1.0 - c / b) * rho * w1;
        case RegionTag::E2:
            return (1.0 - c / a) * (1.0 - rho) * w1;
        case RegionTag::F:
            return w1;
        case RegionTag::BoundaryD:
            throw std::invalid_argument("ground_magnetisation: undefined on the boundary of D");
        default:
            throw std::invalid_argument("ground_magnetisation: not a c > 0 region");
    }
}

std::vector<GridCell> diagram_grid(double a_min, double a_max, double b_min, double b_max,
                                   int res_a, int res_b, double c, double rho, int r, Exec exec) {
    if (res_a < 2 || res_b < 2) throw std::invalid_argument("diagram_grid: resolution >= 2");
    std::vector<GridCell> cells(static_cast<std::size_t>(res_a) * res_b);
    auto fill = [&](int idx) {
        int ia = idx / res_b, ib = idx % res_b;
        double a = a_min + (a_max - a_min) * ia / (res_a - 1);
        double b = b_min + (b_max - b_min) * ib / (res_b - 1);
        GroundClassification cls = classify_ground_state(a, b, c, rho, r);
        cells[idx] = {a, b, cls.tag, cls.k, cls.max_g};
    };
    const int total = res_a * res_b;
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (int idx = 0; idx < total; ++idx) fill(idx);
    } else {
        for (int idx = 0; idx < total; ++idx) fill(idx);
    }
    return cells;
}

}  // namespace spinmf
