#include "doctest.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

#include "spinmf/variational.hpp"

using namespace spinmf;

namespace {

TwoBlockParams params(double a, double b, double c, double rho, int r, double beta) {
    return TwoBlockParams{a, b, c, rho, r, beta};
}

ProfilePoint random_profile(std::mt19937& rng, double rho, int r) {
    std::uniform_real_distribution<double> uni(1e-9, 1.0);
    ProfilePoint w{std::vector<double>(r), std::vector<double>(r)};
    double sx = 0, sy = 0;
    for (int i = 0; i < r; ++i) {
        w.x[i] = uni(rng);
        w.y[i] = uni(rng);
        sx += w.x[i];
        sy += w.y[i];
    }
    for (int i = 0; i < r; ++i) {
        w.x[i] *= rho / sx;
        w.y[i] *= (1 - rho) / sy;
    }
    return w;
}

double max_diff(const ProfilePoint& u, const ProfilePoint& v) {
    double d = 0;
    for (std::size_t i = 0; i < u.x.size(); ++i)
        d = std::max({d, std::abs(u.x[i] - v.x[i]), std::abs(u.y[i] - v.y[i])});
    return d;
}

}  // namespace

TEST_CASE("F_value basics") {
    // beta -> 0: entropy of the uniform split
    auto p = params(1, 1, 1, 0.4, 3, 1e-300);
    double expect = std::log(3.0) - 0.4 * std::log(0.4) - 0.6 * std::log(0.6);
    CHECK(F_value(omega0(0.4, 3), p) == doctest::Approx(expect).epsilon(1e-12));
    // r=2, rho=1/2, a=b=c=1, beta=2 at omega0: log 4 + 1/2
    auto p2 = params(1, 1, 1, 0.5, 2, 2.0);
    CHECK(F_value(omega0(0.5, 2), p2) == doctest::Approx(std::log(4.0) + 0.5).epsilon(1e-12));
    // 0 log 0 = 0 keeps degenerate entries finite
    ProfilePoint w{{0.5, 0.0}, {0.25, 0.25}};
    CHECK(std::isfinite(F_value(w, p2)));
}

TEST_CASE("ordering optimality: canonical pairing dominates all y-permutations") {
    std::mt19937 rng(11);
    for (int r = 2; r <= 4; ++r)
        for (double c : {1.0, -1.0})
            for (int rep = 0; rep < 20; ++rep) {
                auto p = params(0.7, -0.4, c, 0.35, r, 1.7);
                ProfilePoint w = random_profile(rng, p.rho, r);
                ProfilePoint canon = w;
                canonical_order(canon, c);
                std::sort(w.x.rbegin(), w.x.rend());
                std::vector<double> perm = w.y;
                std::sort(perm.begin(), perm.end());
                double best = F_value(canon, p);
                do {
                    ProfilePoint q{w.x, perm};
                    CHECK(F_value(q, p) <= best + 1e-12);
                } while (std::next_permutation(perm.begin(), perm.end()));
            }
}

TEST_CASE("omega0 is a stationary point for arbitrary parameters") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> uni(-2, 2);
    for (int rep = 0; rep < 25; ++rep) {
        auto p = params(uni(rng), uni(rng), uni(rng), 0.3, 3, 1.5);
        ProfilePoint w0 = omega0(p.rho, p.r);
        double f0 = F_value(w0, p);
        // projected gradient vanishes: finite differences along simplex directions
        for (int i = 1; i < p.r; ++i) {
            double eps = 1e-7;
            ProfilePoint wp = w0;
            wp.x[0] += eps;
            wp.x[i] -= eps;
            CHECK(std::abs(F_value(wp, p) - f0) < 1e-10);
            wp = w0;
            wp.y[0] += eps;
            wp.y[i] -= eps;
            CHECK(std::abs(F_value(wp, p) - f0) < 1e-10);
        }
    }
}

TEST_CASE("maximize_F below/at/above the tcond critical point") {
    // r=3, c=1, t=0, rho=1/2: beta_crit = 4 log 2, omega1 = (1/3,1/12,1/12;...)
    const double bc = 4 * std::log(2.0);
    auto below = maximize_F(params(1, 1, 1, 0.5, 3, 1.0));
    CHECK(below.points.size() == 1);
    CHECK(below.at_omega0);
    CHECK(max_diff(below.points[0], omega0(0.5, 3)) < 1e-9);

    auto at = maximize_F(params(1, 1, 1, 0.5, 3, bc));
    REQUIRE(at.points.size() == 2);
    CHECK(at.at_omega0);
    ProfilePoint w1 = omega1(0.5, 3);
    CHECK(w1.x[0] == doctest::Approx(1.0 / 3));
    CHECK(w1.x[1] == doctest::Approx(1.0 / 12));
    bool found_w1 = max_diff(at.points[0], w1) < 1e-6 || max_diff(at.points[1], w1) < 1e-6;
    CHECK(found_w1);

    auto above = maximize_F(params(1, 1, 1, 0.5, 3, bc + 0.01));
    CHECK(above.points.size() == 1);
    CHECK_FALSE(above.at_omega0);
    CHECK(max_diff(above.points[0], w1) < 0.05);
}

TEST_CASE("maximizers satisfy the two-value form for c>0") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> uni(-2, 2), unic(0.1, 2), unib(0.3, 4);
    for (int rep = 0; rep < 30; ++rep) {
        auto p = params(uni(rng), uni(rng), unic(rng), 0.4, 4, unib(rng));
        auto rep_max = maximize_F(p);
        for (const auto& q : rep_max.points) {
            for (int i = 2; i < p.r; ++i) {
                CHECK(std::abs(q.x[i] - q.x[1]) < 1e-7);
                CHECK(std::abs(q.y[i] - q.y[1]) < 1e-7);
            }
        }
    }
}

TEST_CASE("free energy limits and identities") {
    // beta -> 0
    auto fe = free_energy(params(1, -1, 2, 0.3, 3, 1e-6));
    double expect = std::log(3.0) - 0.3 * std::log(0.3) - 0.7 * std::log(0.7);
    CHECK(fe.value == doctest::Approx(expect).epsilon(1e-5));
    CHECK(fe.z_comparable == doctest::Approx(std::log(3.0)).epsilon(1e-4));
    // WB evaluation route gives the same number
    for (double beta : {0.7, 2.5}) {
        auto pab = params(1.0, -0.5, 1.5, 0.4, 2, beta);
        double vab = free_energy(pab, ModelKind::AB).value;
        double vwb = free_energy(pab, ModelKind::WBQ).value;
        CHECK(std::abs(vab - vwb) <= 1e-10);
    }
    // r=2 sign-flip identity Phi(a,b,-c) + beta c rho rho' = Phi(a,b,c);
    // the printed form without beta is its beta = 1 specialization
    for (double beta : {1.0, 1.9})
        for (double c : {0.5, 1.0, 2.0}) {
            auto plus = free_energy(params(0.7, -0.3, c, 0.35, 2, beta)).value;
            auto minus = free_energy(params(0.7, -0.3, -c, 0.35, 2, beta)).value;
            CHECK(plus == doctest::Approx(minus + beta * c * 0.35 * 0.65).epsilon(1e-9));
        }
}

TEST_CASE("energy-entropy split") {
    auto p = params(1, 1, 1, 0.5, 3, 4 * std::log(2.0));
    auto at0 = energy_entropy_split(omega0(p.rho, p.r), p);
    CHECK(std::abs(at0.energy) < 1e-14);
    CHECK(std::abs(at0.entropy) < 1e-14);
    // omega1 closed forms under the t-condition (t=0, c=1)
    auto at1 = energy_entropy_split(omega1(p.rho, p.r), p);
    CHECK(at1.entropy == doctest::Approx(-(1.0 / 3) * std::log(2.0)).epsilon(1e-12));
    CHECK(at1.energy == doctest::Approx((1.0 / 6) * 0.5).epsilon(1e-12));
    // identity beta*E + H = F - F(omega0) on random profiles
    std::mt19937 rng(9);
    for (int rep = 0; rep < 40; ++rep) {
        auto pr = params(0.8, -1.2, 0.9, 0.45, 4, 2.2);
        ProfilePoint w = random_profile(rng, pr.rho, pr.r);
        auto split = energy_entropy_split(w, pr);
        CHECK(split.entropy <= 1e-12);
        double lhs = pr.beta * split.energy + split.entropy;
        double rhs = F_value(w, pr) - F_value(omega0(pr.rho, pr.r), pr);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("gamma_value") {
    CHECK(gamma_value(1, 1, 1, 0.5) == doctest::Approx(2.0));
    CHECK(gamma_value(0, 0, 1, 0.5) == doctest::Approx(4.0));
    CHECK(gamma_value(1, 1, 1, 0.5) == doctest::Approx(2.0 / (1.0 + 0.0)));  // 2/(c+t), t=0
    CHECK_THROWS(gamma_value(-1, -1, 0.5, 0.5));
}

TEST_CASE("beta_crit closed forms and numeric agreement") {
    auto b1 = beta_crit(1, 1, 1, 0.5, 2);
    REQUIRE(b1.value.has_value());
    CHECK(*b1.value == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(b1.method == "closed-form-r2");

    auto b2 = beta_crit(0, 0, 1, 0.5, 2);
    REQUIRE(b2.value.has_value());
    CHECK(*b2.value == doctest::Approx(4.0).epsilon(1e-14));

    auto b3 = beta_crit(1, 1, 1, 0.5, 3);
    REQUIRE(b3.value.has_value());
    CHECK(*b3.value == doctest::Approx(4 * std::log(2.0)).epsilon(1e-14));
    CHECK(b3.method == "closed-form-tcond");

    auto none = beta_crit(-1, -1, 1, 0.5, 2);
    CHECK_FALSE(none.value.has_value());
    CHECK(none.reason == "Q negative semidefinite");

    // numeric bisection reproduces each closed form
    for (auto [a, b, c, rho, r, expect] :
         std::vector<std::tuple<double, double, double, double, int, double>>{
             {1, 1, 1, 0.5, 2, 2.0},
             {0, 0, 1, 0.5, 2, 4.0},
             {1, 1, 1, 0.5, 3, 4 * std::log(2.0)}}) {
        auto num = beta_crit(a, b, c, rho, r, true);
        REQUIRE(num.value.has_value());
        CHECK(num.method == "bisection");
        CHECK(std::abs(*num.value - expect) < 1e-4);
    }
}

TEST_CASE("bound sandwich for the numeric critical point") {
    // parameters without a closed form: c>0, tcond violated
    double a = 0.6, b = -0.2, c = 1.0, rho = 0.37;
    int r = 3;
    auto num = beta_crit(a, b, c, rho, r, true);
    REQUIRE(num.value.has_value());
    double gamma = gamma_value(a, b, c, rho);
    double beta_h = 2 * (r - 1) * std::log(double(r - 1)) / (r - 2);
    double lo = 0.5 * beta_h * gamma;
    double hi = 0.5 * r * gamma;
    double q = 0.5 * (a * rho * rho + b * (1 - rho) * (1 - rho) + 2 * c * rho * (1 - rho));
    if (q > 0) hi = std::min(hi, beta_h / (2 * q));
    CHECK(*num.value >= lo - 1e-4);
    CHECK(*num.value <= hi + 1e-4);
}

TEST_CASE("trace inequality under random orthogonal conjugation") {
    std::mt19937 rng(31);
    std::normal_distribution<double> gauss;
    const int r = 4;
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> x(r), y(r);
    for (int i = 0; i < r; ++i) {
        x[i] = uni(rng);
        y[i] = uni(rng);
    }
    std::sort(x.rbegin(), x.rend());
    std::sort(y.rbegin(), y.rend());
    double upper = 0, lower = 0;
    for (int i = 0; i < r; ++i) {
        upper += x[i] * y[i];
        lower += x[i] * y[r - 1 - i];
    }
    Eigen::MatrixXd Dx = Eigen::MatrixXd::Zero(r, r), Dy = Eigen::MatrixXd::Zero(r, r);
    for (int i = 0; i < r; ++i) {
        Dx(i, i) = x[i];
        Dy(i, i) = y[i];
    }
    for (int rep = 0; rep < 1000; ++rep) {
        Eigen::MatrixXd A(r, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) A(i, j) = gauss(rng);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
        Eigen::MatrixXd Qm = qr.householderQ();
        double t = (Dx * Qm * Dy * Qm.transpose()).trace();
        CHECK(t <= upper + 1e-12);
        CHECK(t >= lower - 1e-12);
    }
}

TEST_CASE("multi-block reductions") {
    // p=1, Gamma={(2)}, c=1/2: homogeneous interchange; transition at beta 2 (r=2)
    MultiBlockParams hom;
    hom.rho = {1.0};
    hom.r = 2;
    hom.terms = {GammaTerm{CycleType{2}, {}, 0.5}};
    // S(uniform) + beta * c * sum x_i^2
    auto uniform_value = [](double beta) { return std::log(2.0) + beta * 0.5 * 0.5; };
    hom.beta = 1.9;
    CHECK(multi_block_free_energy(hom).value == doctest::Approx(uniform_value(1.9)).epsilon(1e-9));
    hom.beta = 2.1;
    CHECK(multi_block_free_energy(hom).value > uniform_value(2.1) + 1e-6);

    // r=3: transition at 4 log 2
    MultiBlockParams hom3 = hom;
    hom3.r = 3;
    double bc3 = 4 * std::log(2.0);
    auto uniform3 = [&](double beta) { return std::log(3.0) + beta * 0.5 / 3.0; };
    hom3.beta = bc3 - 0.05;
    CHECK(multi_block_free_energy(hom3).value ==
          doctest::Approx(uniform3(bc3 - 0.05)).epsilon(1e-9));
    hom3.beta = bc3 + 0.05;
    CHECK(multi_block_free_energy(hom3).value > uniform3(bc3 + 0.05) + 1e-7);

    // p=2, Gamma={(2)} with a1=(a-c)/2, a2=(b-c)/2, c=(c)/2 equals the AB value
    double a = 1.0, b = -1.0, c = 2.0, rho = 0.4, beta = 1.2;
    MultiBlockParams two;
    two.rho = {rho, 1 - rho};
    two.r = 2;
    two.beta = beta;
    two.terms = {GammaTerm{CycleType{2}, {(a - c) / 2, (b - c) / 2}, c / 2}};
    auto mb = multi_block_free_energy(two);
    auto fe = free_energy(params(a, b, c, rho, 2, beta));
    CHECK(mb.value == doctest::Approx(fe.value).epsilon(1e-7));
    CHECK(mb.refinement_gain <= 1e-7);  // commuting ansatz already optimal here
}

TEST_CASE("bilinear-biquadratic conversion") {
    auto ab = bilinear_biquadratic_convert(1.0, 1.0);
    CHECK(ab.kind == ModelKind::AB);
    CHECK(ab.c == doctest::Approx(1.0));
    auto wb = bilinear_biquadratic_convert(0.0, 1.0);
    CHECK(wb.kind == ModelKind::WBP);
    CHECK(wb.c == doctest::Approx(1.0));
    auto zero = bilinear_biquadratic_convert(0.0, 0.0);
    CHECK(zero.kind == ModelKind::AB);
    CHECK(zero.c == doctest::Approx(0.0));
    auto mixed = bilinear_biquadratic_convert(0.5, -1.0);
    CHECK(mixed.mixed);
    CHECK(mixed.kind == ModelKind::BILBIQ);
}
