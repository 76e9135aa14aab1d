#include "doctest.h"

#include <Eigen/Dense>

#include <random>

#include "spinmf/operators.hpp"

using namespace spinmf;

namespace {

Eigen::VectorXd sorted_spectrum(const DenseOperator& M) {
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(M, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

ModelInstance two_block(ModelKind kind, int r, int n, int m, double a, double b, double c) {
    ModelInstance inst;
    inst.kind = kind;
    inst.r = r;
    inst.n = n;
    inst.m = m;
    inst.a = a;
    inst.b = b;
    inst.c = c;
    return inst;
}

}  // namespace

TEST_CASE("transposition operator") {
    auto T = build_transposition(1, 2, 2, 2);
    auto ev = sorted_spectrum(T);
    CHECK(ev[0] == doctest::Approx(-1.0));
    CHECK(ev[1] == doctest::Approx(1.0));
    CHECK(ev[3] == doctest::Approx(1.0));
    CHECK(build_transposition(1, 2, 2, 3).trace() == doctest::Approx(3.0));
    // involution on a bigger space
    auto T13 = build_transposition(1, 3, 3, 2);
    CHECK((T13 * T13 - DenseOperator::Identity(8, 8)).norm() == doctest::Approx(0.0));
    CHECK_THROWS(build_transposition(2, 2, 3, 2));
    CHECK_THROWS(build_transposition(1, 2, 15, 2));  // size guard
}

TEST_CASE("Q operator") {
    auto Q = build_Q(1, 2, 2, 2);
    auto ev = sorted_spectrum(Q);
    CHECK(ev[3] == doctest::Approx(2.0));
    CHECK(ev[2] == doctest::Approx(0.0));
    CHECK(build_Q(1, 2, 2, 3).trace() == doctest::Approx(3.0));
    for (int r = 2; r <= 4; ++r) {
        auto Qr = build_Q(1, 2, 2, r);
        CHECK((Qr * Qr - double(r) * Qr).norm() == doctest::Approx(0.0));
        CHECK((Qr - Qr.transpose()).norm() == doctest::Approx(0.0));
    }
}

TEST_CASE("P operator") {
    auto P = build_P(1, 2, 2, 2);
    // restricted to span{ud, du}: [[1,-1],[-1,1]] with basis indices 1 = du, 2 = ud
    CHECK(P(1, 1) == doctest::Approx(1.0));
    CHECK(P(2, 2) == doctest::Approx(1.0));
    CHECK(P(1, 2) == doctest::Approx(-1.0));
    CHECK(P(2, 1) == doctest::Approx(-1.0));
    auto ev = sorted_spectrum(P);
    CHECK(ev[3] == doctest::Approx(2.0));
    CHECK(ev[2] == doctest::Approx(0.0));
    for (int r = 2; r <= 4; ++r) {
        auto Pr = build_P(1, 2, 2, r);
        CHECK((Pr * Pr - double(r) * Pr).norm() == doctest::Approx(0.0));
        CHECK((Pr - Pr.transpose()).norm() == doctest::Approx(0.0));
        CHECK(Pr.trace() == doctest::Approx(double(r)));
    }
}

TEST_CASE("spin-half transposition identity T = 2 S.S + 1/2") {
    // explicit spin-1/2 matrices on two sites
    Eigen::Matrix2d sx, sz;
    Eigen::Matrix2cd sy;
    sx << 0, 0.5, 0.5, 0;
    sz << -0.5, 0, 0, 0.5;  // digit 0 = down, 1 = up
    sy << 0, std::complex<double>(0, 0.5), std::complex<double>(0, -0.5), 0;
    auto kron = [](const Eigen::Matrix2cd& A, const Eigen::Matrix2cd& B) {
        Eigen::Matrix4cd K;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) K.block<2, 2>(2 * i, 2 * j) = A(i, j) * B;
        return K;
    };
    // site 1 is the least significant digit: operator on site 1 sits right
    Eigen::Matrix4cd SS = kron(sx.cast<std::complex<double>>(), sx.cast<std::complex<double>>()) +
                          kron(sy, sy) +
                          kron(sz.cast<std::complex<double>>(), sz.cast<std::complex<double>>());
    Eigen::Matrix4cd T = 2.0 * SS + 0.5 * Eigen::Matrix4cd::Identity();
    auto Tb = build_transposition(1, 2, 2, 2);
    CHECK((T - Tb.cast<std::complex<double>>()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("permutation operators") {
    auto id = build_perm_operator({1, 2, 3}, 3, 2);
    CHECK((id - DenseOperator::Identity(8, 8)).norm() == doctest::Approx(0.0));
    auto cyc = build_perm_operator({2, 3, 1}, 3, 2);
    CHECK(cyc.trace() == doctest::Approx(2.0));  // r^{#cycles} = 2^1
    auto t12 = build_perm_operator({2, 1, 3}, 3, 2);
    CHECK((t12 - build_transposition(1, 2, 3, 2)).norm() == doctest::Approx(0.0));

    // homomorphism and trace = r^{#cycles} over all of S_4, r=2,3
    for (int r = 2; r <= 3; ++r) {
        std::vector<int> perm{1, 2, 3, 4};
        do {
            auto Tp = build_perm_operator(perm, 4, r);
            std::vector<bool> seen(4, false);
            int cycles = 0;
            for (int s = 0; s < 4; ++s) {
                if (seen[s]) continue;
                ++cycles;
                int cur = s;
                while (!seen[cur]) {
                    seen[cur] = true;
                    cur = perm[cur] - 1;
                }
            }
            CHECK(Tp.trace() == doctest::Approx(std::pow(double(r), cycles)));
        } while (std::next_permutation(perm.begin(), perm.end()));
        // T_sigma T_tau = T_{sigma tau} on a sample pair
        std::vector<int> s1{2, 3, 1, 4}, s2{2, 1, 4, 3}, comp(4);
        for (int k = 0; k < 4; ++k) comp[k] = s1[s2[k] - 1];
        CHECK((build_perm_operator(s1, 4, r) * build_perm_operator(s2, 4, r) -
               build_perm_operator(comp, 4, r))
                  .norm() == doctest::Approx(0.0));
    }
}

TEST_CASE("hamiltonian AB small") {
    auto H = hamiltonian(two_block(ModelKind::AB, 2, 2, 2, 1, 0, 0));
    auto ev = sorted_spectrum(H);
    CHECK(ev[0] == doctest::Approx(-0.5));
    CHECK(ev[2] == doctest::Approx(-0.5));
    CHECK(ev[3] == doctest::Approx(0.5));
    CHECK(partition_function(H, 1.0) ==
          doctest::Approx(3 * std::exp(0.5) + std::exp(-0.5)).epsilon(1e-12));

    auto Hc = hamiltonian(two_block(ModelKind::AB, 2, 2, 1, 0, 0, 1));
    CHECK(partition_function(Hc, 1.0) ==
          doctest::Approx(3 * std::exp(0.5) + std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("hamiltonian symmetry and beta limits") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(-2, 2);
    for (auto kind : {ModelKind::AB, ModelKind::WBQ, ModelKind::WBP}) {
        auto inst = two_block(kind, 2, 4, 2, uni(rng), uni(rng), uni(rng));
        auto H = hamiltonian(inst);
        CHECK((H - H.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(partition_function(H, 1e-9) == doctest::Approx(16.0).epsilon(1e-6));
    }
}

TEST_CASE("MB hamiltonian: single transposition term unrolls to pair sums") {
    ModelInstance inst;
    inst.kind = ModelKind::MB;
    inst.r = 2;
    inst.n = 3;
    inst.block_sizes = {3};
    inst.terms = {GammaTerm{CycleType{2}, {}, 0.5}};
    auto H = hamiltonian(inst);
    // -n * c / |C| * sum T = -(3 * 0.5 / 3) * sum_{i<j} T_{ij}
    DenseOperator S = DenseOperator::Zero(8, 8);
    for (int i = 1; i <= 3; ++i)
        for (int j = i + 1; j <= 3; ++j) S += build_transposition(i, j, 3, 2);
    CHECK((H + 0.5 * S).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("thermal expectation") {
    auto inst = two_block(ModelKind::AB, 2, 3, 2, 1, 0, -1);
    auto H = hamiltonian(inst);
    auto I = DenseOperator::Identity(8, 8);
    CHECK(thermal_expectation(H, 1.3, I) == doctest::Approx(1.0).epsilon(1e-12));
    // O = H at small beta tends to tr[H]/dim
    CHECK(thermal_expectation(H, 1e-9, H) == doctest::Approx(H.trace() / 8.0).epsilon(1e-5));
}

TEST_CASE("magnetized partition function") {
    auto inst = two_block(ModelKind::AB, 2, 4, 2, 1, 1, 1);
    auto H = hamiltonian(inst);
    double z0 = partition_function(H, 1.2);
    CHECK(magnetized_partition_function(inst, 1.2, {1.0, 0.0}, 0.0) ==
          doctest::Approx(z0).epsilon(1e-12));
    CHECK(magnetized_partition_function(inst, 1.2, {0.0, 0.0}, 0.7) ==
          doctest::Approx(z0).epsilon(1e-12));
    // monotone increase in h for w = (1,0) at n = 6 (log-convexity around h=0)
    auto inst6 = two_block(ModelKind::AB, 2, 6, 3, 1, 1, 1);
    double prev = magnetized_partition_function(inst6, 1.0, {1.0, 0.0}, 0.0);
    for (double h : {0.25, 0.5, 1.0}) {
        double cur = magnetized_partition_function(inst6, 1.0, {1.0, 0.0}, h);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("WB-Q and WB-P spectra coincide") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> uni(-2, 2);
    for (auto [n, r] : std::vector<std::pair<int, int>>{{2, 2}, {4, 2}, {3, 3}, {3, 4}}) {
        double a = uni(rng), b = uni(rng), c = uni(rng);
        auto q = two_block(ModelKind::WBQ, r, n, n / 2 + (n == 3 ? 1 : 0), a, b, c);
        auto p = q;
        p.kind = ModelKind::WBP;
        auto rep = spectra_equal_under_equivalence(q, p);
        CHECK(rep.spectral_gap <= 1e-10);
        if (r == 3) {
            CHECK(rep.psi_antisym_err >= 0.0);
            CHECK(rep.psi_antisym_err <= 1e-12);
            CHECK(rep.psi_conj_err <= 1e-12);
        }
        if (r % 2 == 0) CHECK(rep.pair_conj_err <= 1e-12);
    }
}
