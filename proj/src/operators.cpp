#include "spinmf/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "spinmf/combinatorics.hpp"

namespace spinmf {

namespace {

long long pow_ll(int r, int n) {
    long long d = 1;
    for (int i = 0; i < n; ++i) d *= r;
    return d;
}

inline int digit(long long idx, int site, const std::vector<long long>& stride, int r) {
    return static_cast<int>((idx / stride[site - 1]) % r);
}

std::vector<long long> strides(int n, int r) {
    std::vector<long long> s(n);
    s[0] = 1;
    for (int i = 1; i < n; ++i) s[i] = s[i - 1] * r;
    return s;
}

// cycle type (nontrivial cycle lengths, decreasing) of images[i] over 0..k-1
std::vector<int> cycle_type_of(const std::vector<int>& images) {
    const int k = static_cast<int>(images.size());
    std::vector<bool> seen(k, false);
    std::vector<int> type;
    for (int s = 0; s < k; ++s) {
        if (seen[s]) continue;
        int len = 0, cur = s;
        while (!seen[cur]) {
            seen[cur] = true;
            cur = images[cur];
            ++len;
        }
        if (len > 1) type.push_back(len);
    }
    std::sort(type.rbegin(), type.rend());
    return type;
}

// average of T_sigma over sigma in the conjugacy class of cycle type gamma
// acting on the given sites (1-based), identity elsewhere
DenseOperator class_average(const CycleType& gamma, const std::vector<int>& sites, int n, int r) {
    const long long dim = pow_ll(r, n);
    const auto st = strides(n, r);
    const int k = static_cast<int>(sites.size());
    const std::vector<int>& want = gamma.parts().parts();

    DenseOperator acc = DenseOperator::Zero(dim, dim);
    std::vector<int> images(k);
    std::iota(images.begin(), images.end(), 0);
    long long members = 0;
    do {
        if (cycle_type_of(images) != want) continue;
        ++members;
        // sigma: site sites[j] -> sites[images[j]]
        for (long long col = 0; col < dim; ++col) {
            long long row = col;
            for (int j = 0; j < k; ++j) {
                // beta_{sigma(k)} = alpha_k: move digit at sites[j] to sites[images[j]]
                int d_from = digit(col, sites[j], st, r);
                int d_to = digit(row, sites[images[j]], st, r);
                row += static_cast<long long>(d_from - d_to) * st[sites[images[j]] - 1];
            }
            acc(row, col) += 1.0;
        }
    } while (std::next_permutation(images.begin(), images.end()));
    if (members == 0) throw std::invalid_argument("class_average: empty conjugacy class");
    return acc / static_cast<double>(members);
}

}  // namespace

void check_dims(int n, int r) {
    if (r < 2) throw std::invalid_argument("r must be >= 2");
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    double d = std::pow(double(r), double(n));
    if (d > 20000.0) throw std::invalid_argument("refusing r^n > 20000");
}

DenseOperator build_transposition(int i, int j, int n, int r) {
    if (!(1 <= i && i < j && j <= n)) throw std::invalid_argument("need 1 <= i < j <= n");
    check_dims(n, r);
    const long long dim = pow_ll(r, n);
    const auto st = strides(n, r);
    DenseOperator T = DenseOperator::Zero(dim, dim);
    for (long long col = 0; col < dim; ++col) {
        int di = digit(col, i, st, r), dj = digit(col, j, st, r);
        long long row = col + static_cast<long long>(dj - di) * st[i - 1] +
                        static_cast<long long>(di - dj) * st[j - 1];
        T(row, col) = 1.0;
    }
    return T;
}

DenseOperator build_Q(int i, int j, int n, int r) {
    if (!(1 <= i && i < j && j <= n)) throw std::invalid_argument("need 1 <= i < j <= n");
    check_dims(n, r);
    const long long dim = pow_ll(r, n);
    const auto st = strides(n, r);
    DenseOperator Q = DenseOperator::Zero(dim, dim);
    for (long long col = 0; col < dim; ++col) {
        if (digit(col, i, st, r) != digit(col, j, st, r)) continue;
        long long base = col - static_cast<long long>(digit(col, i, st, r)) * st[i - 1] -
                         static_cast<long long>(digit(col, j, st, r)) * st[j - 1];
        for (int d = 0; d < r; ++d) {
            long long row = base + static_cast<long long>(d) * (st[i - 1] + st[j - 1]);
            Q(row, col) = 1.0;
        }
    }
    return Q;
}

DenseOperator build_P(int i, int j, int n, int r) {
    if (!(1 <= i && i < j && j <= n)) throw std::invalid_argument("need 1 <= i < j <= n");
    check_dims(n, r);
    const long long dim = pow_ll(r, n);
    const auto st = strides(n, r);
    DenseOperator P = DenseOperator::Zero(dim, dim);
    // digit d corresponds to spin label a = d - S; a2 = -a1 means d2 = r-1-d1
    for (long long col = 0; col < dim; ++col) {
        int d3 = digit(col, i, st, r);
        if (digit(col, j, st, r) != r - 1 - d3) continue;
        long long base = col - static_cast<long long>(d3) * st[i - 1] -
                         static_cast<long long>(r - 1 - d3) * st[j - 1];
        for (int d1 = 0; d1 < r; ++d1) {
            long long row = base + static_cast<long long>(d1) * st[i - 1] +
                            static_cast<long long>(r - 1 - d1) * st[j - 1];
            P(row, col) = ((d1 - d3) % 2 == 0) ? 1.0 : -1.0;
        }
    }
    return P;
}

DenseOperator build_perm_operator(const std::vector<int>& sigma, int n, int r) {
    if (static_cast<int>(sigma.size()) != n)
        throw std::invalid_argument("permutation must have n entries");
    check_dims(n, r);
    const long long dim = pow_ll(r, n);
    const auto st = strides(n, r);
    DenseOperator T = DenseOperator::Zero(dim, dim);
    for (long long col = 0; col < dim; ++col) {
        long long row = 0;
        for (int k = 1; k <= n; ++k) {
            // beta_{sigma(k)} = alpha_k
            row += static_cast<long long>(digit(col, k, st, r)) * st[sigma[k - 1] - 1];
        }
        T(row, col) = 1.0;
    }
    return T;
}

DenseOperator hamiltonian(const ModelInstance& inst) {
    check_dims(inst.n, inst.r);
    const int n = inst.n, r = inst.r, m = inst.m;
    const long long dim = pow_ll(r, n);
    DenseOperator H = DenseOperator::Zero(dim, dim);

    switch (inst.kind) {
        case ModelKind::AB:
        case ModelKind::WBQ:
        case ModelKind::WBP:
        case ModelKind::BILBIQ: {
            if (m < 0 || m > n) throw std::invalid_argument("need 0 <= m <= n");
            for (int i = 1; i < n + 1; ++i)
                for (int j = i + 1; j <= n; ++j) {
                    const bool inA = j <= m, inB = i > m;
                    if (inA && inst.a != 0.0) H -= inst.a * build_transposition(i, j, n, r);
                    if (inB && inst.b != 0.0) H -= inst.b * build_transposition(i, j, n, r);
                    if (!inA && !inB) {
                        switch (inst.kind) {
                            case ModelKind::AB:
                                if (inst.c != 0.0) H -= inst.c * build_transposition(i, j, n, r);
                                break;
                            case ModelKind::WBQ:
                                if (inst.c != 0.0) H -= inst.c * build_Q(i, j, n, r);
                                break;
                            case ModelKind::WBP:
                                if (inst.c != 0.0) H -= inst.c * build_P(i, j, n, r);
                                break;
                            case ModelKind::BILBIQ: {
                                // couplings (J1, J2) stored in (a_cross, b_cross) = (a, b)
                                const double J1 = inst.a, J2 = inst.b;
                                if (J1 != 0.0) H -= J1 * build_transposition(i, j, n, r);
                                if (J2 != J1) H -= (J2 - J1) * build_P(i, j, n, r);
                                break;
                            }
                            default:
                                break;
                        }
                    }
                }
            H /= static_cast<double>(n);
            break;
        }
        case ModelKind::MB: {
            if (n > 8) throw std::invalid_argument("MB class enumeration restricted to n <= 8");
            int total = 0;
            for (int s : inst.block_sizes) total += s;
            if (total != n) throw std::invalid_argument("MB block sizes must sum to n");
            std::vector<std::vector<int>> blocks;
            int at = 1;
            for (int s : inst.block_sizes) {
                std::vector<int> sites(s);
                std::iota(sites.begin(), sites.end(), at);
                at += s;
                blocks.push_back(std::move(sites));
            }
            std::vector<int> all(n);
            std::iota(all.begin(), all.end(), 1);
            for (const auto& term : inst.terms) {
                for (std::size_t k = 0; k < blocks.size(); ++k) {
                    double ak = k < term.a.size() ? term.a[k] : 0.0;
                    if (ak == 0.0) continue;
                    if (term.gamma.moved() > static_cast<int>(blocks[k].size()))
                        throw std::invalid_argument("MB: |gamma| exceeds block size");
                    H -= ak * class_average(term.gamma, blocks[k], n, r);
                }
                if (term.c != 0.0) {
                    if (term.gamma.moved() > n)
                        throw std::invalid_argument("MB: |gamma| exceeds n");
                    H -= term.c * class_average(term.gamma, all, n, r);
                }
            }
            H *= static_cast<double>(n);
            break;
        }
    }
    return H;
}

double partition_function(const DenseOperator& H, double beta) {
    if (beta <= 0) throw std::invalid_argument("beta must be positive");
    if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("partition_function: operator not symmetric");
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(H, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("partition_function: eigendecomposition failed");
    double z = 0.0;
    const auto& ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) z += std::exp(-beta * ev[i]);
    return z;
}

double thermal_expectation(const DenseOperator& H, double beta, const DenseOperator& O) {
    if (O.rows() != H.rows() || O.cols() != H.cols())
        throw std::invalid_argument("thermal_expectation: shape mismatch");
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(H);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("thermal_expectation: eigendecomposition failed");
    const auto& ev = es.eigenvalues();
    const auto& V = es.eigenvectors();
    double z = 0.0, acc = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        double w = std::exp(-beta * ev[i]);
        z += w;
        acc += w * V.col(i).dot(O * V.col(i));
    }
    if (z <= 0.0 || !std::isfinite(z))
        throw std::runtime_error("thermal_expectation: partition function underflow");
    return acc / z;
}

double magnetized_partition_function(const ModelInstance& inst, double beta,
                                     const std::vector<double>& w, double h) {
    if (static_cast<int>(w.size()) != inst.r)
        throw std::invalid_argument("field spectrum must have r entries");
    DenseOperator M = -beta * hamiltonian(inst);
    const auto st = strides(inst.n, inst.r);
    const bool wb = inst.kind == ModelKind::WBQ || inst.kind == ModelKind::WBP;
    for (long long idx = 0; idx < M.rows(); ++idx) {
        double field = 0.0;
        for (int site = 1; site <= inst.n; ++site) {
            double v = w[digit(idx, site, st, inst.r)];
            // the WB field carries -W^T on the B block; diagonal W realization
            field += (wb && site > inst.m) ? -v : v;
        }
        M(idx, idx) += h * field;
    }
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(M, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("magnetized_partition_function: eigendecomposition failed");
    double z = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        z += std::exp(es.eigenvalues()[i]);
    return z;
}

namespace {

// spin-1 matrices and the conjugating unitary of the r=3 equivalence
Eigen::Matrix3cd spin1_matrix(int k) {
    using namespace std::complex_literals;
    Eigen::Matrix3cd S = Eigen::Matrix3cd::Zero();
    const double s = 1.0 / std::sqrt(2.0);
    switch (k) {
        case 1:
            S << 0, s, 0, s, 0, s, 0, s, 0;
            break;
        case 2:
            S << 0, -1i * s, 0, 1i * s, 0, -1i * s, 0, 1i * s, 0;
            break;
        case 3:
            S << 1, 0, 0, 0, 0, 0, 0, 0, -1;
            break;
        default:
            throw std::invalid_argument("spin component must be 1, 2 or 3");
    }
    return S;
}

Eigen::Matrix3cd psi_unitary() {
    using namespace std::complex_literals;
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::Matrix3cd psi;
    psi << s, 0, 1i * s, 0, 1, 0, -s, 0, 1i * s;
    return psi;
}

// alpha, gamma pair for even r: alpha block-antidiagonal with g1 blocks,
// gamma block-diagonal with (-1)^{r/2} g2 blocks
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> even_r_pair(int r) {
    using namespace std::complex_literals;
    Eigen::Matrix2cd g1, g2;
    const double s = 1.0 / std::sqrt(2.0);
    g1 << 1i * s, 1i * s, -s, s;
    g2 << -s, s, -1i * s, -1i * s;
    Eigen::MatrixXcd al = Eigen::MatrixXcd::Zero(r, r), ga = Eigen::MatrixXcd::Zero(r, r);
    const double sign = (r / 2) % 2 == 0 ? 1.0 : -1.0;
    for (int b = 0; b < r / 2; ++b) {
        al.block<2, 2>(2 * b, r - 2 * (b + 1)) = g1;
        ga.block<2, 2>(2 * b, 2 * b) = sign * g2;
    }
    return {al, ga};
}

// || (u_i x u_j)^dagger From_12 (u_i x u_j) - To_12 || on two sites
double conjugation_error(const Eigen::MatrixXcd& u_i, const Eigen::MatrixXcd& u_j,
                         const DenseOperator& from, const DenseOperator& to, int r) {
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(r * r, r * r);
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
            for (int c = 0; c < r; ++c)
                for (int d = 0; d < r; ++d)
                    U(a + r * b, c + r * d) = u_i(a, c) * u_j(b, d);
    return (U.adjoint() * from.cast<std::complex<double>>() * U - to.cast<std::complex<double>>())
        .cwiseAbs()
        .maxCoeff();
}

}  // namespace

EquivalenceReport spectra_equal_under_equivalence(const ModelInstance& q_inst,
                                                  const ModelInstance& p_inst) {
    if (q_inst.kind != ModelKind::WBQ || p_inst.kind != ModelKind::WBP)
        throw std::invalid_argument("expected a WB-Q and a WB-P instance");
    if (q_inst.n != p_inst.n || q_inst.m != p_inst.m || q_inst.r != p_inst.r ||
        q_inst.a != p_inst.a || q_inst.b != p_inst.b || q_inst.c != p_inst.c)
        throw std::invalid_argument("instances must share (n,m,r,a,b,c)");

    EquivalenceReport rep;
    Eigen::SelfAdjointEigenSolver<DenseOperator> eq(hamiltonian(q_inst), Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<DenseOperator> ep(hamiltonian(p_inst), Eigen::EigenvaluesOnly);
    rep.spectral_gap = (eq.eigenvalues() - ep.eigenvalues()).cwiseAbs().maxCoeff();

    const int r = q_inst.r;
    const DenseOperator Q2 = build_Q(1, 2, 2, r), P2 = build_P(1, 2, 2, r);
    if (r == 3) {
        // psi^{-1} P psi = Q per the r=3 equivalence
        Eigen::Matrix3cd psi = psi_unitary();
        rep.psi_conj_err = conjugation_error(psi, psi, P2, Q2, r);
        rep.psi_antisym_err = 0.0;
        for (int k = 1; k <= 3; ++k) {
            Eigen::Matrix3cd C = psi.inverse() * spin1_matrix(k) * psi;
            rep.psi_antisym_err =
                std::max(rep.psi_antisym_err, (C.transpose() + C).cwiseAbs().maxCoeff());
        }
    } else if (r % 2 == 0) {
        // (alpha x gamma)^{-1} Q (alpha x gamma) = P on crossing pairs
        auto [al, ga] = even_r_pair(r);
        rep.pair_conj_err = conjugation_error(al, ga, Q2, P2, r);
    }
    return rep;
}

}  // namespace spinmf
