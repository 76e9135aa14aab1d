#include "spinmf/combinatorics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <map>
#include <stdexcept>

namespace spinmf {

namespace {

BigInt factorial(int n) {
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

std::complex<double> ipow(std::complex<double> x, int e) {
    if (e < 0) return 1.0 / ipow(x, -e);
    std::complex<double> out = 1.0;
    while (e) {
        if (e & 1) out *= x;
        x *= x;
        e >>= 1;
    }
    return out;
}

// generalized binomial coefficient C(a,k) for integer a (possibly negative)
double gen_binom(int a, int k) {
    double out = 1.0;
    for (int i = 0; i < k; ++i) out *= double(a - i) / double(i + 1);
    return out;
}

}  // namespace

double to_double(const BigInt& v) { return v.convert_to<double>(); }

long long content(const Partition& lambda) {
    long long ct = 0;
    for (int j = 1; j <= lambda.length(); ++j) {
        long long lj = lambda.part(j - 1);
        ct += lj * (lj + 1) / 2 - static_cast<long long>(j) * lj;
    }
    return ct;
}

BigInt dim_gl(const Partition& lambda, int r) {
    if (lambda.length() > r)
        throw std::invalid_argument("dim_gl: partition has more than r rows");
    BigInt num = 1, den = 1;
    for (int i = 1; i <= r; ++i)
        for (int j = i + 1; j <= r; ++j) {
            num *= lambda.part(i - 1) - i - lambda.part(j - 1) + j;
            den *= j - i;
        }
    return num / den;
}

BigInt dim_gl_rational(const Partition& lambda, const Partition& mu, int r) {
    // twisting by det^{mu_1} leaves the dimension unchanged
    SignedWeight w = signed_weight(lambda, mu, r);
    int shift = mu.part(0);
    std::vector<int> parts(r);
    for (int i = 0; i < r; ++i) parts[i] = w.entry(i) + shift;
    return dim_gl(Partition(std::move(parts)), r);
}

BigInt dim_specht(const Partition& mu) {
    if (mu.empty()) return 1;
    const int r = mu.length();
    std::vector<long long> m(r);
    for (int i = 0; i < r; ++i) m[i] = mu.part(i) + r - 1 - i;
    BigInt num = factorial(mu.size());
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) num *= m[i] - m[j];
    BigInt den = 1;
    for (int i = 0; i < r; ++i) den *= factorial(static_cast<int>(m[i]));
    return num / den;
}

BigInt dim_specht_hook(const Partition& mu) {
    if (mu.empty()) return 1;
    std::vector<int> conj(mu.part(0), 0);
    for (int i = 0; i < mu.length(); ++i)
        for (int j = 0; j < mu.part(i); ++j) conj[j]++;
    BigInt num = factorial(mu.size());
    BigInt den = 1;
    for (int i = 0; i < mu.length(); ++i)
        for (int j = 0; j < mu.part(i); ++j)
            den *= (mu.part(i) - j) + (conj[j] - i) - 1;
    return num / den;
}

long long lr_coeff(const Partition& lambda, const Partition& mu, const Partition& nu) {
    if (mu.size() + nu.size() != lambda.size()) return 0;
    if (!lambda.contains(mu)) return 0;
    if (nu.length() > lambda.length()) return 0;
    if (nu.empty()) return 1;

    const int rows = lambda.length();
    const int vmax = nu.length();
    std::vector<int> rem(vmax);  // content still to place, per value
    for (int v = 0; v < vmax; ++v) rem[v] = nu.part(v);
    // fill[i][j] for skew cells, columns mu_i..lambda_i-1 of row i
    std::vector<std::vector<int>> fill(rows);
    for (int i = 0; i < rows; ++i) fill[i].assign(lambda.part(i), 0);
    std::vector<int> prefix(vmax + 2, 0);  // lattice-word counts so far

    long long count = 0;
    // reading order: rows top to bottom, within a row right to left
    auto rec = [&](auto&& self, int i, int j) -> void {
        if (i == rows) {
            ++count;
            return;
        }
        int jlo = mu.part(i);
        if (j < jlo) {
            self(self, i + 1, lambda.part(i + 1) - 1);
            return;
        }
        // candidate entry v (1-based) at cell (i, j)
        int lo = 1, hi = vmax;
        if (j + 1 < lambda.part(i) && j + 1 >= jlo) hi = std::min(hi, fill[i][j + 1]);  // row weakly increasing
        if (i > 0 && j < lambda.part(i - 1) && j >= mu.part(i - 1))
            lo = std::max(lo, fill[i - 1][j] + 1);  // column strictly increasing
        for (int v = lo; v <= hi; ++v) {
            if (rem[v - 1] == 0) continue;
            if (v > 1 && prefix[v] + 1 > prefix[v - 1]) continue;  // lattice word
            fill[i][j] = v;
            --rem[v - 1];
            ++prefix[v];
            self(self, i, j - 1);
            --prefix[v];
            ++rem[v - 1];
        }
        fill[i][j] = 0;
    };
    rec(rec, 0, lambda.part(0) - 1);
    return count;
}

long long multi_lr_coeff(const Partition& lambda, const std::vector<Partition>& blocks) {
    int total = 0;
    for (const auto& b : blocks) total += b.size();
    if (total != lambda.size()) return 0;
    if (blocks.empty()) return lambda.empty() ? 1 : 0;

    std::map<Partition, long long> acc{{blocks[0], 1}};
    for (std::size_t k = 1; k < blocks.size(); ++k) {
        std::map<Partition, long long> next;
        int sz = 0;
        for (std::size_t j = 0; j <= k; ++j) sz += blocks[j].size();
        for (const auto& kappa : partitions_of(sz, lambda.length())) {
            if (!lambda.contains(kappa)) continue;
            long long tot = 0;
            for (const auto& [prev, mult] : acc) tot += mult * lr_coeff(kappa, prev, blocks[k]);
            if (tot) next[kappa] = tot;
        }
        acc = std::move(next);
    }
    auto it = acc.find(lambda);
    return it == acc.end() ? 0 : it->second;
}

bool horn_positive(const Partition& lambda, const Partition& mu, const Partition& nu, int r) {
    if (lambda.length() > r || mu.length() > r || nu.length() > r)
        throw std::invalid_argument("horn_positive: partition length exceeds r");
    return lr_coeff(lambda, mu, nu) > 0;
}

long long wb_branch(const Partition& lambda, const Partition& mu,
                    const Partition& pi, const Partition& tau, int r) {
    if (lambda.length() + mu.length() > r)
        throw std::invalid_argument("wb_branch: len(lambda)+len(mu) exceeds r");
    const int t = pi.size() - lambda.size();
    if (t < 0 || tau.size() - mu.size() != t) return 0;
    if (pi.length() > r || tau.length() > r) return 0;
    const int shift = tau.part(0);
    if (mu.part(0) > shift) return 0;  // shifted weight would leave the polynomial cone
    SignedWeight w = signed_weight(lambda, mu, r);
    std::vector<int> target(r);
    for (int i = 0; i < r; ++i) target[i] = w.entry(i) + shift;
    std::vector<int> dualtau(r);
    for (int i = 0; i < r; ++i) dualtau[i] = shift - tau.part(r - i - 1);
    return lr_coeff(Partition(std::move(target)), pi, Partition(std::move(dualtau)));
}

long long mn_character(const Partition& mu, const CycleType& gamma) {
    if (gamma.moved() > mu.size())
        throw std::invalid_argument("mn_character: |gamma| exceeds |mu|");
    const auto& cyc = gamma.parts();

    auto rec = [](auto&& self, const Partition& shape, const std::vector<int>& cycles,
                  std::size_t ci) -> long long {
        if (ci == cycles.size()) {
            // remaining boxes are filled by fixed points: counts standard tableaux
            return dim_specht(shape).convert_to<long long>();
        }
        const int k = cycles[ci];
        const int L = shape.length();
        std::vector<long long> beta(L);
        for (int i = 0; i < L; ++i) beta[i] = shape.part(i) + (L - 1 - i);
        long long chi = 0;
        for (int i = 0; i < L; ++i) {
            long long nb = beta[i] - k;
            if (nb < 0) continue;
            bool occupied = false;
            int height = 0;
            for (int j = 0; j < L; ++j) {
                if (j == i) continue;
                if (beta[j] == nb) occupied = true;
                if (beta[j] > nb && beta[j] < beta[i]) ++height;
            }
            if (occupied) continue;
            std::vector<long long> nbeta = beta;
            nbeta[i] = nb;
            std::sort(nbeta.rbegin(), nbeta.rend());
            std::vector<int> nparts(L);
            for (int j = 0; j < L; ++j) nparts[j] = static_cast<int>(nbeta[j] - (L - 1 - j));
            long long sub = self(self, Partition(std::move(nparts)), cycles, ci + 1);
            chi += (height % 2 ? -sub : sub);
        }
        return chi;
    };
    return rec(rec, mu, cyc.parts(), 0);
}

std::complex<double> gl_character(const SignedWeight& w,
                                  const std::vector<std::complex<double>>& eigenvalues,
                                  double conf_tol) {
    const int r = w.rank();
    if (static_cast<int>(eigenvalues.size()) != r)
        throw std::invalid_argument("gl_character: need exactly r eigenvalues");
    if (r == 0) return 1.0;

    // group near-coincident eigenvalues; each group is evaluated at its mean
    std::vector<std::complex<double>> val;
    std::vector<int> mult;
    for (const auto& x : eigenvalues) {
        bool placed = false;
        for (std::size_t g = 0; g < val.size(); ++g)
            if (std::abs(x - val[g] * (1.0 / double(mult[g]))) < conf_tol) {
                val[g] += x;
                ++mult[g];
                placed = true;
                break;
            }
        if (!placed) {
            val.push_back(x);
            mult.push_back(1);
        }
    }
    for (std::size_t g = 0; g < val.size(); ++g) val[g] /= double(mult[g]);

    std::vector<int> a(r);
    for (int j = 0; j < r; ++j) a[j] = w.entry(j) + r - (j + 1);

    Eigen::MatrixXcd M(r, r);
    int row = 0;
    double sign = 1.0;
    for (std::size_t g = 0; g < val.size(); ++g) {
        if (mult[g] % 4 == 2 || mult[g] % 4 == 3) sign = -sign;  // (-1)^{C(k,2)}
        for (int p = 0; p < mult[g]; ++p, ++row)
            for (int j = 0; j < r; ++j) M(row, j) = gen_binom(a[j], p) * ipow(val[g], a[j] - p);
    }
    std::complex<double> denom = 1.0;
    for (std::size_t g = 0; g < val.size(); ++g)
        for (std::size_t h = g + 1; h < val.size(); ++h)
            denom *= ipow(val[g] - val[h], mult[g] * mult[h]);
    if (!(std::abs(denom) > 0) || !std::isfinite(std::abs(denom)))
        throw std::runtime_error("gl_character: Vandermonde denominator underflow");
    std::complex<double> det = M.determinant();
    if (!std::isfinite(std::abs(det)))
        throw std::runtime_error("gl_character: confluent determinant not finite");
    return sign * det / denom;
}

BigInt conjugacy_class_size(const CycleType& gamma, int n) {
    if (gamma.moved() > n)
        throw std::invalid_argument("conjugacy_class_size: |gamma| exceeds n");
    std::map<int, int> mult;
    mult[1] = n - gamma.moved();
    for (int p : gamma.parts().parts()) mult[p]++;
    BigInt z = 1;
    for (auto [k, m] : mult) {
        for (int i = 0; i < m; ++i) z *= k;
        z *= factorial(m);
    }
    return factorial(n) / z;
}

}  // namespace spinmf
