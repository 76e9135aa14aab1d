#include "spinmf/partitions.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace spinmf {

namespace {
void canonicalize(std::vector<int>& parts) {
    while (!parts.empty() && parts.back() == 0) parts.pop_back();
    for (std::size_t i = 0; i + 1 < parts.size(); ++i)
        if (parts[i] < parts[i + 1])
            throw std::invalid_argument("partition parts must be weakly decreasing");
    for (int p : parts)
        if (p < 0) throw std::invalid_argument("partition parts must be nonnegative");
}
}  // namespace

Partition::Partition(std::initializer_list<int> parts) : parts_(parts) {
    canonicalize(parts_);
    size_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    canonicalize(parts_);
    size_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

bool Partition::contains(const Partition& mu) const {
    if (mu.length() > length()) return false;
    for (int i = 0; i < mu.length(); ++i)
        if (mu.part(i) > part(i)) return false;
    return true;
}

Partition Partition::padded_shift(int r, int k) const {
    std::vector<int> out(r);
    for (int i = 0; i < r; ++i) out[i] = part(i) + k;
    return Partition(std::move(out));
}

std::string Partition::str() const {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < length(); ++i) os << (i ? "," : "") << parts_[i];
    os << ')';
    return os.str();
}

std::vector<Partition> partitions_of(int n, int max_len, int min_part) {
    std::vector<Partition> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int rest, int max_part) -> void {
        if (rest == 0) {
            out.emplace_back(cur);
            return;
        }
        if (max_len >= 0 && static_cast<int>(cur.size()) == max_len) return;
        for (int p = std::min(rest, max_part); p >= min_part; --p) {
            cur.push_back(p);
            self(self, rest - p, p);
            cur.pop_back();
        }
    };
    if (n < 0) return out;
    rec(rec, n, n);
    return out;
}

SignedWeight::SignedWeight(std::vector<int> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i + 1 < entries_.size(); ++i)
        if (entries_[i] < entries_[i + 1])
            throw std::invalid_argument("signed weight entries must be weakly decreasing");
}

std::pair<Partition, Partition> SignedWeight::decompose() const {
    std::vector<int> lam, mu;
    for (int e : entries_)
        if (e > 0) lam.push_back(e);
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
        if (*it < 0) mu.push_back(-*it);
    return {Partition(std::move(lam)), Partition(std::move(mu))};
}

std::string SignedWeight::str() const {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < rank(); ++i) os << (i ? "," : "") << entries_[i];
    os << ')';
    return os.str();
}

SignedWeight signed_weight(const Partition& lambda, const Partition& mu, int r) {
    if (lambda.length() + mu.length() > r)
        throw std::invalid_argument("signed_weight: len(lambda)+len(mu) exceeds r");
    std::vector<int> e(r);
    for (int i = 0; i < r; ++i) e[i] = lambda.part(i) - mu.part(r - i - 1);
    return SignedWeight(std::move(e));
}

CycleType::CycleType(Partition parts) : parts_(std::move(parts)) {
    if (!parts_.empty() && parts_.parts().back() < 2)
        throw std::invalid_argument("cycle type parts must all be >= 2");
}

}  // namespace spinmf
