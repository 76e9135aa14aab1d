#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace spinmf {

// Integer partition in canonical form: weakly decreasing positive parts,
// trailing zeros stripped.  part(i) is 0-based and returns 0 past the end,
// which keeps formulas over "r rows" free of bounds checks.
class Partition {
public:
    Partition() = default;
    Partition(std::initializer_list<int> parts);
    explicit Partition(std::vector<int> parts);

    int size() const { return size_; }          // sum of parts
    int length() const { return static_cast<int>(parts_.size()); }
    int part(int i) const { return i < length() ? parts_[i] : 0; }
    const std::vector<int>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }

    // mu is contained in this partition (Young-diagram inclusion)
    bool contains(const Partition& mu) const;

    // adds k to every one of the first r entries (k >= largest negative offset)
    Partition padded_shift(int r, int k) const;

    std::string str() const;

    auto operator<=>(const Partition&) const = default;

private:
    std::vector<int> parts_;
    int size_ = 0;
};

// All partitions of n with at most max_len parts (max_len < 0: unrestricted)
// and every part >= min_part.  Deterministic (lexicographically decreasing).
std::vector<Partition> partitions_of(int n, int max_len = -1, int min_part = 1);

// Rational GL_r highest weight: weakly decreasing integer r-tuple.
// Equivalently a pair [lambda,mu] with entries[i] = lambda_i - mu_{r-i+1}.
class SignedWeight {
public:
    SignedWeight() = default;
    explicit SignedWeight(std::vector<int> entries);

    int rank() const { return static_cast<int>(entries_.size()); }
    int entry(int i) const { return entries_[i]; }
    const std::vector<int>& entries() const { return entries_; }

    // decompose into the unique ([lambda, mu]) pair
    std::pair<Partition, Partition> decompose() const;

    std::string str() const;

    auto operator<=>(const SignedWeight&) const = default;

private:
    std::vector<int> entries_;
};

// [lambda,mu] -> r-tuple; requires len(lambda)+len(mu) <= r
SignedWeight signed_weight(const Partition& lambda, const Partition& mu, int r);

// Cycle type: partition with all parts >= 2 (fixed points left implicit).
class CycleType {
public:
    CycleType() = default;
    explicit CycleType(Partition parts);
    CycleType(std::initializer_list<int> parts) : CycleType(Partition(parts)) {}

    const Partition& parts() const { return parts_; }
    int moved() const { return parts_.size(); }   // number of non-fixed points

    auto operator<=>(const CycleType&) const = default;

private:
    Partition parts_;
};

}  // namespace spinmf
