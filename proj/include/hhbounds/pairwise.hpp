#pragma once

#include <cstdint>
#include <vector>

namespace hhbounds {

// Streaming pairwise (binary-tree) summation. partials_[k] holds the sum of
// a completed block of 2^k consecutive terms; adding a term merges completed
// blocks like a binary counter, so the reduction tree is a fixed function of
// the term count and the result is reproducible run to run. Rounding error
// grows like eps * log2(N) instead of eps * N.
class PairwiseAccumulator {
public:
    void add(double x) {
        std::uint64_t c = ++count_;
        for (; (c & 1u) == 0; c >>= 1) {
            x += partials_.back();
            partials_.pop_back();
        }
        partials_.push_back(x);
    }

    double total() const {
        double s = 0.0;
        for (auto it = partials_.rbegin(); it != partials_.rend(); ++it) s += *it;
        return s;
    }

    std::uint64_t count() const { return count_; }

private:
    std::vector<double> partials_;
    std::uint64_t count_ = 0;
};

}  // namespace hhbounds
