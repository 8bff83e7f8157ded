#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

#include "statdec/rng.hpp"

namespace statdec {

// Uniform mini-batches without replacement, reshuffled each epoch with the
// run RNG. The last batch of an epoch may be short.
class BatchSampler {
public:
    BatchSampler(std::size_t n, std::size_t batch, Rng& rng)
        : batch_(batch == 0 ? 1 : batch), rng_(rng), order_(n) {
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        rng_.shuffle(order_);
    }

    std::vector<std::size_t> next() {
        if (cursor_ >= order_.size()) {
            rng_.shuffle(order_);
            cursor_ = 0;
        }
        const std::size_t end = std::min(order_.size(), cursor_ + batch_);
        std::vector<std::size_t> out(order_.begin() + cursor_, order_.begin() + end);
        cursor_ = end;
        return out;
    }

private:
    std::size_t batch_;
    Rng& rng_;
    std::vector<std::size_t> order_;
    std::size_t cursor_ = 0;
};

}  // namespace statdec
