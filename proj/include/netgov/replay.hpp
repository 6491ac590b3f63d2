#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "netgov/errors.hpp"
#include "netgov/rng.hpp"

namespace netgov::rl {

template <typename Obs>
struct Transition {
    Obs obs;
    int action = 0;
    double reward = 0.0;
    Obs next_obs;
    bool done = false;
};

/// Fixed-capacity ring buffer. sample() draws k distinct transitions
/// (Floyd's algorithm), returned in increasing slot order so replay is
/// bitwise reproducible.
template <typename Obs>
class ReplayBuffer {
   public:
    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
        if (capacity == 0) throw ConfigError("replay capacity must be positive");
        data_.reserve(capacity);
    }

    void push(Transition<Obs> t) {
        if (data_.size() < capacity_) {
            data_.push_back(std::move(t));
        } else {
            data_[next_] = std::move(t);
        }
        next_ = (next_ + 1) % capacity_;
    }

    std::size_t size() const { return data_.size(); }
    std::size_t capacity() const { return capacity_; }
    const Transition<Obs>& at(std::size_t i) const { return data_[i]; }

    std::vector<const Transition<Obs>*> sample(std::size_t k, Rng& rng) const {
        if (k > data_.size()) throw ConfigError("replay sample larger than buffer");
        std::set<std::size_t> picked;
        for (std::size_t j = data_.size() - k; j < data_.size(); ++j) {
            const std::size_t t = rng.uniform_int(j + 1);
            if (!picked.insert(t).second) picked.insert(j);
        }
        std::vector<const Transition<Obs>*> out;
        out.reserve(k);
        for (std::size_t i : picked) out.push_back(&data_[i]);
        return out;
    }

   private:
    std::vector<Transition<Obs>> data_;
    std::size_t capacity_;
    std::size_t next_ = 0;
};

}  // namespace netgov::rl
