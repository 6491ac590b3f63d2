#pragma once

#include "netgov/layers.hpp"

namespace netgov::nn {

/// Adam with the standard bias correction. State slots line up with the
/// ParamList passed to the constructor; the same list (same order, same
/// tensor sizes) must be used for every step.
class Adam {
   public:
    Adam(const ParamList& params, double lr, double beta1 = 0.9, double beta2 = 0.999,
         double eps = 1e-8);

    /// One update from the gradients currently stored in the registry.
    /// Throws NumericError if any gradient is non-finite.
    void step(const ParamList& params);

    long long t() const { return t_; }
    double lr() const { return lr_; }

   private:
    double lr_;
    double beta1_;
    double beta2_;
    double eps_;
    long long t_ = 0;
    std::vector<Vector> m_;
    std::vector<Vector> v_;
};

}  // namespace netgov::nn
