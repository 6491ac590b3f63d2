#include "netgov/adam.hpp"

#include <cmath>

#include "netgov/errors.hpp"

namespace netgov::nn {

Adam::Adam(const ParamList& params, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    m_.reserve(params.size());
    v_.reserve(params.size());
    for (const ParamRef& p : params) {
        m_.emplace_back(p.value->size(), 0.0);
        v_.emplace_back(p.value->size(), 0.0);
    }
}

void Adam::step(const ParamList& params) {
    if (params.size() != m_.size()) throw ShapeError("adam: registry size changed");
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        Vector& value = *params[i].value;
        const Vector& grad = *params[i].grad;
        if (value.size() != m_[i].size()) throw ShapeError("adam: tensor size changed");
        Vector& m = m_[i];
        Vector& v = v_[i];
        for (std::size_t j = 0; j < value.size(); ++j) {
            const double g = grad[j];
            if (!std::isfinite(g)) throw NumericError("adam: non-finite gradient");
            m[j] = beta1_ * m[j] + (1.0 - beta1_) * g;
            v[j] = beta2_ * v[j] + (1.0 - beta2_) * g * g;
            const double mhat = m[j] / bc1;
            const double vhat = v[j] / bc2;
            value[j] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
        }
    }
}

}  // namespace netgov::nn
