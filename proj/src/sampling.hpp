#pragma once

#include <random>

#include "conefix/cone.hpp"

namespace conefix::detail {

// Random point of the segment <lo, hi>. Even draws use one weight for every
// node, odd draws an independent weight per node.
inline ConeVector sample_segment(const ConeVector& lo, const ConeVector& hi, std::mt19937_64& rng, int draw)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd a(lo.size());
    if (draw % 2 == 0)
        a.setConstant(u(rng));
    else
        for (Eigen::Index i = 0; i < a.size(); ++i) a[i] = u(rng);
    return lo.with(lo.values() + a.cwiseProduct(hi.values() - lo.values()));
}

} // namespace conefix::detail
