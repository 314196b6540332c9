#pragma once

#include <span>
#include <vector>

#include "sgmproxy/imagery.hpp"

namespace sgmproxy::detail {

// Vector-Jacobian product of the per-sample SSIM map with respect to `b`.
std::vector<double> ssim_vjp_b(const Image& a, const Image& b, std::span<const double> upstream);

}  // namespace sgmproxy::detail
