#ifndef MINPLUS_CONVOLUTION_HPP_
#define MINPLUS_CONVOLUTION_HPP_

#include <Eigen/Core>

#include <cstdint>

namespace minplus {

/// Lengths at or below this use the quadratic kernel.
inline constexpr std::int64_t kDirectConvolutionLimit = 4096;

/// Full linear self-convolution, length 2n - 1 (empty input gives empty).
/// Uses the O(n^2) kernel up to kDirectConvolutionLimit and an FFT above,
/// with round-off negatives clamped to zero. Inputs with at most sqrt(n)
/// nonzero entries go through the pairwise sparse kernel instead.
Eigen::ArrayXd self_convolve(const Eigen::ArrayXd& a);

Eigen::ArrayXd self_convolve_direct(const Eigen::ArrayXd& a);
Eigen::ArrayXd self_convolve_fft(const Eigen::ArrayXd& a);
Eigen::ArrayXd self_convolve_sparse(const Eigen::ArrayXd& a);

}  // namespace minplus

#endif  // MINPLUS_CONVOLUTION_HPP_
