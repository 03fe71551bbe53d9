#include "minplus/convolution.hpp"

#include <unsupported/Eigen/FFT>

#include <complex>
#include <vector>

namespace minplus {

Eigen::ArrayXd self_convolve_direct(const Eigen::ArrayXd& a) {
  const Eigen::Index n = a.size();
  if (n == 0) return {};
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(2 * n - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (a[i] == 0.0) continue;
    out.segment(i, n) += a[i] * a;
  }
  return out;
}

Eigen::ArrayXd self_convolve_fft(const Eigen::ArrayXd& a) {
  const Eigen::Index n = a.size();
  if (n == 0) return {};
  const Eigen::Index out_len = 2 * n - 1;
  Eigen::Index len = 1;
  while (len < out_len) len <<= 1;

  std::vector<double> padded(len, 0.0);
  for (Eigen::Index i = 0; i < n; ++i) padded[i] = a[i];

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, padded);
  for (auto& z : spectrum) z *= z;
  std::vector<double> back;
  fft.inv(back, spectrum, len);

  Eigen::ArrayXd out(out_len);
  for (Eigen::Index i = 0; i < out_len; ++i) {
    // negatives can only be transform round-off
    out[i] = back[i] > 0.0 ? back[i] : 0.0;
  }
  return out;
}

Eigen::ArrayXd self_convolve_sparse(const Eigen::ArrayXd& a) {
  const Eigen::Index n = a.size();
  if (n == 0) return {};
  std::vector<Eigen::Index> nz;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (a[i] != 0.0) nz.push_back(i);
  }
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(2 * n - 1);
  for (Eigen::Index i : nz) {
    for (Eigen::Index j : nz) out[i + j] += a[i] * a[j];
  }
  return out;
}

Eigen::ArrayXd self_convolve(const Eigen::ArrayXd& a) {
  const Eigen::Index n = a.size();
  if (n <= kDirectConvolutionLimit) return self_convolve_direct(a);
  const Eigen::Index nnz = (a != 0.0).count();
  // a handful of atoms (the p = 1 point mass, say) is cheaper and exact pairwise
  if (nnz * nnz <= n) return self_convolve_sparse(a);
  return self_convolve_fft(a);
}

}  // namespace minplus
