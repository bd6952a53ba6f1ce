// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HHGOCT_FOURIER_HPP
#define HHGOCT_FOURIER_HPP

#include <complex>
#include <memory>
#include <span>

namespace hhgoct
{

// Raw DCT-I through FFTW (REDFT00): out_j = in_0 + (-1)^j in_N + 2 sum_{k=1}^{N-1} in_k cos(pi j k/N).
void Dct1Raw(std::span<const double> in, std::span<double> out);

// Unnormalized complex FFT pair of fixed length. Plans are created once under a
// global lock; Forward/Backward are safe to call concurrently on distinct buffers.
class ComplexFft
{
public:
  explicit ComplexFft(int n);
  ~ComplexFft();
  ComplexFft(const ComplexFft &) = delete;
  ComplexFft &operator=(const ComplexFft &) = delete;

  int Size() const { return n; }
  void Forward(std::complex<double> *data) const;
  void Backward(std::complex<double> *data) const;

private:
  int n;
  void *forward_plan;
  void *backward_plan;
};

}  // namespace hhgoct

#endif  // HHGOCT_FOURIER_HPP
