// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HHGOCT_KERNELS_HPP
#define HHGOCT_KERNELS_HPP

#include <span>

namespace hhgoct::kernels
{

// out_j = sum_k (1/h_k) in_k cos(pi j k / N), N = in.size() - 1.
void Dct1SumSerial(std::span<const double> in, std::span<double> out);
void Dct1SumParallel(std::span<const double> in, std::span<double> out);

// out_j = sum_s values_s cos(omega_j times_s).
void CosineProjectionSerial(std::span<const double> omega, std::span<const double> times,
                            std::span<const double> values, std::span<double> out);
void CosineProjectionParallel(std::span<const double> omega, std::span<const double> times,
                              std::span<const double> values, std::span<double> out);

}  // namespace hhgoct::kernels

#endif  // HHGOCT_KERNELS_HPP
