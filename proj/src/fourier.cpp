// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hhgoct/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <vector>

#include "hhgoct/errors.hpp"

namespace hhgoct
{

namespace
{

std::mutex &PlannerMutex()
{
  static std::mutex m;
  return m;
}

fftw_plan Dct1Plan(int n)
{
  static std::map<int, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(PlannerMutex());
  auto it = plans.find(n);
  if (it != plans.end())
  {
    return it->second;
  }
  std::vector<double> a(n), b(n);
  fftw_plan p = fftw_plan_r2r_1d(n, a.data(), b.data(), FFTW_REDFT00,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p)
  {
    throw InvalidInput("Dct1Raw: FFTW planning failed");
  }
  plans.emplace(n, p);
  return p;
}

}  // namespace

void Dct1Raw(std::span<const double> in, std::span<double> out)
{
  if (in.size() < 2 || out.size() != in.size())
  {
    throw InvalidInput("Dct1Raw: need matching sizes of at least 2");
  }
  fftw_plan p = Dct1Plan(static_cast<int>(in.size()));
  // FFTW may not modify the input of an out-of-place r2r transform of this kind, but
  // the API takes a non-const pointer.
  std::vector<double> buf(in.begin(), in.end());
  fftw_execute_r2r(p, buf.data(), out.data());
}

ComplexFft::ComplexFft(int n_) : n(n_)
{
  if (n <= 0)
  {
    throw InvalidInput("ComplexFft: size must be positive");
  }
  std::lock_guard<std::mutex> lock(PlannerMutex());
  auto *buf = static_cast<fftw_complex *>(fftw_malloc(sizeof(fftw_complex) * n));
  // FFTW_ESTIMATE keeps plan selection, and so results, reproducible across runs.
  forward_plan = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  backward_plan = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_free(buf);
}

ComplexFft::~ComplexFft()
{
  std::lock_guard<std::mutex> lock(PlannerMutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan));
}

namespace
{

// Plans assume fftw_malloc alignment; misaligned buffers go through a scratch copy.
void Execute(void *plan, std::complex<double> *data, int n)
{
  auto *ptr = reinterpret_cast<double *>(data);
  if (fftw_alignment_of(ptr) == 0)
  {
    fftw_execute_dft(static_cast<fftw_plan>(plan), reinterpret_cast<fftw_complex *>(data),
                     reinterpret_cast<fftw_complex *>(data));
    return;
  }
  auto *tmp = static_cast<fftw_complex *>(fftw_malloc(sizeof(fftw_complex) * n));
  std::copy(data, data + n, reinterpret_cast<std::complex<double> *>(tmp));
  fftw_execute_dft(static_cast<fftw_plan>(plan), tmp, tmp);
  std::copy(reinterpret_cast<std::complex<double> *>(tmp),
            reinterpret_cast<std::complex<double> *>(tmp) + n, data);
  fftw_free(tmp);
}

}  // namespace

void ComplexFft::Forward(std::complex<double> *data) const
{
  Execute(forward_plan, data, n);
}

void ComplexFft::Backward(std::complex<double> *data) const
{
  Execute(backward_plan, data, n);
}

}  // namespace hhgoct
