#pragma once

// Batched 1D FFTs along one axis of a contiguous tensor, backed by FFTW.
//
// Sign convention: forward uses exp(-i k x), inverse exp(+i k x) and is
// normalized by 1/n, so inverse(forward(f)) == f.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <type_traits>

#include <fftw3.h>

#include "spinkvn/parallel.hpp"

namespace spinkvn {

using Complex = std::complex<double>;

class FftAxis {
 public:
  /// Tensor shape [outer][n][inner]; the transform runs over the n axis.
  /// Work is split into independent tasks of `chunk` inner columns each
  /// (chunk must divide inner; 0 means the whole inner extent).
  FftAxis(std::size_t outer, std::size_t n, std::size_t inner, std::size_t chunk = 0);

  void forward(std::span<Complex> data, Exec exec = Exec::parallel) const;
  void inverse(std::span<Complex> data, Exec exec = Exec::parallel) const;
  /// exp(+i k x) sum without the 1/n factor.
  void backward_unnormalized(std::span<Complex> data, Exec exec = Exec::parallel) const;

  std::size_t length() const { return n_; }
  std::size_t tensor_size() const { return outer_ * n_ * inner_; }

 private:
  struct PlanDeleter {
    void operator()(fftw_plan p) const;
  };
  using Plan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDeleter>;

  void run(const Plan& plan, std::span<Complex> data, Exec exec, bool normalize) const;

  std::size_t outer_;
  std::size_t n_;
  std::size_t inner_;
  std::size_t chunk_;
  Plan forward_;
  Plan backward_;
};

}  // namespace spinkvn
