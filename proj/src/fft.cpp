#include "spinkvn/fft.hpp"

#include <mutex>
#include <vector>

#include "spinkvn/errors.hpp"

namespace spinkvn {
namespace {

// The FFTW planner is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

void FftAxis::PlanDeleter::operator()(fftw_plan p) const {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(p);
}

FftAxis::FftAxis(std::size_t outer, std::size_t n, std::size_t inner, std::size_t chunk)
    : outer_(outer), n_(n), inner_(inner), chunk_(chunk == 0 ? inner : chunk) {
  if (n == 0 || inner == 0 || outer == 0) throw ConfigError("FFT extents must be positive");
  if (inner_ % chunk_ != 0) throw ConfigError("FFT chunk must divide the inner extent");

  // Plans are made on scratch memory; FFTW_UNALIGNED lets them run on any slice.
  // FFTW_ESTIMATE keeps the algorithm choice, and hence the bits, reproducible.
  std::vector<Complex> scratch(n_ * inner_);
  const int dims[] = {static_cast<int>(n_)};
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  auto make = [&](int sign) {
    return Plan(fftw_plan_many_dft(1, dims, static_cast<int>(chunk_), as_fftw(scratch.data()), nullptr,
                                   static_cast<int>(inner_), 1, as_fftw(scratch.data()), nullptr,
                                   static_cast<int>(inner_), 1, sign, flags));
  };
  forward_ = make(FFTW_FORWARD);
  backward_ = make(FFTW_BACKWARD);
  if (!forward_ || !backward_) throw ConfigError("FFTW failed to create a plan");
}

void FftAxis::run(const Plan& plan, std::span<Complex> data, Exec exec, bool normalize) const {
  if (data.size() != tensor_size()) throw PreconditionError("FFT tensor size mismatch");
  const std::size_t per_outer = inner_ / chunk_;
  const double scale = 1.0 / static_cast<double>(n_);
  Complex* base = data.data();
  parallel_for(outer_ * per_outer, exec, [&](std::size_t task) {
    const std::size_t o = task / per_outer;
    const std::size_t c = task % per_outer;
    Complex* slice = base + o * n_ * inner_ + c * chunk_;
    fftw_execute_dft(plan.get(), as_fftw(slice), as_fftw(slice));
    if (normalize) {
      for (std::size_t j = 0; j < n_; ++j) {
        Complex* row = slice + j * inner_;
        for (std::size_t q = 0; q < chunk_; ++q) row[q] *= scale;
      }
    }
  });
}

void FftAxis::forward(std::span<Complex> data, Exec exec) const { run(forward_, data, exec, false); }
void FftAxis::inverse(std::span<Complex> data, Exec exec) const { run(backward_, data, exec, true); }
void FftAxis::backward_unnormalized(std::span<Complex> data, Exec exec) const {
  run(backward_, data, exec, false);
}

}  // namespace spinkvn
