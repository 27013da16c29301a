#pragma once

// Pointwise 4x4 kernels over matrix fields stored as contiguous row-major
// blocks of 16 complex numbers.
//
// Every kernel has a serial reference (plain index loops) and an OpenMP path
// (Eigen fixed-size products, parallel over blocks). Tests hold the two to
// round-off agreement; the benchmark target compares their speed.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "spinkvn/clifford.hpp"
#include "spinkvn/parallel.hpp"

namespace spinkvn {

/// Maps block index b to the table entry (b / div) % mod, so one table can
/// serve fields whose operator varies along only one axis.
struct BlockMap {
  std::size_t div = 1;
  std::size_t mod = 1;

  std::size_t operator()(std::size_t b) const { return (b / div) % mod; }
};

using MatrixTable = std::vector<Matrix4, Eigen::aligned_allocator<Matrix4>>;

namespace kernels {

/// W_b <- E W_b E with E = table[map(b)].
void sandwich_serial(std::span<Complex> blocks, const MatrixTable& table, BlockMap map);
void sandwich_parallel(std::span<Complex> blocks, const MatrixTable& table, BlockMap map);

inline void sandwich(std::span<Complex> blocks, const MatrixTable& table, BlockMap map, Exec exec) {
  if (exec == Exec::serial) {
    sandwich_serial(blocks, table, map);
  } else {
    sandwich_parallel(blocks, table, map);
  }
}

/// Per-block Tr[Q W_b Q] with Q = table[map(b)], summed in block order
/// within rows of `row` blocks and then across rows (deterministic for any
/// thread count).
double projected_trace_serial(std::span<const Complex> blocks, const MatrixTable& table, BlockMap map,
                              std::size_t row);
double projected_trace_parallel(std::span<const Complex> blocks, const MatrixTable& table, BlockMap map,
                                std::size_t row);

inline double projected_trace(std::span<const Complex> blocks, const MatrixTable& table, BlockMap map,
                              std::size_t row, Exec exec) {
  return exec == Exec::serial ? projected_trace_serial(blocks, table, map, row)
                              : projected_trace_parallel(blocks, table, map, row);
}

}  // namespace kernels
}  // namespace spinkvn
