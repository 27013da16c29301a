#include "spinkvn/kernels.hpp"

#include "spinkvn/errors.hpp"

namespace spinkvn::kernels {
namespace {

using RowBlock = Eigen::Map<Eigen::Matrix<Complex, 4, 4, Eigen::RowMajor>>;
using ConstRowBlock = Eigen::Map<const Eigen::Matrix<Complex, 4, 4, Eigen::RowMajor>>;

void check(std::span<const Complex> blocks, const MatrixTable& table, BlockMap map) {
  if (blocks.size() % 16 != 0) throw PreconditionError("matrix field size is not a multiple of 16");
  if (map.mod == 0 || map.div == 0 || table.size() < map.mod) {
    throw PreconditionError("block map does not fit the operator table");
  }
}

}  // namespace

void sandwich_serial(std::span<Complex> blocks, const MatrixTable& table, BlockMap map) {
  check(blocks, table, map);
  const std::size_t n = blocks.size() / 16;
  Complex tmp[16];
  for (std::size_t b = 0; b < n; ++b) {
    const Matrix4& e = table[map(b)];
    Complex* w = blocks.data() + 16 * b;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        Complex s{};
        for (int q = 0; q < 4; ++q) s += e(r, q) * w[4 * q + c];
        tmp[4 * r + c] = s;
      }
    }
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        Complex s{};
        for (int q = 0; q < 4; ++q) s += tmp[4 * r + q] * e(q, c);
        w[4 * r + c] = s;
      }
    }
  }
}

void sandwich_parallel(std::span<Complex> blocks, const MatrixTable& table, BlockMap map) {
  check(blocks, table, map);
  const std::size_t n = blocks.size() / 16;
  Complex* base = blocks.data();
  parallel_for(n, Exec::parallel, [&](std::size_t b) {
    const Matrix4& e = table[map(b)];
    RowBlock w(base + 16 * b);
    const Matrix4 tmp = e * w;
    w.noalias() = tmp * e;
  });
}

double projected_trace_serial(std::span<const Complex> blocks, const MatrixTable& table, BlockMap map,
                              std::size_t row) {
  check(blocks, table, map);
  const std::size_t n = blocks.size() / 16;
  if (row == 0 || n % row != 0) throw PreconditionError("row length must divide the block count");
  double total = 0.0;
  for (std::size_t i = 0; i < n / row; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < row; ++k) {
      const std::size_t b = i * row + k;
      const Matrix4& q = table[map(b)];
      const Complex* w = blocks.data() + 16 * b;
      // Tr[Q W Q] = sum_{r,s} (Q Q)_{s r} W_{r s}
      Complex s{};
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
          Complex qq{};
          for (int t = 0; t < 4; ++t) qq += q(c, t) * q(t, r);
          s += qq * w[4 * r + c];
        }
      }
      acc += s.real();
    }
    total += acc;
  }
  return total;
}

double projected_trace_parallel(std::span<const Complex> blocks, const MatrixTable& table, BlockMap map,
                                std::size_t row) {
  check(blocks, table, map);
  const std::size_t n = blocks.size() / 16;
  if (row == 0 || n % row != 0) throw PreconditionError("row length must divide the block count");
  const std::size_t rows = n / row;
  std::vector<double> partial(rows, 0.0);
  const Complex* base = blocks.data();
  parallel_for(rows, Exec::parallel, [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < row; ++k) {
      const std::size_t b = i * row + k;
      const Matrix4& q = table[map(b)];
      ConstRowBlock w(base + 16 * b);
      acc += (q * w * q).trace().real();
    }
    partial[i] = acc;
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

}  // namespace spinkvn::kernels
