#include "gch/sine_transform.hpp"

#include <cmath>
#include <complex>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "gch/error.hpp"
#include "gch/grid.hpp"

namespace gch {
namespace {

// FFTW's planner is not thread-safe; execution of an existing plan on
// caller-provided buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Orthonormal DST-I of length n through a real FFT of the odd extension
//   y = [0, x_1..x_n, 0, -x_n..-x_1]   (length 2(n+1)),
// whose DFT satisfies Y_k = -2i sum_j x_j sin(pi k j / (n+1)).
class FastDst1D {
 public:
  explicit FastDst1D(int n) : n_(n), len_(2 * (n + 1)), scale_(std::sqrt(2.0 / (n + 1))) {
    std::vector<double> in(static_cast<std::size_t>(len_));
    std::vector<std::complex<double>> out(static_cast<std::size_t>(len_ / 2 + 1));
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_r2c_1d(len_, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan_ == nullptr) throw Error("FastDst1D: FFTW planning failed");
  }

  FastDst1D(const FastDst1D&) = delete;
  FastDst1D& operator=(const FastDst1D&) = delete;

  ~FastDst1D() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }

  int size() const noexcept { return n_; }

  // Transforms n values read from data[offset + stride * j] in place.
  void apply(double* data, std::size_t stride, std::vector<double>& in,
             std::vector<std::complex<double>>& out) const {
    in.assign(static_cast<std::size_t>(len_), 0.0);
    out.resize(static_cast<std::size_t>(len_ / 2 + 1));
    for (int j = 1; j <= n_; ++j) {
      const double v = data[stride * static_cast<std::size_t>(j - 1)];
      in[static_cast<std::size_t>(j)] = v;
      in[static_cast<std::size_t>(len_ - j)] = -v;
    }
    fftw_execute_dft_r2c(plan_, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    for (int k = 1; k <= n_; ++k) {
      data[stride * static_cast<std::size_t>(k - 1)] =
          -0.5 * out[static_cast<std::size_t>(k)].imag() * scale_;
    }
  }

 private:
  int n_;
  int len_;
  double scale_;
  fftw_plan plan_ = nullptr;
};

std::vector<double> sine_table(int n) {
  std::vector<double> table(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      table[static_cast<std::size_t>(i * n + k)] = sine_basis(n, k + 1, i + 1);
  return table;
}

}  // namespace

struct SineTransform2D::Impl {
  std::unique_ptr<FastDst1D> rows;  // length width
  std::unique_ptr<FastDst1D> cols;  // length height
  std::vector<double> table_h;
  std::vector<double> table_w;
};

SineTransform2D::SineTransform2D(int height, int width, TransformMethod method)
    : height_(height), width_(width), method_(method) {
  if (height < 1 || width < 1) throw ParameterError("SineTransform2D: dimensions must be >= 1");
  auto impl = std::make_shared<Impl>();
  if (method == TransformMethod::Fast) {
    impl->rows = std::make_unique<FastDst1D>(width);
    impl->cols = std::make_unique<FastDst1D>(height);
  } else {
    impl->table_h = sine_table(height);
    impl->table_w = sine_table(width);
  }
  impl_ = std::move(impl);
}

Field SineTransform2D::apply(const Field& input, TransformDirection /*direction*/) const {
  if (input.height() != height_ || input.width() != width_) {
    throw DimensionError("SineTransform2D: input shape does not match the plan");
  }
  const auto h = static_cast<std::size_t>(height_);
  const auto w = static_cast<std::size_t>(width_);
  if (method_ == TransformMethod::Fast) {
    Field out = input;
    double* data = out.values().data();
    std::vector<double> in;
    std::vector<std::complex<double>> scratch;
    for (std::size_t i = 0; i < h; ++i) impl_->rows->apply(data + i * w, 1, in, scratch);
    for (std::size_t j = 0; j < w; ++j) impl_->cols->apply(data + j, w, in, scratch);
    return out;
  }
  // Naive: out(i, j) = sum_{k,l} S_H(i,k) S_W(j,l) in(k,l).
  Field out(height_, width_);
  const auto& sh = impl_->table_h;
  const auto& sw = impl_->table_w;
  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t j = 0; j < w; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < h; ++k) {
        const double a = sh[i * h + k];
        for (std::size_t l = 0; l < w; ++l) acc += a * sw[j * w + l] * input[k * w + l];
      }
      out[i * w + j] = acc;
    }
  }
  return out;
}

Field sine_transform_2d(const Field& coeffs, TransformDirection direction, TransformMethod method) {
  return SineTransform2D(coeffs.height(), coeffs.width(), method).apply(coeffs, direction);
}

}  // namespace gch
