#pragma once

#include <memory>

#include "gch/field.hpp"

namespace gch {

enum class TransformDirection { Forward, Inverse };

enum class TransformMethod {
  /// Odd extension to length 2(n+1) followed by a real FFT, per axis.
  Fast,
  /// Direct O(n^2) evaluation of the 2-D basis sum; the correctness oracle.
  Naive,
};

/// Orthonormal type-I 2-D sine transform on an H x W array.
///
/// With the orthonormal scaling sqrt(2/(n+1)) per axis the transform matrix
/// is symmetric and orthogonal, so it is its own inverse: both directions
/// compute the same map. Instances are immutable and safe to share across
/// threads.
class SineTransform2D {
 public:
  SineTransform2D(int height, int width, TransformMethod method = TransformMethod::Fast);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  TransformMethod method() const noexcept { return method_; }

  Field apply(const Field& input, TransformDirection direction = TransformDirection::Forward) const;

  struct Impl;

 private:
  int height_;
  int width_;
  TransformMethod method_;
  std::shared_ptr<const Impl> impl_;
};

Field sine_transform_2d(const Field& coeffs, TransformDirection direction,
                        TransformMethod method = TransformMethod::Fast);

}  // namespace gch
