#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

namespace gch {

/// Interior grid site. Zero-based: row in [0, H), col in [0, W).
struct Site {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Site&, const Site&) = default;
};

/// Real-valued field on an H x W grid, stored row-major.
class Field {
 public:
  Field() = default;
  Field(int height, int width, double fill = 0.0);
  Field(int height, int width, std::vector<double> values);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return values_.size(); }

  double& operator()(int row, int col) { return values_[index(row, col)]; }
  double operator()(int row, int col) const { return values_[index(row, col)]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](Site s) { return values_[index(s.row, s.col)]; }
  double operator[](Site s) const { return values_[index(s.row, s.col)]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  bool same_shape(const Field& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }

  /// True when every entry is finite.
  bool is_finite() const noexcept;

  double min() const;
  double max() const;
  double mean() const;

  friend bool operator==(const Field&, const Field&) = default;

 private:
  std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<double> values_;
};

/// A sample of the log-field (or any real field living on the interior grid).
using LatentField = Field;

}  // namespace gch
