#include "gch/field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gch/error.hpp"

namespace gch {

Field::Field(int height, int width, double fill) : height_(height), width_(width) {
  if (height < 0 || width < 0) throw DimensionError("Field: negative dimension");
  values_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
}

Field::Field(int height, int width, std::vector<double> values)
    : height_(height), width_(width), values_(std::move(values)) {
  if (height < 0 || width < 0) throw DimensionError("Field: negative dimension");
  if (values_.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
    throw DimensionError("Field: expected " + std::to_string(height * width) +
                         " values, got " + std::to_string(values_.size()));
  }
}

bool Field::is_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double Field::min() const {
  if (values_.empty()) throw DimensionError("Field::min on empty field");
  return *std::min_element(values_.begin(), values_.end());
}

double Field::max() const {
  if (values_.empty()) throw DimensionError("Field::max on empty field");
  return *std::max_element(values_.begin(), values_.end());
}

double Field::mean() const {
  if (values_.empty()) throw DimensionError("Field::mean on empty field");
  return std::accumulate(values_.begin(), values_.end(), 0.0) /
         static_cast<double>(values_.size());
}

}  // namespace gch
