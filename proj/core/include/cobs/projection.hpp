#pragma once

#include "cobs/dataset.hpp"

namespace cobs {

/// Coordinates on the leading principal components. Each axis is oriented
/// so that its largest-magnitude loading is positive.
Matrix principal_projection(const Matrix& points, int dims = 2);

}  // namespace cobs
