// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#pragma once

#include "wfp/image.hpp"

namespace wfp {

/// The four level-1 subbands of an image plus the size it had before
/// even-padding. All bands share one shape: ceil(H/2) x ceil(W/2) x C.
struct SubbandSet {
  ImageBuffer ll;
  ImageBuffer lh;
  ImageBuffer hl;
  ImageBuffer hh;
  int source_height;
  int source_width;

  /// Copy of this set with the approximation band replaced.
  SubbandSet with_ll(ImageBuffer new_ll) const;
};

/// Level-1 orthonormal Haar analysis. For each 2x2 block [[a, b], [c, d]]:
///   ll = (a + b + c + d) / 2     hl = (a - b + c - d) / 2
///   lh = (a + b - c - d) / 2     hh = (a - b - c + d) / 2
/// Odd heights/widths are extended by repeating the last row/column.
/// Throws SizeError when H < 2 or W < 2.
SubbandSet dwt2(const ImageBuffer& img);

/// Exact inverse of dwt2, cropped back to the recorded source size.
/// Throws ShapeError on inconsistent band shapes.
ImageBuffer idwt2(const SubbandSet& bands);

}  // namespace wfp
