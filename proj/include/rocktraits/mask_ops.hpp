// Copyright 2026 The rocktraits Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

#include "rocktraits/mask.hpp"

namespace rocktraits {

// Square structuring element of the given radius ((2r+1) x (2r+1) window).
Mask erode(const Mask& mask, int radius);
Mask dilate(const Mask& mask, int radius);
Mask morph_open(const Mask& mask, int radius);
Mask morph_close(const Mask& mask, int radius);

// 8-connected foreground component labels, 0 = background, labels start at 1
// in raster-scan discovery order. Returns the label raster and component
// count.
std::pair<std::vector<int>, int> label_components(const Mask& mask);

// Keeps only the component of `label`.
Mask component_mask(const Mask& mask, const std::vector<int>& labels,
                    int label);

// Fills interior holes: background not 4-connected to the mask border
// becomes foreground.
Mask fill_holes(const Mask& mask);

struct ContourPoint {
  int col = 0;
  int row = 0;
  bool operator==(const ContourPoint&) const = default;
};

// One traced border: an ordered, closed loop of foreground border pixels.
struct Contour {
  std::vector<ContourPoint> points;
  bool is_hole = false;  // border of an interior hole rather than an outline
};

// Border following over the 8-connected foreground: every outer border and
// every hole border, in raster-scan discovery order. A mask is genus 0 iff
// no returned contour is a hole border.
std::vector<Contour> trace_contours(const Mask& mask);

// Zhang-Suen iterative thinning to a 1-px-wide 8-connected skeleton of the
// foreground. Pixels outside the image count as background.
Mask skeletonize(const Mask& mask);

}  // namespace rocktraits
