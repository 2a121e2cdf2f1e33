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

#include "rocktraits/mask_ops.hpp"

#include <algorithm>
#include <deque>

#include "rocktraits/errors.hpp"

namespace rocktraits {

namespace {

// Per-axis min/max filter; outside-image samples count as background.
Mask axis_filter(const Mask& mask, int radius, bool horizontal, bool is_min) {
  Mask out(mask.width, mask.height);
  const int limit = horizontal ? mask.width : mask.height;
  const int other = horizontal ? mask.height : mask.width;
  for (int o = 0; o < other; ++o) {
    for (int p = 0; p < limit; ++p) {
      bool acc = is_min;
      for (int d = -radius; d <= radius; ++d) {
        int q = p + d;
        bool v = false;
        if (q >= 0 && q < limit) {
          v = horizontal ? mask.at(q, o) : mask.at(o, q);
        }
        if (is_min) {
          acc = acc && v;
          if (!acc) break;
        } else {
          acc = acc || v;
          if (acc) break;
        }
      }
      if (horizontal) {
        out.set(p, o, acc);
      } else {
        out.set(o, p, acc);
      }
    }
  }
  return out;
}

}  // namespace

Mask erode(const Mask& mask, int radius) {
  if (radius <= 0) return mask;
  return axis_filter(axis_filter(mask, radius, true, true), radius, false,
                     true);
}

Mask dilate(const Mask& mask, int radius) {
  if (radius <= 0) return mask;
  return axis_filter(axis_filter(mask, radius, true, false), radius, false,
                     false);
}

Mask morph_open(const Mask& mask, int radius) {
  return dilate(erode(mask, radius), radius);
}

Mask morph_close(const Mask& mask, int radius) {
  return erode(dilate(mask, radius), radius);
}

std::pair<std::vector<int>, int> label_components(const Mask& mask) {
  std::vector<int> labels(mask.data.size(), 0);
  int next_label = 0;
  std::vector<std::size_t> stack;
  const int w = mask.width;
  const int h = mask.height;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      std::size_t idx = static_cast<std::size_t>(r) * w + c;
      if (!mask.data[idx] || labels[idx]) continue;
      ++next_label;
      labels[idx] = next_label;
      stack.push_back(idx);
      while (!stack.empty()) {
        std::size_t cur = stack.back();
        stack.pop_back();
        int cr = static_cast<int>(cur / w);
        int cc = static_cast<int>(cur % w);
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) continue;
            int nr = cr + dr, nc = cc + dc;
            if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
            std::size_t nidx = static_cast<std::size_t>(nr) * w + nc;
            if (mask.data[nidx] && !labels[nidx]) {
              labels[nidx] = next_label;
              stack.push_back(nidx);
            }
          }
        }
      }
    }
  }
  return {std::move(labels), next_label};
}

Mask component_mask(const Mask& mask, const std::vector<int>& labels,
                    int label) {
  Mask out(mask.width, mask.height);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) out.data[i] = 1;
  }
  return out;
}

Mask fill_holes(const Mask& mask) {
  const int w = mask.width;
  const int h = mask.height;
  std::vector<std::uint8_t> outside(mask.data.size(), 0);
  std::deque<std::pair<int, int>> queue;
  auto push = [&](int c, int r) {
    std::size_t idx = static_cast<std::size_t>(r) * w + c;
    if (!mask.data[idx] && !outside[idx]) {
      outside[idx] = 1;
      queue.emplace_back(c, r);
    }
  };
  for (int c = 0; c < w; ++c) {
    push(c, 0);
    push(c, h - 1);
  }
  for (int r = 0; r < h; ++r) {
    push(0, r);
    push(w - 1, r);
  }
  while (!queue.empty()) {
    auto [c, r] = queue.front();
    queue.pop_front();
    if (c > 0) push(c - 1, r);
    if (c + 1 < w) push(c + 1, r);
    if (r > 0) push(c, r - 1);
    if (r + 1 < h) push(c, r + 1);
  }
  Mask out(w, h);
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    out.data[i] = (mask.data[i] || !outside[i]) ? 1 : 0;
  }
  return out;
}

namespace {

// Counterclockwise 8-neighborhood in image coordinates (row grows down):
// E, NE, N, NW, W, SW, S, SE.
constexpr int kDc[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDr[8] = {0, -1, -1, -1, 0, 1, 1, 1};

}  // namespace

std::vector<Contour> trace_contours(const Mask& mask) {
  const int w = mask.width;
  const int h = mask.height;
  // Working image: 0 background, 1 unvisited foreground, +/-id border marks.
  std::vector<int> f(mask.data.size(), 0);
  for (std::size_t i = 0; i < mask.data.size(); ++i) {
    f[i] = mask.data[i] ? 1 : 0;
  }
  auto fat = [&](int c, int r) -> int& {
    return f[static_cast<std::size_t>(r) * w + c];
  };
  auto value = [&](int c, int r) -> int {
    if (c < 0 || c >= w || r < 0 || r >= h) return 0;
    return fat(c, r);
  };
  auto dir_index = [](int dc, int dr) {
    for (int k = 0; k < 8; ++k) {
      if (kDc[k] == dc && kDr[k] == dr) return k;
    }
    return 0;
  };

  std::vector<Contour> contours;
  int nbd = 1;  // the frame counts as border 1
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      bool outer = fat(c, r) == 1 && value(c - 1, r) == 0;
      bool hole = fat(c, r) >= 1 && value(c + 1, r) == 0;
      if (!outer && !hole) continue;
      ++nbd;
      Contour contour;
      contour.is_hole = !outer && hole;
      // (c2, r2): the zero pixel the border start was detected against.
      int start_dir = outer ? dir_index(-1, 0) : dir_index(1, 0);

      // Clockwise scan (decreasing index) for the first foreground
      // neighbor.
      int first = -1;
      for (int k = 0; k < 8; ++k) {
        int idx = (start_dir - k + 8) % 8;
        if (value(c + kDc[idx], r + kDr[idx]) != 0) {
          first = idx;
          break;
        }
      }
      contour.points.push_back({c, r});
      if (first < 0) {
        fat(c, r) = -nbd;  // isolated pixel
        contours.push_back(std::move(contour));
        continue;
      }
      int c1 = c + kDc[first], r1 = r + kDr[first];
      int c2 = c1, r2 = r1;
      int c3 = c, r3 = r;
      for (;;) {
        // Counterclockwise scan around (c3, r3) starting after (c2, r2).
        int from = dir_index(c2 - c3, r2 - r3);
        int found = -1;
        bool east_examined_zero = false;
        for (int k = 1; k <= 8; ++k) {
          int idx = (from + k) % 8;
          int nc = c3 + kDc[idx], nr = r3 + kDr[idx];
          if (value(nc, nr) != 0) {
            found = idx;
            break;
          }
          if (idx == 0) east_examined_zero = true;  // east neighbor was 0
        }
        int c4 = c3 + kDc[found], r4 = r3 + kDr[found];
        if (east_examined_zero) {
          fat(c3, r3) = -nbd;
        } else if (fat(c3, r3) == 1) {
          fat(c3, r3) = nbd;
        }
        if (c4 == c && r4 == r && c3 == c1 && r3 == r1) break;
        contour.points.push_back({c4, r4});
        c2 = c3;
        r2 = r3;
        c3 = c4;
        r3 = r4;
      }
      contours.push_back(std::move(contour));
    }
  }
  return contours;
}

Mask skeletonize(const Mask& mask) {
  const int w = mask.width;
  const int h = mask.height;
  // Pad by one so image-border pixels participate with implicit background
  // neighbors.
  const int pw = w + 2, ph = h + 2;
  std::vector<std::uint8_t> img(static_cast<std::size_t>(pw) * ph, 0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      img[static_cast<std::size_t>(r + 1) * pw + (c + 1)] =
          mask.at(c, r) ? 1 : 0;
    }
  }
  auto px = [&](int c, int r) -> std::uint8_t& {
    return img[static_cast<std::size_t>(r) * pw + c];
  };

  std::vector<std::pair<int, int>> to_clear;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      to_clear.clear();
      for (int r = 1; r < ph - 1; ++r) {
        for (int c = 1; c < pw - 1; ++c) {
          if (!px(c, r)) continue;
          std::uint8_t p2 = px(c, r - 1);
          std::uint8_t p3 = px(c + 1, r - 1);
          std::uint8_t p4 = px(c + 1, r);
          std::uint8_t p5 = px(c + 1, r + 1);
          std::uint8_t p6 = px(c, r + 1);
          std::uint8_t p7 = px(c - 1, r + 1);
          std::uint8_t p8 = px(c - 1, r);
          std::uint8_t p9 = px(c - 1, r - 1);
          int transitions = (p2 == 0 && p3 == 1) + (p3 == 0 && p4 == 1) +
                            (p4 == 0 && p5 == 1) + (p5 == 0 && p6 == 1) +
                            (p6 == 0 && p7 == 1) + (p7 == 0 && p8 == 1) +
                            (p8 == 0 && p9 == 1) + (p9 == 0 && p2 == 1);
          int neighbors = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9;
          int m1 = pass == 0 ? (p2 * p4 * p6) : (p2 * p4 * p8);
          int m2 = pass == 0 ? (p4 * p6 * p8) : (p2 * p6 * p8);
          if (transitions == 1 && neighbors >= 2 && neighbors <= 6 &&
              m1 == 0 && m2 == 0) {
            to_clear.emplace_back(c, r);
          }
        }
      }
      for (auto [c, r] : to_clear) px(c, r) = 0;
      changed = changed || !to_clear.empty();
    }
  }

  Mask out(w, h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      out.set(c, r, px(c + 1, r + 1) != 0);
    }
  }
  return out;
}

}  // namespace rocktraits
