// Copyright 2026 The LA3D Authors
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

#include <span>
#include <string>

#include "image.hpp"

namespace la3d::grid {

inline constexpr int kGutter = 4;
inline constexpr int kLabelBand = 11;
inline constexpr Rgb kBackground{32, 32, 32};
inline constexpr Rgb kInk{255, 255, 255};

// Panels side by side, left to right, under a band holding each panel's
// label. Panels must share dimensions. Panel i's pixels start at
// (i * (width + kGutter), kLabelBand).
Frame compose_grid(std::span<const Frame> panels, std::span<const std::string> labels);

// Draws `text` with a 5x7 bitmap font, clipped to `clip`.
void draw_text(Frame& frame, int x, int y, const std::string& text, Rgb color, const BBox& clip);

}  // namespace la3d::grid
