// Copyright 2026 The VICTR Authors.
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

#ifndef VICTR_BOUNDING_BOX_H_
#define VICTR_BOUNDING_BOX_H_

namespace victr {

// Axis-aligned box in image pixels; (x, y) is the top-left corner and y
// grows downward. Width and height are positive.
struct BoundingBox {
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;

  double area() const { return w * h; }
  bool valid() const { return w > 0 && h > 0; }

  bool operator==(const BoundingBox &) const = default;
};

}  // namespace victr

#endif  // VICTR_BOUNDING_BOX_H_
