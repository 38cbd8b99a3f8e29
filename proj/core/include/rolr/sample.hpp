#pragma once

namespace rolr {

struct Sample {
  double x = 0.0;
  double y = 0.0;
  bool contaminated = false;
};

}  // namespace rolr
