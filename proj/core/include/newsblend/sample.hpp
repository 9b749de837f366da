// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "newsblend/date.hpp"
#include "newsblend/numerics.hpp"

namespace newsblend {

/// One supervised example: `window` consecutive days of features (oldest row
/// first) and the scaled close of the following day.
struct WindowSample {
  Matrix inputs;                   // window x features
  double target = 0.0;             // scaled next-day close
  Date target_date{};
  double prev_actual_close = 0.0;  // unscaled close of the last input day
  double target_close = 0.0;       // unscaled next-day close
};

}  // namespace newsblend
