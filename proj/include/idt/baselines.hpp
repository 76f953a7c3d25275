#pragma once

#include "idt/matrix.hpp"

#include <array>

namespace idt {

/// Adaptive median filter. Each pixel's window grows from 3x3 in steps of two
/// until its median lies strictly between the window min and max, or
/// `max_window` is reached (then the median is output). Inside that window a
/// pixel strictly between min and max is kept, otherwise replaced by the
/// median. Replicate padding. Single-row/column inputs use 1-D windows.
[[nodiscard]] Matrix amf(const Matrix& y, int max_window = 19);

struct AcwmfOptions {
    /// MAD scaling of the detection thresholds.
    double s = 0.3;
    /// Threshold offsets for center weights 1, 3, 5, 7.
    std::array<double, 4> deltas{40.0, 25.0, 10.0, 5.0};
};

/// Adaptive center-weighted median filter on a 3x3 window (9 taps along the
/// signal for 1-D input). The center-weighted medians with weights 1, 3, 5, 7
/// are compared with the pixel; it is declared impulsive when any difference
/// exceeds s * MAD + delta_k, and only then replaced by the window median.
[[nodiscard]] Matrix acwmf(const Matrix& y, const AcwmfOptions& opts = {});

} // namespace idt
