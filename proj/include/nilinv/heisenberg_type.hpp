#pragma once

#include "nilinv/jmap.hpp"

namespace nilinv {

/// Result of the Heisenberg-type test; on failure carries the offending
/// central pair (1-based) and the deviation from the required product.
struct HeisenbergCheck {
    bool ok = false;
    std::size_t alpha = 0, beta = 0;
    Mat deviation;

    explicit operator bool() const { return ok; }
};

/// Tests j_a j_b + j_b j_a = -2 delta_ab Id on all basis pairs a <= b;
/// by polarization this is the full Heisenberg-type condition.
inline HeisenbergCheck is_heisenberg_type(const JMap& j) {
    j.validate();
    HeisenbergCheck res;
    const Mat minus_two_id = Mat::identity(j.m) * Rational(-2);
    for (std::size_t a = 0; a < j.r; ++a)
        for (std::size_t b = a; b < j.r; ++b) {
            Mat anti = mat_mul(j.mats[a], j.mats[b]) + mat_mul(j.mats[b], j.mats[a]);
            Mat dev = (a == b) ? anti - minus_two_id : anti;
            if (!dev.is_zero()) {
                res.ok = false;
                res.alpha = a + 1;
                res.beta = b + 1;
                res.deviation = std::move(dev);
                return res;
            }
        }
    res.ok = j.r > 0 && j.m > 0;
    return res;
}

} // namespace nilinv
