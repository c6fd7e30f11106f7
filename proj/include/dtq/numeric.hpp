#ifndef DTQ_NUMERIC_HPP
#define DTQ_NUMERIC_HPP

#include <algorithm>
#include <span>
#include <vector>

namespace dtq {

// Mean that does not depend on the order of the inputs: values are summed in
// sorted order, so permuting the input gives a bit-identical result.
inline double order_free_mean(std::span<const double> values) {
    if (values.empty()) {
        return 0.0;
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (double v : sorted) {
        sum += v;
    }
    return sum / static_cast<double>(sorted.size());
}

inline double mean(std::span<const double> values) {
    if (values.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

}  // namespace dtq

#endif
