#include "qcast/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qcast {

double mean(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("mean: empty input");
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

double variance(std::span<const double> values) {
    if (values.size() < 2) {
        throw std::invalid_argument("variance: need at least two values");
    }
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) {
        const double d = v - m;
        ss += d * d;
    }
    return ss / static_cast<double>(values.size() - 1);
}

double covariance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("covariance: length mismatch");
    }
    if (a.size() < 2) {
        throw std::invalid_argument("covariance: need at least two pairs");
    }
    const double ma = mean(a);
    const double mb = mean(b);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += (a[i] - ma) * (b[i] - mb);
    }
    return sum / static_cast<double>(a.size() - 1);
}

double median(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("median: empty input");
    }
    std::vector<double> work(values.begin(), values.end());
    const std::size_t n = work.size();
    const std::size_t mid = n / 2;
    std::nth_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(mid), work.end());
    const double upper = work[mid];
    if (n % 2 == 1) {
        return upper;
    }
    // Even length: the other central order statistic is the maximum of the
    // left partition nth_element leaves behind.
    const double lower = *std::max_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double mad(std::span<const double> values) {
    const double center = median(values);
    std::vector<double> deviations(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        deviations[i] = std::abs(values[i] - center);
    }
    return median(deviations);
}

}  // namespace qcast
