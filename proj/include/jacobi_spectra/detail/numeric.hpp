#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace jacobi_spectra::detail {

// Neumaier-compensated accumulator; order-insensitive to ~1 ulp.
class compensated_sum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_total(const std::vector<double>& xs) {
    compensated_sum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

// Median of an unsorted sample (copies; averages the two middle order statistics).
inline double median(std::vector<double> xs) {
    if (xs.empty()) throw std::invalid_argument("median: empty sample");
    std::sort(xs.begin(), xs.end());
    std::size_t m = xs.size() / 2;
    if (xs.size() % 2 == 1) return xs[m];
    return 0.5 * (xs[m - 1] + xs[m]);
}

inline double square(double x) { return x * x; }

} // namespace jacobi_spectra::detail
