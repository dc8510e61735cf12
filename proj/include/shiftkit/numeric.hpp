#pragma once

#include <cmath>

namespace shiftkit {

/// Neumaier-compensated accumulator.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    CompensatedSum &operator+=(double x) {
        add(x);
        return *this;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// x log2 x with the 0 log 0 = 0 convention.
inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

} // namespace shiftkit
