#pragma once

#include <cmath>
#include <limits>

namespace rumour {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    CompensatedSum() = default;
    explicit CompensatedSum(double init) : sum_(init) {}

    void add(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) noexcept
    {
        add(x);
        return *this;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// log(1 - p) for p in [0,1].
inline double log1m(double p) noexcept
{
    if (p >= 1.0)
        return -kInf;
    return std::log1p(-p);
}

/// log(1 - exp(log_p)) for log_p <= 0, accurate at both ends.
inline double log1m_exp(double log_p) noexcept
{
    if (log_p == -kInf)
        return 0.0;
    if (log_p >= 0.0)
        return -kInf;
    if (log_p > -0.6931471805599453)
        return std::log(-std::expm1(log_p));
    return std::log1p(-std::exp(log_p));
}

}  // namespace rumour
