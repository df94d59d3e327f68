#include "rumour/distributions.hpp"

#include "rumour/numeric.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <variant>

namespace rumour {

std::string to_string(LawKind kind)
{
    switch (kind) {
    case LawKind::power_law: return "power_law";
    case LawKind::geometric: return "geometric";
    case LawKind::finite_table: return "finite";
    case LawKind::critical_tail: return "critical_tail";
    case LawKind::b_family_member: return "b_family_member";
    }
    return "unknown";
}

std::string to_string(BFamily family)
{
    switch (family) {
    case BFamily::log_harmonic: return "log_harmonic";
    case BFamily::inverse_square: return "inverse_square";
    case BFamily::table: return "table";
    }
    return "unknown";
}

std::string to_string(ExampleFamily which)
{
    switch (which) {
    case ExampleFamily::ex41: return "ex41";
    case ExampleFamily::ex42: return "ex42";
    case ExampleFamily::ex43: return "ex43";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// zeta tails

namespace {

constexpr std::uint64_t kEulerMaclaurinStart = 64;

// sum_{j >= n} j^-s by Euler-Maclaurin with Bernoulli terms through B8.
// For n >= 64 the remainder is below 1e-20 relative for every s > 1 we use.
double zeta_tail_asymptotic(double s, double n)
{
    const double p = std::pow(n, -s);
    const double inv2 = 1.0 / (n * n);
    // rising factorials (s)_1, (s)_3, (s)_5, (s)_7
    const double r1 = s;
    const double r3 = r1 * (s + 1) * (s + 2);
    const double r5 = r3 * (s + 3) * (s + 4);
    const double r7 = r5 * (s + 5) * (s + 6);
    const double corr = p / n *
                        (r1 / 12.0 - inv2 * (r3 / 720.0 - inv2 * (r5 / 30240.0 - inv2 * (r7 / 1209600.0))));
    CompensatedSum acc;
    acc += corr;
    acc += 0.5 * p;
    acc += n * p / (s - 1.0);
    return acc.value();
}

}  // namespace

double zeta_tail(double s, std::uint64_t n)
{
    if (!(s > 1.0))
        throw std::domain_error("zeta_tail: exponent must exceed 1");
    if (n == 0)
        throw std::domain_error("zeta_tail: start index must be >= 1");
    if (n >= kEulerMaclaurinStart)
        return zeta_tail_asymptotic(s, static_cast<double>(n));
    CompensatedSum acc(zeta_tail_asymptotic(s, static_cast<double>(kEulerMaclaurinStart)));
    for (std::uint64_t j = kEulerMaclaurinStart - 1; j >= n; --j)
        acc += std::pow(static_cast<double>(j), -s);
    return acc.value();
}

// ---------------------------------------------------------------------------
// search helpers

namespace {

// Smallest k in (lo, hi] with pred(k), given !pred(lo) and pred(hi).
template <class Pred>
Radius bisect(Radius lo, Radius hi, Pred&& pred)
{
    while (hi - lo > 1) {
        const Radius mid = lo + (hi - lo) / 2;
        if (pred(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace

Radius sample_by_tail(const std::function<double(Radius)>& tail, double u, Radius start)
{
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("sample: uniform variate must lie in (0,1)");
    const double v = 1.0 - u;
    auto pred = [&](Radius k) { return tail(k + 1) <= v; };
    if (pred(start))
        return start;
    Radius lo = start;
    Radius step = 1;
    while (true) {
        const Radius hi = (kRadiusCap - lo <= step) ? kRadiusCap : lo + step;
        if (pred(hi))
            return bisect(lo, hi, pred);
        if (hi == kRadiusCap)
            return kRadiusCap;
        lo = hi;
        step *= 2;
    }
}

// ---------------------------------------------------------------------------
// BSequence

BSequence::BSequence(BFamily family, double c, std::vector<double> values)
    : family_(family), c_(c), values_(std::move(values))
{
}

BSequence BSequence::log_harmonic(double c)
{
    if (!(c > 0.0) || !(c / (2.0 * std::numbers::ln2) < 1.0))
        throw std::invalid_argument(
            fmt::format("log_harmonic b-sequence needs 0 < c < 2 ln 2 so that b_0 < 1 (got c={})", c));
    return BSequence(BFamily::log_harmonic, c, {});
}

BSequence BSequence::inverse_square(double c)
{
    if (!(c > 0.0 && c < 1.0))
        throw std::invalid_argument(fmt::format("inverse_square b-sequence needs 0 < c < 1 (got c={})", c));
    return BSequence(BFamily::inverse_square, c, {});
}

BSequence BSequence::table(std::vector<double> values)
{
    constexpr std::size_t kProbe = 100000;
    const std::size_t probe = std::min(values.size(), kProbe);
    for (std::size_t i = 0; i < probe; ++i) {
        if (!(values[i] >= 0.0) || !std::isfinite(values[i]))
            throw std::invalid_argument(fmt::format("b-sequence table: b_{} = {} is not a probability", i, values[i]));
        if (i > 0 && values[i] > values[i - 1])
            throw std::invalid_argument(
                fmt::format("b-sequence table must be non-increasing (b_{} = {} > b_{} = {})", i, values[i], i - 1,
                            values[i - 1]));
    }
    if (!values.empty() && !(values[0] < 1.0))
        throw std::invalid_argument("b-sequence table needs b_0 < 1");
    return BSequence(BFamily::table, 1.0, std::move(values));
}

double BSequence::operator()(std::uint64_t n) const
{
    switch (family_) {
    case BFamily::log_harmonic: {
        const double x = static_cast<double>(n) + 2.0;
        return c_ / (x * std::log(x));
    }
    case BFamily::inverse_square: {
        const double x = static_cast<double>(n) + 1.0;
        return c_ / (x * x);
    }
    case BFamily::table:
        return n < values_.size() ? values_[n] : 0.0;
    }
    return 0.0;
}

std::string BSequence::label() const
{
    if (family_ == BFamily::table)
        return fmt::format("table[{}]", values_.size());
    return fmt::format("{}(c={})", to_string(family_), c_);
}

bool BSequence::power_sum_converges(double t) const noexcept
{
    switch (family_) {
    case BFamily::log_harmonic: return t > 1.0;
    case BFamily::inverse_square: return 2.0 * t > 1.0;
    case BFamily::table: return true;
    }
    return false;
}

double BSequence::tail_sum_bound(std::uint64_t J) const
{
    return power_tail_sum_bound(J, 1.0);
}

double BSequence::power_tail_sum_bound(std::uint64_t J, double t) const
{
    constexpr double kMargin = 1.0 + 1e-12;
    switch (family_) {
    case BFamily::log_harmonic: {
        if (!(t > 1.0))
            return kInf;
        // (j+2) ln(j+2) >= (j+2) ln(J+3) for j > J
        const double l = std::log(static_cast<double>(J) + 3.0);
        return std::pow(c_ / l, t) * zeta_tail(t, J + 3) * kMargin;
    }
    case BFamily::inverse_square:
        // sum_{j > J} (c/(j+1)^2)^t = c^t zeta_tail(2t, J+2)
        return std::pow(c_, t) * zeta_tail(2.0 * t, J + 2) * kMargin;
    case BFamily::table: {
        CompensatedSum acc;
        for (std::size_t j = values_.size(); j-- > J + 1;)
            acc += std::pow(values_[j], t);
        return acc.value();
    }
    }
    return kInf;
}

double BSequence::sum_from(std::uint64_t n) const
{
    switch (family_) {
    case BFamily::log_harmonic: return kInf;
    case BFamily::inverse_square: return c_ * zeta_tail(2.0, n + 1);
    case BFamily::table: {
        CompensatedSum acc;
        for (std::size_t j = values_.size(); j-- > n;)
            acc += values_[j];
        return acc.value();
    }
    }
    return kInf;
}

// ---------------------------------------------------------------------------
// laws

namespace detail {

class Law {
public:
    virtual ~Law() = default;
    virtual double tail(Radius k) const = 0;
    virtual double pmf(Radius k) const { return tail(k) - tail(k + 1); }
    virtual MeanValue mean() const = 0;
    virtual Radius sample(double u) const
    {
        return sample_by_tail([this](Radius k) { return tail(k); }, u);
    }
    virtual LawKind kind() const = 0;
    virtual std::string label() const = 0;
    virtual std::map<std::string, double> params() const = 0;
    virtual std::optional<RaabeLimit> raabe_limit() const = 0;
    virtual std::optional<PowerLawParams> power_law_params() const { return std::nullopt; }
    virtual std::optional<Radius> support_max() const = 0;
};

namespace {

class PowerLaw final : public Law {
public:
    static constexpr Radius kCache = 4096;

    explicit PowerLaw(double alpha) : alpha_(alpha), tail_(kCache + 1)
    {
        // Backward compensated accumulation: S[k] = sum_{j >= k} j^-alpha.
        std::vector<double> s(kCache + 2);
        CompensatedSum acc(zeta_tail_asymptotic(alpha, static_cast<double>(kCache + 1)));
        s[kCache + 1] = acc.value();
        for (Radius k = kCache; k >= 1; --k) {
            acc += std::pow(static_cast<double>(k), -alpha);
            s[k] = acc.value();
        }
        zeta_ = s[1];
        z_ = 1.0 / zeta_;
        tail_[0] = 1.0;
        for (Radius k = 1; k <= kCache; ++k)
            tail_[k] = s[k + 1] / zeta_;
    }

    double tail(Radius k) const override
    {
        if (k <= kCache)
            return tail_[k];
        return zeta_tail_asymptotic(alpha_, static_cast<double>(k) + 1.0) / zeta_;
    }

    double pmf(Radius k) const override { return z_ * std::pow(static_cast<double>(k) + 1.0, -alpha_); }

    MeanValue mean() const override
    {
        if (alpha_ <= 2.0)
            return {false, kInf};
        // E[R] = sum_k k Z (k+1)^-alpha = Z zeta(alpha-1) - 1
        return {true, zeta_tail(alpha_ - 1.0, 1) / zeta_ - 1.0};
    }

    Radius sample(double u) const override
    {
        if (!(u > 0.0 && u < 1.0))
            throw std::domain_error("sample: uniform variate must lie in (0,1)");
        const double v = 1.0 - u;
        if (tail_[kCache] <= v) {
            // first index i in [1, kCache] with tail_[i] <= v; answer k = i - 1
            const auto it = std::partition_point(tail_.begin() + 1, tail_.end(), [v](double t) { return t > v; });
            return static_cast<Radius>(it - tail_.begin()) - 1;
        }
        auto pred = [&](Radius k) { return tail(k + 1) <= v; };
        // tail(n) <= Z/((alpha-1) n^(alpha-1)) brackets the answer from above,
        // tail(n) >= Z/((alpha-1)(n+1)^(alpha-1)) from below.
        const double nstar = std::pow(z_ / ((alpha_ - 1.0) * v), 1.0 / (alpha_ - 1.0));
        Radius hi = kRadiusCap;
        if (nstar < static_cast<double>(kRadiusCap))
            hi = std::max<Radius>(kCache, static_cast<Radius>(std::ceil(nstar)));
        while (!pred(hi)) {
            if (hi == kRadiusCap)
                return kRadiusCap;
            hi = (hi > kRadiusCap / 2) ? kRadiusCap : 2 * hi;
        }
        Radius lo = kCache - 1;  // pred(kCache - 1) is false here
        if (nstar < static_cast<double>(kRadiusCap) && nstar > static_cast<double>(kCache) + 3.0) {
            const Radius guess = static_cast<Radius>(std::floor(nstar)) - 3;
            if (guess > lo && guess < hi && !pred(guess))
                lo = guess;
        }
        return bisect(lo, hi, pred);
    }

    LawKind kind() const override { return LawKind::power_law; }
    std::string label() const override { return fmt::format("power_law(alpha={})", alpha_); }
    std::map<std::string, double> params() const override { return {{"alpha", alpha_}}; }

    std::optional<RaabeLimit> raabe_limit() const override
    {
        // n P(R >= n) -> +inf (alpha < 2), Z_2 = 6/pi^2 (alpha = 2), 0 (alpha > 2)
        if (alpha_ < 2.0)
            return RaabeLimit{kInf, false};
        if (alpha_ == 2.0)
            return RaabeLimit{z_, false};
        return RaabeLimit{0.0, false};
    }

    std::optional<PowerLawParams> power_law_params() const override { return PowerLawParams{alpha_, z_}; }
    std::optional<Radius> support_max() const override { return std::nullopt; }

private:
    double alpha_;
    double zeta_ = 0.0;
    double z_ = 0.0;
    std::vector<double> tail_;
};

class Geometric final : public Law {
public:
    explicit Geometric(double q) : q_(q) {}

    double tail(Radius k) const override { return k == 0 ? 1.0 : std::pow(q_, static_cast<double>(k)); }
    double pmf(Radius k) const override { return (1.0 - q_) * std::pow(q_, static_cast<double>(k)); }
    MeanValue mean() const override { return {true, q_ / (1.0 - q_)}; }

    Radius sample(double u) const override
    {
        if (!(u > 0.0 && u < 1.0))
            throw std::domain_error("sample: uniform variate must lie in (0,1)");
        if (q_ == 0.0)
            return 0;
        const double v = 1.0 - u;
        auto pred = [&](Radius k) { return tail(k + 1) <= v; };
        // q^(k+1) <= v  <=>  k + 1 >= log v / log q
        const double guess = std::ceil(std::log(v) / std::log(q_)) - 1.0;
        Radius start = 0;
        if (guess > 2.0 && guess < 1e15) {
            start = static_cast<Radius>(guess) - 2;
            if (pred(start - 1))
                start = 0;
        }
        return sample_by_tail([this](Radius k) { return tail(k); }, u, start);
    }

    LawKind kind() const override { return LawKind::geometric; }
    std::string label() const override { return fmt::format("geometric(q={})", q_); }
    std::map<std::string, double> params() const override { return {{"q", q_}}; }
    std::optional<RaabeLimit> raabe_limit() const override { return RaabeLimit{0.0, false}; }
    std::optional<Radius> support_max() const override
    {
        return q_ == 0.0 ? std::optional<Radius>(0) : std::nullopt;
    }

private:
    double q_;
};

class FiniteTable final : public Law {
public:
    explicit FiniteTable(const std::map<Radius, double>& pmf)
    {
        CompensatedSum total;
        for (const auto& [value, p] : pmf) {
            if (!(p >= 0.0) || !std::isfinite(p))
                throw std::invalid_argument(fmt::format("finite law: P(R={}) = {} is not a probability", value, p));
            total += p;
        }
        const double sum = total.value();
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument(fmt::format("finite law: probabilities sum to {}, expected 1", sum));
        for (const auto& [value, p] : pmf) {
            if (p > 0.0) {
                values_.push_back(value);
                probs_.push_back(p / sum);
            }
        }
        if (values_.empty())
            throw std::invalid_argument("finite law: empty support");
        suffix_.assign(values_.size() + 1, 0.0);
        CompensatedSum acc;
        for (std::size_t i = values_.size(); i-- > 0;) {
            acc += probs_[i];
            suffix_[i] = acc.value();
        }
    }

    double tail(Radius k) const override
    {
        if (k == 0)
            return 1.0;
        const auto it = std::lower_bound(values_.begin(), values_.end(), k);
        return suffix_[static_cast<std::size_t>(it - values_.begin())];
    }

    double pmf(Radius k) const override
    {
        const auto it = std::lower_bound(values_.begin(), values_.end(), k);
        if (it == values_.end() || *it != k)
            return 0.0;
        return probs_[static_cast<std::size_t>(it - values_.begin())];
    }

    MeanValue mean() const override
    {
        CompensatedSum acc;
        for (std::size_t i = 0; i < values_.size(); ++i)
            acc += static_cast<double>(values_[i]) * probs_[i];
        return {true, acc.value()};
    }

    Radius sample(double u) const override
    {
        if (!(u > 0.0 && u < 1.0))
            throw std::domain_error("sample: uniform variate must lie in (0,1)");
        const double v = 1.0 - u;
        // The answer is the support value s_i with the smallest i such that
        // the mass strictly above it, suffix_[i+1], is <= v.
        const auto it = std::partition_point(suffix_.begin() + 1, suffix_.end(), [v](double t) { return t > v; });
        return values_[static_cast<std::size_t>(it - suffix_.begin()) - 1];
    }

    LawKind kind() const override { return LawKind::finite_table; }

    std::string label() const override
    {
        std::string out = "finite{";
        for (std::size_t i = 0; i < values_.size(); ++i)
            out += fmt::format("{}{}:{}", i ? "," : "", values_[i], probs_[i]);
        return out + "}";
    }

    std::map<std::string, double> params() const override
    {
        std::map<std::string, double> out;
        for (std::size_t i = 0; i < values_.size(); ++i)
            out[std::to_string(values_[i])] = probs_[i];
        return out;
    }

    std::optional<RaabeLimit> raabe_limit() const override { return RaabeLimit{0.0, false}; }
    std::optional<Radius> support_max() const override { return values_.back(); }

private:
    std::vector<Radius> values_;
    std::vector<double> probs_;
    std::vector<double> suffix_;
};

class CriticalTail final : public Law {
public:
    double tail(Radius k) const override { return k == 0 ? 1.0 : 1.0 / static_cast<double>(k); }
    double pmf(Radius k) const override
    {
        if (k == 0)
            return 0.0;
        const double x = static_cast<double>(k);
        return 1.0 / (x * (x + 1.0));
    }
    MeanValue mean() const override { return {false, kInf}; }

    Radius sample(double u) const override
    {
        if (!(u > 0.0 && u < 1.0))
            throw std::domain_error("sample: uniform variate must lie in (0,1)");
        const double v = 1.0 - u;
        auto pred = [&](Radius k) { return tail(k + 1) <= v; };
        Radius k = static_cast<Radius>(std::ceil(1.0 / v)) - 1;
        while (k > 0 && pred(k - 1))
            --k;
        while (!pred(k))
            ++k;
        return k;
    }

    LawKind kind() const override { return LawKind::critical_tail; }
    std::string label() const override { return "critical_tail"; }
    std::map<std::string, double> params() const override { return {}; }
    std::optional<RaabeLimit> raabe_limit() const override { return RaabeLimit{1.0, true}; }
    std::optional<Radius> support_max() const override { return std::nullopt; }
};

double member_tail(ExampleFamily which, const BSequence& b, std::uint64_t n, Radius j)
{
    if (j == 0)
        return 1.0;
    switch (which) {
    case ExampleFamily::ex41:
        // P(R_n >= j) = b_{n+j-1}
        if (j > kRadiusCap)
            return 0.0;
        return b(n + j - 1);
    case ExampleFamily::ex42:
        return j == 1 ? 1.0 - b(n) : 0.0;
    case ExampleFamily::ex43:
        // n = 0 collapses to the point mass at 0
        return (n > 0 && j <= n) ? b(n) : 0.0;
    }
    return 0.0;
}

class BFamilyMember final : public Law {
public:
    BFamilyMember(ExampleFamily which, BSequence b, std::uint64_t n) : which_(which), b_(std::move(b)), n_(n) {}

    double tail(Radius k) const override { return member_tail(which_, b_, n_, k); }

    MeanValue mean() const override
    {
        switch (which_) {
        case ExampleFamily::ex41: {
            const double s = b_.sum_from(n_);
            return {std::isfinite(s), s};
        }
        case ExampleFamily::ex42: return {true, 1.0 - b_(n_)};
        case ExampleFamily::ex43: return {true, static_cast<double>(n_) * b_(n_)};
        }
        return {true, 0.0};
    }

    Radius sample(double u) const override
    {
        if (!(u > 0.0 && u < 1.0))
            throw std::domain_error("sample: uniform variate must lie in (0,1)");
        const double v = 1.0 - u;
        switch (which_) {
        case ExampleFamily::ex41:
            return sample_by_tail([this](Radius k) { return tail(k); }, u);
        case ExampleFamily::ex42:
            return tail(1) <= v ? 0 : 1;
        case ExampleFamily::ex43:
            return tail(1) <= v ? 0 : n_;
        }
        return 0;
    }

    LawKind kind() const override { return LawKind::b_family_member; }
    std::string label() const override { return fmt::format("{}[{}](n={})", to_string(which_), b_.label(), n_); }
    std::map<std::string, double> params() const override
    {
        return {{"n", static_cast<double>(n_)}, {"c", b_.scale()}};
    }
    std::optional<RaabeLimit> raabe_limit() const override { return RaabeLimit{b_.n_times_b_limit(), false}; }

    std::optional<Radius> support_max() const override
    {
        switch (which_) {
        case ExampleFamily::ex41: {
            if (b_.family() != BFamily::table)
                return std::nullopt;
            // largest j with b_{n+j-1} > 0
            const auto& vals = b_.values();
            std::size_t last = vals.size();
            while (last > 0 && vals[last - 1] == 0.0)
                --last;
            if (last == 0 || last - 1 < n_)
                return Radius{0};
            return Radius{last - n_};
        }
        case ExampleFamily::ex42: return Radius{1};
        case ExampleFamily::ex43: return (n_ > 0 && b_(n_) > 0.0) ? Radius{n_} : Radius{0};
        }
        return std::nullopt;
    }

private:
    ExampleFamily which_;
    BSequence b_;
    std::uint64_t n_;
};

}  // namespace
}  // namespace detail

RadiusDistribution RadiusDistribution::power_law(double alpha)
{
    if (!(alpha > 1.0) || !std::isfinite(alpha))
        throw std::invalid_argument(fmt::format("power law needs alpha > 1 (got {}); the law is not normalizable", alpha));
    return RadiusDistribution(std::make_shared<detail::PowerLaw>(alpha));
}

RadiusDistribution RadiusDistribution::geometric(double q)
{
    if (!(q >= 0.0 && q < 1.0))
        throw std::invalid_argument(fmt::format("geometric law needs q in [0,1) (got {})", q));
    return RadiusDistribution(std::make_shared<detail::Geometric>(q));
}

RadiusDistribution RadiusDistribution::finite(const std::map<Radius, double>& pmf)
{
    return RadiusDistribution(std::make_shared<detail::FiniteTable>(pmf));
}

RadiusDistribution RadiusDistribution::point_mass(Radius value)
{
    return finite({{value, 1.0}});
}

RadiusDistribution RadiusDistribution::critical_tail()
{
    return RadiusDistribution(std::make_shared<detail::CriticalTail>());
}

RadiusDistribution RadiusDistribution::b_family_member(ExampleFamily which, const BSequence& b, std::uint64_t n)
{
    return RadiusDistribution(std::make_shared<detail::BFamilyMember>(which, b, n));
}

double RadiusDistribution::tail(Radius k) const { return law_->tail(k); }
double RadiusDistribution::pmf(Radius k) const { return law_->pmf(k); }

double RadiusDistribution::strict_cdf(double x) const
{
    if (!(x >= 0.0))
        throw std::domain_error("strict_cdf: threshold must be >= 0");
    const double c = std::ceil(x);
    if (c >= static_cast<double>(kRadiusCap))
        return 1.0 - law_->tail(kRadiusCap);
    return 1.0 - law_->tail(static_cast<Radius>(c));
}

MeanValue RadiusDistribution::mean() const { return law_->mean(); }
Radius RadiusDistribution::sample(double u) const { return law_->sample(u); }
LawKind RadiusDistribution::kind() const { return law_->kind(); }
std::string RadiusDistribution::label() const { return law_->label(); }
std::map<std::string, double> RadiusDistribution::params() const { return law_->params(); }
std::optional<RaabeLimit> RadiusDistribution::raabe_limit() const { return law_->raabe_limit(); }
std::optional<PowerLawParams> RadiusDistribution::power_law_params() const { return law_->power_law_params(); }
std::optional<Radius> RadiusDistribution::support_max() const { return law_->support_max(); }

// ---------------------------------------------------------------------------
// schedules

struct DistributionSchedule::Impl {
    struct Homogeneous {
        RadiusDistribution law;
    };
    struct Example {
        ExampleFamily which;
        BSequence b;
    };
    struct Table {
        std::vector<RadiusDistribution> laws;
        std::string label;
    };
    struct Generator {
        std::function<RadiusDistribution(std::uint64_t)> fn;
        std::string label;
    };
    std::variant<Homogeneous, Example, Table, Generator> v;
};

DistributionSchedule DistributionSchedule::homogeneous(RadiusDistribution law)
{
    return DistributionSchedule(std::make_shared<const Impl>(Impl{Impl::Homogeneous{std::move(law)}}));
}

DistributionSchedule DistributionSchedule::example(ExampleFamily which, BSequence b)
{
    return DistributionSchedule(std::make_shared<const Impl>(Impl{Impl::Example{which, std::move(b)}}));
}

DistributionSchedule DistributionSchedule::from_table(std::vector<RadiusDistribution> laws, std::string label)
{
    if (laws.empty())
        throw std::invalid_argument("schedule table must contain at least one law");
    return DistributionSchedule(std::make_shared<const Impl>(Impl{Impl::Table{std::move(laws), std::move(label)}}));
}

DistributionSchedule DistributionSchedule::from_generator(std::function<RadiusDistribution(std::uint64_t)> generator,
                                                          std::string label)
{
    if (!generator)
        throw std::invalid_argument("schedule generator is empty");
    return DistributionSchedule(
        std::make_shared<const Impl>(Impl{Impl::Generator{std::move(generator), std::move(label)}}));
}

bool DistributionSchedule::is_homogeneous() const noexcept
{
    if (std::holds_alternative<Impl::Homogeneous>(impl_->v))
        return true;
    if (const auto* t = std::get_if<Impl::Table>(&impl_->v))
        return t->laws.size() == 1;
    return false;
}

std::optional<RadiusDistribution> DistributionSchedule::constant_law() const
{
    if (const auto* h = std::get_if<Impl::Homogeneous>(&impl_->v))
        return h->law;
    if (const auto* t = std::get_if<Impl::Table>(&impl_->v); t && t->laws.size() == 1)
        return t->laws.front();
    return std::nullopt;
}

std::optional<ExampleFamily> DistributionSchedule::example_family() const
{
    if (const auto* e = std::get_if<Impl::Example>(&impl_->v))
        return e->which;
    return std::nullopt;
}

const BSequence* DistributionSchedule::b_sequence() const
{
    if (const auto* e = std::get_if<Impl::Example>(&impl_->v))
        return &e->b;
    return nullptr;
}

RadiusDistribution DistributionSchedule::law(std::uint64_t n) const
{
    return std::visit(
        [n](const auto& s) -> RadiusDistribution {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Impl::Homogeneous>)
                return s.law;
            else if constexpr (std::is_same_v<T, Impl::Example>)
                return RadiusDistribution::b_family_member(s.which, s.b, n);
            else if constexpr (std::is_same_v<T, Impl::Table>)
                return s.laws[std::min<std::uint64_t>(n, s.laws.size() - 1)];
            else
                return s.fn(n);
        },
        impl_->v);
}

double DistributionSchedule::tail(std::uint64_t n, Radius k) const
{
    if (const auto* h = std::get_if<Impl::Homogeneous>(&impl_->v))
        return h->law.tail(k);
    if (const auto* e = std::get_if<Impl::Example>(&impl_->v))
        return detail::member_tail(e->which, e->b, n, k);
    if (const auto* t = std::get_if<Impl::Table>(&impl_->v))
        return t->laws[std::min<std::uint64_t>(n, t->laws.size() - 1)].tail(k);
    return law(n).tail(k);
}

double DistributionSchedule::strict_cdf(std::uint64_t n, double x) const
{
    if (!(x >= 0.0))
        throw std::domain_error("strict_cdf: threshold must be >= 0");
    const double c = std::ceil(x);
    if (c >= static_cast<double>(kRadiusCap))
        return 1.0 - tail(n, kRadiusCap);
    return 1.0 - tail(n, static_cast<Radius>(c));
}

Radius DistributionSchedule::sample(std::uint64_t n, double u) const
{
    if (const auto* h = std::get_if<Impl::Homogeneous>(&impl_->v))
        return h->law.sample(u);
    if (const auto* e = std::get_if<Impl::Example>(&impl_->v)) {
        if (!(u > 0.0 && u < 1.0))
            throw std::domain_error("sample: uniform variate must lie in (0,1)");
        const double v = 1.0 - u;
        switch (e->which) {
        case ExampleFamily::ex41:
            return sample_by_tail([&](Radius k) { return detail::member_tail(e->which, e->b, n, k); }, u);
        case ExampleFamily::ex42:
            return detail::member_tail(e->which, e->b, n, 1) <= v ? 0 : 1;
        case ExampleFamily::ex43:
            return detail::member_tail(e->which, e->b, n, 1) <= v ? 0 : n;
        }
    }
    if (const auto* t = std::get_if<Impl::Table>(&impl_->v))
        return t->laws[std::min<std::uint64_t>(n, t->laws.size() - 1)].sample(u);
    return law(n).sample(u);
}

std::string DistributionSchedule::label() const
{
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Impl::Homogeneous>)
                return s.law.label();
            else if constexpr (std::is_same_v<T, Impl::Example>)
                return fmt::format("{}[{}]", to_string(s.which), s.b.label());
            else
                return s.label;
        },
        impl_->v);
}

std::vector<CatalogEntry> homogeneous_catalog()
{
    return {
        {"power_law_1.5", RadiusDistribution::power_law(1.5)},
        {"power_law_2", RadiusDistribution::power_law(2.0)},
        {"power_law_2.5", RadiusDistribution::power_law(2.5)},
        {"power_law_3", RadiusDistribution::power_law(3.0)},
        {"geometric_0.5", RadiusDistribution::geometric(0.5)},
        {"finite_half_half", RadiusDistribution::finite({{0, 0.5}, {1, 0.5}})},
        {"critical_tail", RadiusDistribution::critical_tail()},
    };
}

}  // namespace rumour
