#include "rumour/analytics.hpp"

#include "rumour/numeric.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rumour {

std::string to_string(Classification c)
{
    switch (c) {
    case Classification::Survives: return "Survives";
    case Classification::Dies: return "Dies";
    case Classification::SurvivesAlmostSurely: return "SurvivesAlmostSurely";
    case Classification::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

std::string to_string(Tier t)
{
    return t == Tier::analytic ? "analytic" : "numeric";
}

std::string to_string(Rigor r)
{
    return r == Rigor::rigorous ? "rigorous" : "truncated_estimate";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Verdict make_verdict(Classification c, std::string rule, Tier tier)
{
    Verdict v;
    v.classification = c;
    v.rule = std::move(rule);
    v.tier = tier;
    return v;
}

// Tail access that materializes generator laws once per index.
class TailTable {
public:
    TailTable(const DistributionSchedule& schedule, std::uint64_t max_index) : schedule_(schedule)
    {
        if (!schedule.is_homogeneous() && !schedule.example_family()) {
            laws_.reserve(max_index + 1);
            for (std::uint64_t n = 0; n <= max_index; ++n)
                laws_.push_back(schedule.law(n));
        }
    }

    double operator()(std::uint64_t n, Radius k) const
    {
        if (!laws_.empty() && n < laws_.size())
            return laws_[n].tail(k);
        return schedule_.tail(n, k);
    }

private:
    const DistributionSchedule& schedule_;
    std::vector<RadiusDistribution> laws_;
};

bool b_times_n_vanishes(const BSequence&)
{
    // Holds for every supported family: log-harmonic and inverse-square
    // analytically, tables because they end.
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// a-sequences

std::vector<double> log_a_sequence(const DistributionSchedule& schedule, std::uint64_t m, std::uint64_t n_max)
{
    if (m < 1)
        throw std::invalid_argument("a_sequence: m must be >= 1");
    std::vector<double> out(n_max + 1);
    if (const auto law = schedule.constant_law()) {
        // a_n = a_{n-1} P(R < (n+1) m)
        double acc = 0.0;
        for (std::uint64_t n = 0; n <= n_max; ++n) {
            acc += log1m(law->tail((n + 1) * m));
            out[n] = acc;
        }
        return out;
    }
    const TailTable tail(schedule, n_max);
    for (std::uint64_t n = 0; n <= n_max; ++n) {
        CompensatedSum acc;
        double hard = 0.0;
        for (std::uint64_t i = 0; i <= n; ++i) {
            const double l = log1m(tail(n - i, (i + 1) * m));
            if (l == -kInf) {
                hard = -kInf;
                break;
            }
            acc += l;
        }
        out[n] = hard == -kInf ? -kInf : acc.value();
    }
    return out;
}

std::vector<double> a_sequence(const DistributionSchedule& schedule, std::uint64_t m, std::uint64_t n_max)
{
    auto out = log_a_sequence(schedule, m, n_max);
    for (auto& x : out)
        x = std::exp(x);
    return out;
}

// ---------------------------------------------------------------------------
// Raabe classification

Verdict raabe_classify(const std::function<double(std::uint64_t)>& tail_at, const RaabeOptions& opts)
{
    std::vector<double> est;
    std::vector<std::uint64_t> probes;
    for (unsigned i = 1; i <= opts.max_exponent; ++i) {
        const std::uint64_t n = std::uint64_t{1} << i;
        probes.push_back(n);
        est.push_back(static_cast<double>(n) * tail_at(n));
    }
    Verdict v;
    v.tier = Tier::numeric;
    v.truncation_depth = probes.back();
    const double last = est.back();
    v.evidence["L_estimate"] = last;
    if (est.size() < 2)
        return v;
    const double delta = std::abs(last - est[est.size() - 2]);
    v.evidence["last_delta"] = delta;
    const bool stabilized = delta <= opts.tolerance * std::max(1.0, std::abs(last));
    v.evidence["stabilized"] = stabilized ? 1.0 : 0.0;

    if (stabilized) {
        if (last > 1.0 + opts.margin)
            return v.classification = Classification::Survives, v.rule = "raabe_limit_above_one", v;
        if (last < 1.0 - opts.margin)
            return v.classification = Classification::Dies, v.rule = "raabe_limit_below_one", v;
        // L ~ 1: check P(R >= n) <= 1/(n-1) on every probe
        const bool bound = std::all_of(probes.begin(), probes.end(), [&](std::uint64_t n) {
            return tail_at(n) <= 1.0 / static_cast<double>(n - 1);
        });
        v.evidence["critical_bound_holds"] = bound ? 1.0 : 0.0;
        if (bound)
            return v.classification = Classification::Dies, v.rule = "raabe_critical_tail_bound", v;
        return v;
    }
    // Not settled: accept only a clear monotone run away from the band.
    if (est.size() >= 4) {
        const std::size_t s = est.size() - 4;
        bool up = true;
        bool down = true;
        for (std::size_t i = s + 1; i < est.size(); ++i) {
            up = up && est[i] > est[i - 1];
            down = down && est[i] < est[i - 1];
        }
        if (up && est[s] > 1.0 + opts.margin)
            return v.classification = Classification::Survives, v.rule = "raabe_limit_above_one", v;
        if (down && est[s] < 1.0 - opts.margin)
            return v.classification = Classification::Dies, v.rule = "raabe_limit_below_one", v;
    }
    return v;
}

Verdict raabe_classify(const RadiusDistribution& dist, const RaabeOptions& opts)
{
    if (const auto lim = dist.raabe_limit()) {
        Verdict v;
        v.tier = Tier::analytic;
        v.evidence["L"] = lim->value;
        if (lim->value > 1.0)
            return v.classification = Classification::Survives, v.rule = "raabe_limit_above_one", v;
        if (lim->value < 1.0)
            return v.classification = Classification::Dies, v.rule = "raabe_limit_below_one", v;
        if (lim->critical_bound_holds) {
            v.evidence["critical_bound_holds"] = 1.0;
            return v.classification = Classification::Dies, v.rule = "raabe_critical_tail_bound", v;
        }
    }
    return raabe_classify([&dist](std::uint64_t n) { return dist.tail(n); }, opts);
}

// ---------------------------------------------------------------------------
// firework

Verdict classify_firework_homogeneous(const RadiusDistribution& dist)
{
    const double p0 = dist.strict_cdf(1.0);
    const MeanValue mean = dist.mean();
    Verdict v;
    if (p0 == 0.0) {
        v = make_verdict(Classification::Survives, "degenerate_certain_survival", Tier::analytic);
    } else if (p0 == 1.0) {
        v = make_verdict(Classification::Dies, "degenerate_certain_extinction", Tier::analytic);
    } else if (mean.finite) {
        v = make_verdict(Classification::Dies, "finite_mean_extinction", Tier::analytic);
    } else {
        v = raabe_classify(dist);
    }
    v.evidence["p_below_one"] = p0;
    v.evidence["mean"] = mean.value;
    constexpr std::uint64_t kDepth = 1023;
    const auto a = a_sequence(DistributionSchedule::homogeneous(dist), 1, kDepth);
    CompensatedSum s;
    for (const double x : a)
        s += x;
    v.evidence["a_partial_sum"] = s.value();
    v.truncation_depth = std::max(v.truncation_depth, kDepth);
    return v;
}

double exact_reach_prob(const DistributionSchedule& schedule, std::uint64_t m, std::uint64_t n)
{
    if (n == 0)
        return 1.0;
    const auto la = log_a_sequence(schedule, m, n - 1);
    CompensatedSum acc;
    for (const double x : la) {
        const double l = log1m_exp(x);
        if (l == -kInf)
            return 0.0;
        acc += l;
    }
    return std::exp(acc.value());
}

double exact_reach_prob(const DistributionSchedule& schedule, const VertexLayout& layout, std::uint64_t n)
{
    const auto m = layout.arithmetic_step();
    if (!m)
        throw std::invalid_argument(
            "exact_reach_prob needs an arithmetic layout u_i = m i; for other layouts the product is only a bound");
    return exact_reach_prob(schedule, *m, n);
}

namespace {

enum class TailKind { none, zero, divergent, summable };

struct TailCertificate {
    TailKind kind = TailKind::none;
    double eps = kNaN;   ///< bound on the neglected sum
    double amax = 1.0;   ///< bound on every neglected term
    std::string name;
};

// Controls sum_{j > J} a_j for the firework product.
TailCertificate firework_tail(const DistributionSchedule& schedule, std::uint64_t m, std::uint64_t J, double a_J,
                              double a_next)
{
    TailCertificate c;
    if (const auto law = schedule.constant_law()) {
        if (law->strict_cdf(static_cast<double>(m)) == 0.0)
            return {TailKind::zero, 0.0, 0.0, "no_isolation_mass"};
        if (law->mean().finite)
            return {TailKind::divergent, kInf, 1.0, "finite_mean"};
        if (const auto pl = law->power_law_params()) {
            const double alpha = pl->alpha;
            if (alpha >= 2.0)
                return {TailKind::divergent, kInf, 1.0, "raabe_limit_below_one"};
            // a_j <= a_J exp(-kappa[(j+1+s)^g - (J+1+s)^g]) from the lower tail
            // bracket, summed against the incomplete gamma function.
            const double md = static_cast<double>(m);
            const double g = 2.0 - alpha;
            const double ia = 1.0 / g;
            const double s = 1.0 + 1.0 / md;
            const double cc = pl->normalizer / ((alpha - 1.0) * std::pow(md, alpha - 1.0));
            const double kappa = cc / g;
            const double x0 = static_cast<double>(J) + 1.0 + s;
            const double z0 = kappa * std::pow(x0, g);
            if (!(z0 > ia - 1.0))
                return c;
            const double eps = a_J * ia * x0 / (z0 - ia + 1.0) * (1.0 + 1e-9);
            return {TailKind::summable, eps, a_next, "power_law_stretched_exponential"};
        }
        if (law->kind() == LawKind::critical_tail)
            return {TailKind::divergent, kInf, 1.0, "raabe_limit_below_one"};
        return c;
    }
    if (const auto which = schedule.example_family()) {
        const BSequence& b = *schedule.b_sequence();
        switch (*which) {
        case ExampleFamily::ex41:
        case ExampleFamily::ex43:
            if (b_times_n_vanishes(b))
                return {TailKind::divergent, kInf, 1.0, "a_terms_tend_to_one"};
            return c;
        case ExampleFamily::ex42:
            if (m >= 2)
                return {TailKind::divergent, kInf, 1.0, "a_terms_equal_one"};
            // a_n = b_n exactly
            if (b.sum_diverges())
                return {TailKind::divergent, kInf, 1.0, "divergent_b_sum"};
            return {TailKind::summable, b.tail_sum_bound(J), b(J + 1), "summable_b_sequence"};
        }
    }
    return c;
}

BoundEntry finish_product_bound(double log_prod, const TailCertificate& cert)
{
    BoundEntry e;
    e.truncated_value = log_prod == -kInf ? 0.0 : std::exp(log_prod);
    e.certificate = cert.name;
    e.tail_mass_bound = cert.eps;
    if (log_prod == -kInf) {
        e.value = 0.0;
        e.rigor = Rigor::rigorous;
        e.certificate = "zero_factor";
        return e;
    }
    switch (cert.kind) {
    case TailKind::zero:
        e.value = e.truncated_value;
        e.rigor = Rigor::rigorous;
        break;
    case TailKind::divergent:
        e.value = 0.0;
        e.rigor = Rigor::rigorous;
        e.tail_divergent = true;
        break;
    case TailKind::summable:
        if (std::isfinite(cert.eps) && cert.amax < 1.0) {
            // sum log(1 - a_j) >= -sum a_j / (1 - max a_j)
            e.value = std::exp(log_prod - cert.eps / (1.0 - cert.amax));
            e.rigor = Rigor::rigorous;
        } else {
            e.value = e.truncated_value;
        }
        break;
    case TailKind::none:
        e.value = e.truncated_value;
        e.tail_mass_bound = kNaN;
        break;
    }
    return e;
}

}  // namespace

BoundEntry lower_bound_firework(const DistributionSchedule& schedule, std::uint64_t m, std::uint64_t J)
{
    const auto la = log_a_sequence(schedule, m, J + 1);
    CompensatedSum acc;
    double log_prod = 0.0;
    for (std::uint64_t j = 0; j <= J; ++j) {
        const double l = log1m_exp(la[j]);
        if (l == -kInf) {
            log_prod = -kInf;
            break;
        }
        acc += l;
    }
    if (log_prod != -kInf)
        log_prod = acc.value();
    const auto cert = firework_tail(schedule, m, J, std::exp(la[J]), std::exp(la[J + 1]));
    auto e = finish_product_bound(log_prod, cert);
    e.depths["J"] = J;
    e.depths["m"] = m;
    return e;
}

BoundEntry upper_bound_firework_homogeneous(const RadiusDistribution& dist, std::uint64_t n)
{
    if (n < 1)
        throw std::invalid_argument("upper bound depth must be >= 1");
    CompensatedSum total(1.0);
    total += -dist.pmf(0);
    double prod = 1.0;  // prod_{j<k} P(R <= j)
    for (std::uint64_t k = 1; k <= n && prod > 0.0; ++k) {
        prod *= 1.0 - dist.tail(k);
        total += -dist.pmf(k) * prod;
    }
    BoundEntry e;
    e.value = std::clamp(total.value(), 0.0, 1.0);
    e.truncated_value = e.value;
    e.rigor = Rigor::rigorous;
    e.tail_mass_bound = 0.0;
    e.certificate = "finite_depth_isolation";
    e.depths["n"] = n;
    return e;
}

double upper_bound_reach_heterogeneous(const DistributionSchedule& schedule, std::uint64_t n)
{
    if (n < 1)
        throw std::invalid_argument("upper_bound_reach_heterogeneous needs n >= 1");
    CompensatedSum acc;
    for (std::uint64_t k = 0; k < n; ++k)
        acc += schedule.tail(k, n - k);
    return std::min(1.0, acc.value());
}

namespace {

constexpr double kProbeSlack = 1e-12;

std::vector<Radius> probe_radii()
{
    std::vector<Radius> ks;
    for (Radius k = 0; k <= 256; ++k)
        ks.push_back(k);
    for (Radius k = 512; k <= (Radius{1} << 20); k *= 2)
        ks.push_back(k);
    return ks;
}

void check_domination(const DistributionSchedule& schedule, const Domination& dom)
{
    const auto ks = probe_radii();
    for (std::uint64_t n = 0; n <= 64; ++n) {
        for (const Radius k : ks) {
            const double tn = schedule.tail(n, k);
            const double tl = dom.law.tail(k);
            bool ok = true;
            switch (dom.direction) {
            case Domination::Direction::above: ok = tn <= tl + kProbeSlack; break;
            case Domination::Direction::below: ok = tn >= tl - kProbeSlack; break;
            case Domination::Direction::gap: ok = tl - tn <= (*dom.gap)(k) + kProbeSlack; break;
            }
            if (!ok)
                throw std::invalid_argument(fmt::format(
                    "domination hypothesis fails at n={}, k={} (schedule tail {}, dominating tail {})", n, k, tn, tl));
        }
    }
}

}  // namespace

Verdict classify_firework_heterogeneous(const DistributionSchedule& schedule, std::uint64_t m, std::uint64_t t,
                                        const std::optional<Domination>& domination)
{
    if (m < 1 || t < 1)
        throw std::invalid_argument("classify_firework_heterogeneous needs m >= 1 and t >= 1");
    if (domination && domination->direction == Domination::Direction::gap && !domination->gap)
        throw std::invalid_argument("gap domination needs a b-sequence");

    if (const auto law = schedule.constant_law(); law && m == 1)
        return classify_firework_homogeneous(*law);

    if (domination) {
        check_domination(schedule, *domination);
        const Verdict base = classify_firework_homogeneous(domination->law);
        switch (domination->direction) {
        case Domination::Direction::above:
            if (base.classification == Classification::Dies) {
                auto v = make_verdict(Classification::Dies, "coupling_dominated_above", base.tier);
                v.evidence = base.evidence;
                return v;
            }
            break;
        case Domination::Direction::below:
            if (base.classification == Classification::Survives) {
                auto v = make_verdict(Classification::Survives, "coupling_dominated_below", base.tier);
                v.evidence = base.evidence;
                return v;
            }
            break;
        case Domination::Direction::gap: {
            // lim n [P(R >= n) - b_n] = L - lim n b_n must exceed m
            const Verdict r = raabe_classify(domination->law);
            const double L = r.evidence.count("L") ? r.evidence.at("L") : r.evidence.at("L_estimate");
            const double limit = L - domination->gap->n_times_b_limit();
            bool premise = true;
            for (std::uint64_t n = 0; n <= 64 && premise; ++n) {
                const double p = schedule.strict_cdf(n, static_cast<double>(m));
                premise = p > 0.0 && p < 1.0;
            }
            const bool settled = r.tier == Tier::analytic || r.evidence.at("stabilized") == 1.0;
            if (premise && settled && limit > static_cast<double>(m)) {
                auto v = make_verdict(Classification::Survives, "dominated_limit_above_gap", r.tier);
                v.evidence["limit"] = limit;
                return v;
            }
            break;
        }
        }
    }

    // Summability of [P(R_n < t m)]^t.
    if (const auto which = schedule.example_family(); which == ExampleFamily::ex42 && t * m == 1) {
        const BSequence& b = *schedule.b_sequence();
        if (!b.sum_diverges()) {
            auto v = make_verdict(Classification::Survives, "summable_radius_deficit", Tier::analytic);
            v.evidence["deficit_sum"] = b.sum_from(0);
            return v;
        }
    }

    // P(V) <= P(V_n) <= sum_k P(R_k >= n-k).
    if (const auto which = schedule.example_family();
        which && (*which == ExampleFamily::ex41 || *which == ExampleFamily::ex43) &&
        b_times_n_vanishes(*schedule.b_sequence())) {
        auto v = make_verdict(Classification::Dies, "reach_upper_bound_vanishes", Tier::analytic);
        v.evidence["reach_upper_bound_1024"] = upper_bound_reach_heterogeneous(schedule, 1024);
        v.truncation_depth = 1024;
        return v;
    }

    if (schedule.tail(0, 1) == 0.0) {
        auto v = make_verdict(Classification::Dies, "degenerate_certain_extinction", Tier::analytic);
        v.evidence["p_origin_explodes"] = 0.0;
        return v;
    }

    constexpr std::uint64_t kDepth = 1024;
    const auto lb = lower_bound_firework(schedule, m, kDepth);
    if (lb.rigor == Rigor::rigorous && lb.value > 0.0) {
        auto v = make_verdict(Classification::Survives, "summable_a_sequence", Tier::analytic);
        v.evidence["lower_bound"] = lb.value;
        v.truncation_depth = kDepth;
        return v;
    }

    // Numeric reading of the reach upper bound.
    Verdict v;
    v.truncation_depth = std::uint64_t{1} << 12;
    std::vector<double> ub;
    for (unsigned i = 4; i <= 12; ++i)
        ub.push_back(upper_bound_reach_heterogeneous(schedule, std::uint64_t{1} << i));
    v.evidence["reach_upper_bound_4096"] = ub.back();
    v.evidence["lower_bound_1024"] = lb.value;
    const bool nonincreasing = std::is_sorted(ub.rbegin(), ub.rend());
    if (nonincreasing && ub.back() <= 1e-9) {
        v.classification = Classification::Dies;
        v.rule = "reach_upper_bound_vanishes";
        v.tier = Tier::numeric;
    }
    return v;
}

// ---------------------------------------------------------------------------
// reverse

Verdict classify_reverse_homogeneous(const RadiusDistribution& dist)
{
    const double p0 = dist.strict_cdf(1.0);
    const MeanValue mean = dist.mean();
    Verdict v;
    if (p0 == 0.0)
        v = make_verdict(Classification::SurvivesAlmostSurely, "degenerate_certain_survival", Tier::analytic);
    else if (p0 == 1.0)
        v = make_verdict(Classification::Dies, "degenerate_certain_extinction", Tier::analytic);
    else if (!mean.finite)
        v = make_verdict(Classification::SurvivesAlmostSurely, "infinite_mean_reach_back", Tier::analytic);
    else
        v = make_verdict(Classification::Dies, "finite_mean_reverse_extinction", Tier::analytic);
    v.evidence["p_below_one"] = p0;
    v.evidence["mean"] = mean.value;
    return v;
}

Verdict classify_reverse_heterogeneous(const DistributionSchedule& schedule, const ReverseProbe& probe,
                                       const std::optional<Domination>& domination)
{
    if (const auto law = schedule.constant_law()) {
        const double p0 = law->strict_cdf(1.0);
        const MeanValue mean = law->mean();
        Verdict v;
        if (p0 == 0.0)
            v = make_verdict(Classification::SurvivesAlmostSurely, "degenerate_certain_survival", Tier::analytic);
        else if (p0 == 1.0)
            v = make_verdict(Classification::Dies, "degenerate_certain_extinction", Tier::analytic);
        else if (!mean.finite)
            // sum_k P(R >= k) = E[R] = inf for every n
            v = make_verdict(Classification::SurvivesAlmostSurely, "divergent_reach_back_sums", Tier::analytic);
        else
            v = make_verdict(Classification::Dies, "reverse_coupling_finite_mean", Tier::analytic);
        v.evidence["mean"] = mean.value;
        return v;
    }

    if (domination) {
        if (domination->direction == Domination::Direction::gap)
            throw std::invalid_argument("gap domination applies to the firework process only");
        check_domination(schedule, *domination);
        const MeanValue mean = domination->law.mean();
        const double p0 = domination->law.strict_cdf(1.0);
        if (domination->direction == Domination::Direction::above && mean.finite && p0 > 0.0) {
            auto v = make_verdict(Classification::Dies, "reverse_coupling_finite_mean", Tier::analytic);
            v.evidence["dominating_mean"] = mean.value;
            return v;
        }
        if (domination->direction == Domination::Direction::below && !mean.finite) {
            auto v = make_verdict(Classification::SurvivesAlmostSurely, "reverse_coupling_infinite_mean",
                                  Tier::analytic);
            v.evidence["dominating_mean"] = mean.value;
            return v;
        }
    }

    if (const auto which = schedule.example_family()) {
        const BSequence& b = *schedule.b_sequence();
        switch (*which) {
        case ExampleFamily::ex41:
        case ExampleFamily::ex43:
            // ex41: sum_k b_{n+2k-1}; ex43: sum_k b_{n+k}. Both diverge exactly
            // when sum b does, b being nonincreasing.
            if (b.sum_diverges())
                return make_verdict(Classification::SurvivesAlmostSurely, "divergent_reach_back_sums",
                                    Tier::analytic);
            {
                // P(R_n >= k) <= b_{k-1} (ex41) or b_k (ex43): a finite-mean law
                // with positive mass below 1 dominates every R_n.
                auto v = make_verdict(Classification::Dies, "reverse_coupling_finite_mean", Tier::analytic);
                v.evidence["dominating_mean"] = b.sum_from(*which == ExampleFamily::ex41 ? 0 : 1);
                return v;
            }
        case ExampleFamily::ex42: {
            // prod_k P(R_{n+k} < k) = b_{n+1}, so rho = sum_{j >= 2} b_j
            if (!b.sum_diverges()) {
                auto v = make_verdict(Classification::Survives, "summable_isolation_products", Tier::analytic);
                v.evidence["rho"] = b.sum_from(2);
                return v;
            }
            // R_n <= 1, so surviving to n needs R_1 = ... = R_n = 1, which has
            // probability prod (1 - b_k) -> 0 when sum b diverges.
            auto v = make_verdict(Classification::Dies, "unit_step_product_vanishes", Tier::analytic);
            v.evidence["rho"] = kInf;
            return v;
        }
        }
    }

    // Generic schedules: partial sums as evidence only.
    Verdict v;
    const TailTable tail(schedule, probe.max_index + probe.max_depth);
    double min_sum = kInf;
    CompensatedSum rho;
    for (std::uint64_t n = 0; n <= probe.max_index; ++n) {
        CompensatedSum s;
        double log_iso = 0.0;
        for (std::uint64_t k = 1; k <= probe.max_depth; ++k) {
            const double tk = tail(n + k, k);
            s += tk;
            log_iso += log1m(tk);
        }
        min_sum = std::min(min_sum, s.value());
        if (n >= 1)
            rho += std::exp(log_iso);
    }
    v.evidence["min_reach_back_partial_sum"] = min_sum;
    v.evidence["rho_partial"] = rho.value();
    v.truncation_depth = probe.max_depth;
    return v;
}

BoundEntry lower_bound_reverse(const DistributionSchedule& schedule, std::uint64_t N, std::uint64_t K)
{
    if (N < 1 || K < 1)
        throw std::invalid_argument("lower_bound_reverse needs N >= 1 and K >= 1");
    const TailTable tail(schedule, N + K);
    CompensatedSum acc;
    double log_prod = 0.0;
    for (std::uint64_t n = 0; n <= N; ++n) {
        double log_inner = 0.0;
        for (std::uint64_t j = 1; j <= K && log_inner != -kInf; ++j)
            log_inner += log1m(tail(n + j, j));
        const double l = log1m_exp(log_inner);
        if (l == -kInf) {
            log_prod = -kInf;
            break;
        }
        acc += l;
    }
    if (log_prod != -kInf)
        log_prod = acc.value();

    TailCertificate cert;
    if (const auto law = schedule.constant_law()) {
        const double p0 = law->strict_cdf(1.0);
        if (p0 == 0.0 || !law->mean().finite)
            cert = {TailKind::zero, 0.0, 0.0, "isolation_product_vanishes"};
        else
            cert = {TailKind::divergent, kInf, 1.0, "finite_mean"};
    } else if (const auto which = schedule.example_family()) {
        const BSequence& b = *schedule.b_sequence();
        if (*which == ExampleFamily::ex42) {
            if (b.sum_diverges())
                cert = {TailKind::divergent, kInf, 1.0, "divergent_b_sum"};
            else
                cert = {TailKind::summable, b.tail_sum_bound(N + 1), b(N + 2), "summable_b_sequence"};
        } else if (b.sum_diverges()) {
            cert = {TailKind::zero, 0.0, 0.0, "isolation_product_vanishes"};
        } else {
            cert = {TailKind::divergent, kInf, 1.0, "isolation_product_bounded_below"};
        }
    }
    auto e = finish_product_bound(log_prod, cert);
    e.depths["N"] = N;
    e.depths["K"] = K;
    return e;
}

// ---------------------------------------------------------------------------
// serialization

nlohmann::json finite_or_string(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    return x;
}

nlohmann::json to_json(const Verdict& v)
{
    nlohmann::json j;
    j["verdict"] = to_string(v.classification);
    j["rule"] = v.rule.empty() ? nlohmann::json(nullptr) : nlohmann::json(v.rule);
    j["tier"] = to_string(v.tier);
    nlohmann::json ev = nlohmann::json::object();
    for (const auto& [k, x] : v.evidence)
        ev[k] = finite_or_string(x);
    j["evidence"] = ev;
    j["truncation_depth"] = v.truncation_depth;
    return j;
}

nlohmann::json to_json(const BoundEntry& b)
{
    nlohmann::json j;
    j["value"] = finite_or_string(b.value);
    j["truncated_value"] = finite_or_string(b.truncated_value);
    j["rigor"] = to_string(b.rigor);
    j["tail_mass_bound"] = finite_or_string(b.tail_mass_bound);
    j["tail_divergent"] = b.tail_divergent;
    j["certificate"] = b.certificate;
    j["depths"] = b.depths;
    return j;
}

nlohmann::json report_json(const Verdict& v, const BoundsReport& bounds)
{
    const auto vj = to_json(v);
    nlohmann::json j;
    j["verdict"] = vj["verdict"];
    j["rule"] = vj["rule"];
    j["tier"] = vj["tier"];
    j["evidence"] = vj["evidence"];
    nlohmann::json b = nlohmann::json::object();
    nlohmann::json trunc = nlohmann::json::object();
    trunc["verdict_depth"] = v.truncation_depth;
    if (bounds.lower) {
        b["lower"] = to_json(*bounds.lower);
        trunc["lower"] = bounds.lower->depths;
    }
    if (bounds.upper) {
        b["upper"] = to_json(*bounds.upper);
        trunc["upper"] = bounds.upper->depths;
    }
    j["bounds"] = b;
    j["truncation"] = trunc;
    return j;
}

}  // namespace rumour
