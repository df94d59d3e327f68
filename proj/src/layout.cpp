#include "rumour/layout.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <stdexcept>

namespace rumour {

std::string to_string(VertexLayout::Kind kind)
{
    switch (kind) {
    case VertexLayout::Kind::identity: return "identity";
    case VertexLayout::Kind::arithmetic: return "arithmetic";
    case VertexLayout::Kind::table: return "table";
    }
    return "unknown";
}

VertexLayout VertexLayout::identity()
{
    return VertexLayout(Kind::identity, 1, nullptr);
}

VertexLayout VertexLayout::arithmetic(std::uint64_t m)
{
    if (m == 0)
        throw std::invalid_argument("arithmetic layout needs step m >= 1");
    if (m == 1)
        return identity();
    return VertexLayout(Kind::arithmetic, m, nullptr);
}

VertexLayout VertexLayout::table(std::vector<std::uint64_t> positions, std::optional<std::uint64_t> gap_bound)
{
    if (positions.empty() || positions.front() != 0)
        throw std::invalid_argument("layout table must start with u_0 = 0");
    for (std::size_t i = 1; i < positions.size(); ++i) {
        if (positions[i] <= positions[i - 1])
            throw std::invalid_argument(
                fmt::format("layout table must be strictly increasing (u_{} = {} after u_{} = {})", i, positions[i],
                            i - 1, positions[i - 1]));
    }
    if (gap_bound && *gap_bound == 0)
        throw std::invalid_argument("layout gap bound must be >= 1");
    if (positions.size() == 1 && !gap_bound)
        throw std::invalid_argument("a one-entry layout table needs a gap bound to continue");
    return VertexLayout(Kind::table, gap_bound,
                        std::make_shared<const std::vector<std::uint64_t>>(std::move(positions)));
}

std::uint64_t VertexLayout::position(std::uint64_t n) const
{
    switch (kind_) {
    case Kind::identity: return n;
    case Kind::arithmetic: return *gap_ * n;
    case Kind::table: {
        const auto& t = *table_;
        if (n < t.size())
            return t[n];
        const std::uint64_t step = gap_ ? *gap_ : t.back() - t[t.size() - 2];
        return t.back() + step * (n - (t.size() - 1));
    }
    }
    return n;
}

std::uint64_t VertexLayout::last_index_within(std::uint64_t pos) const
{
    switch (kind_) {
    case Kind::identity: return pos;
    case Kind::arithmetic: return pos / *gap_;
    case Kind::table: {
        const auto& t = *table_;
        if (pos < t.back())
            return static_cast<std::uint64_t>(std::upper_bound(t.begin(), t.end(), pos) - t.begin()) - 1;
        const std::uint64_t step = gap_ ? *gap_ : t.back() - t[t.size() - 2];
        return (t.size() - 1) + (pos - t.back()) / step;
    }
    }
    return pos;
}

std::optional<std::uint64_t> VertexLayout::arithmetic_step() const noexcept
{
    if (kind_ == Kind::identity)
        return 1;
    if (kind_ == Kind::arithmetic)
        return gap_;
    return std::nullopt;
}

std::string VertexLayout::label() const
{
    switch (kind_) {
    case Kind::identity: return "identity";
    case Kind::arithmetic: return fmt::format("arithmetic(m={})", *gap_);
    case Kind::table: return fmt::format("table[{}]", table_->size());
    }
    return "unknown";
}

void VertexLayout::validate(std::uint64_t horizon) const
{
    if (kind_ != Kind::table || !gap_)
        return;
    const auto& t = *table_;
    const std::uint64_t last = std::min<std::uint64_t>(horizon, t.size() - 1);
    for (std::uint64_t i = 1; i <= last; ++i) {
        if (t[i] - t[i - 1] > *gap_)
            throw std::invalid_argument(fmt::format("layout gap u_{} - u_{} = {} exceeds the declared bound m = {}", i,
                                                    i - 1, t[i] - t[i - 1], *gap_));
    }
}

}  // namespace rumour
