#pragma once

// Positions 0 = u_0 < u_1 < ... of the actionable vertices.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rumour {

class VertexLayout {
public:
    enum class Kind { identity, arithmetic, table };

    /// u_n = n.
    static VertexLayout identity();
    /// u_n = m n.
    static VertexLayout arithmetic(std::uint64_t m);
    /// Explicit positions; must start at 0 and increase strictly. Positions
    /// past the table continue with the declared gap bound (or the last gap).
    static VertexLayout table(std::vector<std::uint64_t> positions, std::optional<std::uint64_t> gap_bound = {});

    std::uint64_t position(std::uint64_t n) const;
    /// Largest n with u_n <= pos.
    std::uint64_t last_index_within(std::uint64_t pos) const;
    Kind kind() const noexcept { return kind_; }
    /// Declared bound m on u_{n+1} - u_n (1 for identity, m for arithmetic).
    std::optional<std::uint64_t> gap_bound() const noexcept { return gap_; }
    /// m when u_n = m n exactly.
    std::optional<std::uint64_t> arithmetic_step() const noexcept;
    std::string label() const;

    /// Throws std::invalid_argument if the declared gap bound fails before `horizon`.
    void validate(std::uint64_t horizon) const;

private:
    VertexLayout(Kind kind, std::optional<std::uint64_t> gap, std::shared_ptr<const std::vector<std::uint64_t>> table)
        : kind_(kind), gap_(gap), table_(std::move(table))
    {
    }

    Kind kind_;
    std::optional<std::uint64_t> gap_;
    std::shared_ptr<const std::vector<std::uint64_t>> table_;
};

std::string to_string(VertexLayout::Kind kind);

}  // namespace rumour
