#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace shillbid {

/// Fixed-point currency amount with two fractional digits.
///
/// Stored as an integer count of cents so equality is exact and golden
/// files never drift with floating-point rounding.
class Money {
public:
    constexpr Money() = default;

    static constexpr Money from_cents(std::int64_t cents) { return Money(cents); }

    constexpr std::int64_t cents() const { return cents_; }
    constexpr double to_double() const { return static_cast<double>(cents_) / 100.0; }

    /// Strict decimal form: digits with at most two fractional digits and
    /// no sign, symbols or separators ("650.5", "650.50", "0").
    static std::optional<Money> parse(std::string_view text);

    /// Canonical text form, e.g. "650.50" or "0.00".
    std::string to_string() const;

    constexpr Money operator+(Money other) const { return Money(cents_ + other.cents_); }
    constexpr Money operator-(Money other) const { return Money(cents_ - other.cents_); }

    friend constexpr auto operator<=>(Money, Money) = default;

private:
    constexpr explicit Money(std::int64_t cents) : cents_(cents) {}

    std::int64_t cents_ = 0;
};

}  // namespace shillbid
