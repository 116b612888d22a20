#include "shillbid/money.hpp"

#include <cstdint>
#include <cstdio>

namespace shillbid {

std::optional<Money> Money::parse(std::string_view text) {
    std::size_t i = 0;
    std::int64_t whole = 0;
    std::size_t whole_digits = 0;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
        if (whole > (INT64_MAX / 100 - 9) / 10) return std::nullopt;
        whole = whole * 10 + (text[i] - '0');
        ++i;
        ++whole_digits;
    }
    if (whole_digits == 0) return std::nullopt;
    std::int64_t frac = 0;
    if (i < text.size() && text[i] == '.') {
        ++i;
        std::size_t frac_digits = 0;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
            if (frac_digits == 2) return std::nullopt;
            frac = frac * 10 + (text[i] - '0');
            ++i;
            ++frac_digits;
        }
        if (frac_digits == 0) return std::nullopt;
        if (frac_digits == 1) frac *= 10;
    }
    if (i != text.size()) return std::nullopt;
    return Money(whole * 100 + frac);
}

std::string Money::to_string() const {
    const std::int64_t whole = cents_ / 100;
    const std::int64_t frac = cents_ % 100;
    char buf[32];
    if (cents_ < 0) {
        std::snprintf(buf, sizeof buf, "-%lld.%02lld", static_cast<long long>(-whole),
                      static_cast<long long>(-frac));
    } else {
        std::snprintf(buf, sizeof buf, "%lld.%02lld", static_cast<long long>(whole),
                      static_cast<long long>(frac));
    }
    return buf;
}

}  // namespace shillbid
