#include "wmr/prices.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace wmr {

Price price_from_rate(double rate) {
    return static_cast<Price>(std::llround(rate * static_cast<double>(kPriceScale)));
}

Price round_to_grid(Price p, Price tick) {
    if (tick <= 0) throw std::invalid_argument("round_to_grid: tick must be positive");
    if (p >= 0) return ((p + tick / 2) / tick) * tick;
    return -(((-p + tick / 2) / tick) * tick);
}

Price parse_price(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("parse_price: empty input");
    std::size_t i = 0;
    bool negative = false;
    if (text[0] == '+' || text[0] == '-') {
        negative = text[0] == '-';
        i = 1;
    }
    if (i == text.size()) throw std::invalid_argument("parse_price: no digits");

    Price integral = 0;
    bool any_digit = false;
    for (; i < text.size() && text[i] != '.'; ++i) {
        char c = text[i];
        if (c < '0' || c > '9')
            throw std::invalid_argument("parse_price: bad character in '" + std::string(text) + "'");
        integral = integral * 10 + (c - '0');
        any_digit = true;
        if (integral > (INT64_MAX / kPriceScale))
            throw std::invalid_argument("parse_price: magnitude too large");
    }

    Price frac = 0;
    int frac_digits = 0;
    if (i < text.size() && text[i] == '.') {
        ++i;
        for (; i < text.size(); ++i) {
            char c = text[i];
            if (c < '0' || c > '9')
                throw std::invalid_argument("parse_price: bad character in '" + std::string(text) + "'");
            if (++frac_digits > 9)
                throw std::invalid_argument("parse_price: more than 9 fractional digits");
            frac = frac * 10 + (c - '0');
            any_digit = true;
        }
    }
    if (!any_digit) throw std::invalid_argument("parse_price: no digits");

    for (int d = frac_digits; d < 9; ++d) frac *= 10;
    Price units = integral * kPriceScale + frac;
    return negative ? -units : units;
}

std::string format_price(Price p) {
    std::string sign;
    if (p < 0) {
        sign = "-";
        p = -p;
    }
    Price integral = p / kPriceScale;
    Price frac = p % kPriceScale;
    std::string out = sign + std::to_string(integral);
    if (frac != 0) {
        std::string digits = std::to_string(frac);
        digits.insert(0, 9 - digits.size(), '0');
        while (digits.back() == '0') digits.pop_back();
        out += '.' + digits;
    }
    return out;
}

} // namespace wmr
