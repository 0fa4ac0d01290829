#include "toric/rational.hpp"

#include <cctype>

namespace toric {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

// cpp_int treats a leading zero as an octal prefix
Integer decimal_integer(std::string_view digits) {
    while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
    return Integer{std::string(digits)};
}

std::optional<Integer> parse_integer(std::string_view s) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) return std::nullopt;
    Integer value = decimal_integer(s);
    return negative ? Integer(-value) : value;
}

Integer pow10(long exponent) {
    Integer p = 1;
    for (long i = 0; i < exponent; ++i) p *= 10;
    return p;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) return std::nullopt;

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = parse_integer(text.substr(0, slash));
        auto den = parse_integer(text.substr(slash + 1));
        if (!num || !den || *den == 0) return std::nullopt;
        return Rational(*num, *den);
    }

    std::string_view mantissa = text;
    long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        mantissa = text.substr(0, e);
        auto exp = parse_integer(text.substr(e + 1));
        if (!exp || abs(*exp) > 4000) return std::nullopt;
        exponent = exp->convert_to<long>();
    }

    bool negative = false;
    if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
        negative = mantissa.front() == '-';
        mantissa.remove_prefix(1);
    }
    std::string digits;
    long fraction_digits = 0;
    if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
        auto whole = mantissa.substr(0, dot);
        auto frac = mantissa.substr(dot + 1);
        if (whole.empty() && frac.empty()) return std::nullopt;
        if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)))
            return std::nullopt;
        digits = std::string(whole) + std::string(frac);
        fraction_digits = static_cast<long>(frac.size());
    } else {
        if (!all_digits(mantissa)) return std::nullopt;
        digits = std::string(mantissa);
    }
    Integer value = decimal_integer(digits);
    if (negative) value = -value;
    const long shift = exponent - fraction_digits;
    if (shift >= 0) return Rational(value * pow10(shift));
    return Rational(value, pow10(-shift));
}

std::string to_string(const Rational& q) {
    const Integer num = numerator(q);
    const Integer den = denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

Integer floor(const Rational& q) {
    const Integer num = numerator(q);
    const Integer den = denominator(q);  // always positive
    Integer quotient = num / den;        // truncates toward zero
    if (num < 0 && quotient * den != num) quotient -= 1;
    return quotient;
}

Integer ceil(const Rational& q) { return -floor(Rational(-q)); }

bool is_integer(const Rational& q) { return denominator(q) == 1; }

double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace toric
