#include "helm/rational.hpp"

#include <cctype>

namespace helm {

Rational rat_pow(const Rational& base, unsigned exp) {
    Rational out = 1;
    Rational b = base;
    while (exp != 0) {
        if (exp & 1u) out *= b;
        b *= b;
        exp >>= 1u;
    }
    return out;
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace

std::optional<Rational> parse_rational(std::string_view text) {
    bool neg = false;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
        neg = text.front() == '-';
        text.remove_prefix(1);
    }
    if (text.empty()) return std::nullopt;

    Rational value;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = text.substr(0, slash);
        auto den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) return std::nullopt;
        BigInt d{std::string(den)};
        if (d == 0) return std::nullopt;
        value = Rational(BigInt{std::string(num)}, d);
    } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto whole = text.substr(0, dot);
        auto frac = text.substr(dot + 1);
        if (whole.empty() && frac.empty()) return std::nullopt;
        if (!whole.empty() && !all_digits(whole)) return std::nullopt;
        if (!frac.empty() && !all_digits(frac)) return std::nullopt;
        BigInt scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        BigInt digits = whole.empty() ? BigInt(0) : BigInt{std::string(whole)};
        digits *= scale;
        if (!frac.empty()) digits += BigInt{std::string(frac)};
        value = Rational(digits, scale);
    } else {
        if (!all_digits(text)) return std::nullopt;
        value = Rational(BigInt{std::string(text)});
    }
    if (neg) value = -value;
    return value;
}

std::string to_string(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) {
        s += '/';
        s += denominator(r).str();
    }
    return s;
}

} // namespace helm
