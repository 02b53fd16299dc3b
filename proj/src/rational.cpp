#include "fbl/rational.hpp"

#include <cctype>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace fbl {

namespace {

__int128 abs128(__int128 v) { return v < 0 ? -v : v; }

__int128 gcd128(__int128 a, __int128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits64(__int128 v) {
    return v >= std::numeric_limits<std::int64_t>::min() &&
           v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rat::Rat(std::int64_t num, std::int64_t den) {
    *this = from_wide(num, den);
}

Rat Rat::from_wide(__int128 num, __int128 den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const __int128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (num == 0) den = 1;
    if (!fits64(num) || !fits64(den)) throw std::overflow_error("rational overflow");
    Rat r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
}

Rat operator+(const Rat& a, const Rat& b) {
    return Rat::from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                          static_cast<__int128>(a.den_) * b.den_);
}

Rat operator-(const Rat& a, const Rat& b) {
    return Rat::from_wide(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                          static_cast<__int128>(a.den_) * b.den_);
}

Rat operator*(const Rat& a, const Rat& b) {
    return Rat::from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return Rat::from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

Rat Rat::operator-() const { return from_wide(-static_cast<__int128>(num_), den_); }

std::strong_ordering operator<=>(const Rat& a, const Rat& b) noexcept {
    // Denominators are positive, so cross-multiplication preserves order.
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs <=> rhs;
}

Rat Rat::parse(std::string_view text) {
    auto fail = [&]() -> Rat {
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    };
    if (text.empty()) return fail();

    auto parse_int = [&](std::string_view s, bool allow_sign) -> __int128 {
        std::size_t i = 0;
        bool neg = false;
        if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+')) {
            neg = s[0] == '-';
            i = 1;
        }
        if (i >= s.size()) fail();
        __int128 v = 0;
        for (; i < s.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) fail();
            v = v * 10 + (s[i] - '0');
            if (v > std::numeric_limits<std::int64_t>::max()) throw std::overflow_error("rational overflow");
        }
        return neg ? -v : v;
    };

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        return from_wide(parse_int(text.substr(0, slash), true), parse_int(text.substr(slash + 1), false));
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        if (frac.empty() || frac.size() > 18) fail();
        bool neg = !whole.empty() && whole[0] == '-';
        __int128 w = (whole.empty() || whole == "-" || whole == "+") ? 0 : parse_int(whole, true);
        __int128 f = parse_int(frac, false);
        __int128 scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        __int128 mag = abs128(w) * scale + f;
        return from_wide(neg ? -mag : mag, scale);
    }
    return from_wide(parse_int(text, true), 1);
}

std::string Rat::str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

std::string Rat::decimal(int places) const {
    __int128 scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    __int128 mag = abs128(num_) * scale;
    __int128 q = mag / den_;
    if ((mag % den_) * 2 >= den_) ++q;
    __int128 whole = q / scale;
    __int128 frac = q % scale;

    auto to_str = [](__int128 v) {
        if (v == 0) return std::string("0");
        std::string s;
        while (v > 0) {
            s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
            v /= 10;
        }
        return s;
    };

    std::string out = (num_ < 0 && q != 0) ? "-" : "";
    out += to_str(whole);
    if (places > 0) {
        std::string f = to_str(frac);
        out += "." + std::string(static_cast<std::size_t>(places) - f.size(), '0') + f;
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

}  // namespace fbl
