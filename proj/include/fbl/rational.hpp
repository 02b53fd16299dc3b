#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace fbl {

/// Exact rational number with a canonical representation: the fraction is
/// reduced and the denominator is strictly positive.
///
/// Arithmetic is carried out in 128-bit intermediates and throws
/// std::overflow_error if a result does not fit back into 64 bits. Every
/// comparison that decides algorithm behaviour goes through this type.
class Rat {
public:
    constexpr Rat() noexcept = default;
    constexpr Rat(std::int64_t value) noexcept : num_(value) {}  // NOLINT(implicit)
    Rat(std::int64_t num, std::int64_t den);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_ == 0; }
    int sign() const noexcept { return (num_ > 0) - (num_ < 0); }

    /// Parses "n", "n/d" or a plain decimal such as "3.284" (converted exactly).
    static Rat parse(std::string_view text);

    /// "num/den", always with an explicit denominator ("11/1", "0/1").
    std::string str() const;

    /// Decimal rendering rounded half away from zero to `places` digits.
    std::string decimal(int places = 6) const;

    double to_double() const noexcept {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    friend Rat operator+(const Rat& a, const Rat& b);
    friend Rat operator-(const Rat& a, const Rat& b);
    friend Rat operator*(const Rat& a, const Rat& b);
    friend Rat operator/(const Rat& a, const Rat& b);
    Rat operator-() const;

    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    friend bool operator==(const Rat& a, const Rat& b) noexcept = default;
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) noexcept;

private:
    static Rat from_wide(__int128 num, __int128 den);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

inline Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }
inline Rat min(const Rat& a, const Rat& b) { return b < a ? b : a; }

}  // namespace fbl
