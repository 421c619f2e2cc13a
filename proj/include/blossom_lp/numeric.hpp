#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>

#include <gmpxx.h>

namespace blossom_lp {

// Exact value numerator / 2^exponent. Canonical: when exponent > 0 the
// numerator is odd; zero is always stored with exponent 0.
class Dyadic {
public:
    Dyadic() = default;
    Dyadic(long value) : numerator_(value) {}  // NOLINT(google-explicit-constructor)
    explicit Dyadic(mpz_class numerator, unsigned exponent = 0);

    static Dyadic from_string(const std::string& decimal_integer);

    const mpz_class& numerator() const { return numerator_; }
    unsigned exponent() const { return exponent_; }

    bool is_zero() const { return sgn(numerator_) == 0; }
    bool is_integer() const { return exponent_ == 0; }
    int sign() const { return sgn(numerator_); }

    Dyadic halved() const;
    Dyadic doubled() const;

    Dyadic& operator+=(const Dyadic& other);
    Dyadic& operator-=(const Dyadic& other);
    Dyadic operator-() const;

    friend Dyadic operator+(Dyadic a, const Dyadic& b) { return a += b; }
    friend Dyadic operator-(Dyadic a, const Dyadic& b) { return a -= b; }

    friend bool operator==(const Dyadic& a, const Dyadic& b) {
        return a.exponent_ == b.exponent_ && a.numerator_ == b.numerator_;
    }
    friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

    /// Decimal rendering, e.g. "-9.5", "12.0", "0.125". Exact, no rounding.
    std::string to_decimal() const;

private:
    void canonicalize();

    mpz_class numerator_{0};
    unsigned exponent_ = 0;
};

Dyadic dyadic_add(const Dyadic& a, const Dyadic& b);
Dyadic dyadic_halve(const Dyadic& a);

// Lexicographic (primary, secondary) cost. The secondary channel only
// decides comparisons whose primaries are exactly equal.
struct TieBreakCost {
    Dyadic primary;
    mpz_class secondary{0};

    TieBreakCost() = default;
    TieBreakCost(Dyadic p, mpz_class s = 0) : primary(std::move(p)), secondary(std::move(s)) {}  // NOLINT

    TieBreakCost& operator+=(const TieBreakCost& other) {
        primary += other.primary;
        secondary += other.secondary;
        return *this;
    }
    TieBreakCost& operator-=(const TieBreakCost& other) {
        primary -= other.primary;
        secondary -= other.secondary;
        return *this;
    }
    TieBreakCost operator-() const { return {-primary, -secondary}; }

    friend TieBreakCost operator+(TieBreakCost a, const TieBreakCost& b) { return a += b; }
    friend TieBreakCost operator-(TieBreakCost a, const TieBreakCost& b) { return a -= b; }

    friend bool operator==(const TieBreakCost& a, const TieBreakCost& b) {
        return a.primary == b.primary && a.secondary == b.secondary;
    }
    friend std::strong_ordering operator<=>(const TieBreakCost& a, const TieBreakCost& b);

    /// Negative, zero or positive under the lexicographic order.
    int sign() const;
};

enum class Order { Less, Equal, Greater };

/// Lexicographic minimum of two costs and how `a` compares to `b`.
std::pair<TieBreakCost, Order> cost_min(const TieBreakCost& a, const TieBreakCost& b);

}  // namespace blossom_lp
