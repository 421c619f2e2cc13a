#include "blossom_lp/numeric.hpp"

#include <algorithm>
#include <stdexcept>

#include "blossom_lp/errors.hpp"

namespace blossom_lp {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Parse: return "parse";
        case ErrorKind::InvalidArgument: return "invalid_argument";
        case ErrorKind::Infeasible: return "infeasible";
        case ErrorKind::NonUnique: return "non_unique";
        case ErrorKind::NonConvergence: return "non_convergence";
        case ErrorKind::IterationBudgetExceeded: return "iteration_budget_exceeded";
        case ErrorKind::Internal: return "internal";
    }
    return "unknown";
}

Dyadic::Dyadic(mpz_class numerator, unsigned exponent)
    : numerator_(std::move(numerator)), exponent_(exponent) {
    canonicalize();
}

Dyadic Dyadic::from_string(const std::string& decimal_integer) {
    try {
        return Dyadic(mpz_class(decimal_integer, 10));
    } catch (const std::invalid_argument&) {
        throw SolverError(ErrorKind::InvalidArgument, "not an integer: '" + decimal_integer + "'");
    }
}

void Dyadic::canonicalize() {
    if (sgn(numerator_) == 0) {
        exponent_ = 0;
        return;
    }
    if (exponent_ == 0) return;
    const auto zeros = static_cast<unsigned>(mpz_scan1(numerator_.get_mpz_t(), 0));
    const unsigned shift = std::min(zeros, exponent_);
    if (shift > 0) {
        mpz_tdiv_q_2exp(numerator_.get_mpz_t(), numerator_.get_mpz_t(), shift);
        exponent_ -= shift;
    }
}

Dyadic Dyadic::halved() const {
    Dyadic out;
    if (is_zero()) return out;
    if (mpz_even_p(numerator_.get_mpz_t())) {
        mpz_tdiv_q_2exp(out.numerator_.get_mpz_t(), numerator_.get_mpz_t(), 1);
        out.exponent_ = exponent_;
        if (exponent_ > 0) out.canonicalize();
    } else {
        out.numerator_ = numerator_;
        out.exponent_ = exponent_ + 1;
    }
    return out;
}

Dyadic Dyadic::doubled() const {
    Dyadic out;
    if (is_zero()) return out;
    if (exponent_ > 0) {
        out.numerator_ = numerator_;
        out.exponent_ = exponent_ - 1;
    } else {
        mpz_mul_2exp(out.numerator_.get_mpz_t(), numerator_.get_mpz_t(), 1);
    }
    return out;
}

Dyadic& Dyadic::operator+=(const Dyadic& other) {
    if (exponent_ == other.exponent_) {
        numerator_ += other.numerator_;
    } else if (exponent_ > other.exponent_) {
        mpz_class scaled;
        mpz_mul_2exp(scaled.get_mpz_t(), other.numerator_.get_mpz_t(), exponent_ - other.exponent_);
        numerator_ += scaled;
    } else {
        mpz_mul_2exp(numerator_.get_mpz_t(), numerator_.get_mpz_t(), other.exponent_ - exponent_);
        numerator_ += other.numerator_;
        exponent_ = other.exponent_;
    }
    canonicalize();
    return *this;
}

Dyadic& Dyadic::operator-=(const Dyadic& other) {
    return *this += -other;
}

Dyadic Dyadic::operator-() const {
    Dyadic out = *this;
    out.numerator_ = -out.numerator_;
    return out;
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    int c;
    if (a.exponent_ == b.exponent_) {
        c = cmp(a.numerator_, b.numerator_);
    } else if (a.exponent_ > b.exponent_) {
        mpz_class scaled;
        mpz_mul_2exp(scaled.get_mpz_t(), b.numerator_.get_mpz_t(), a.exponent_ - b.exponent_);
        c = cmp(a.numerator_, scaled);
    } else {
        mpz_class scaled;
        mpz_mul_2exp(scaled.get_mpz_t(), a.numerator_.get_mpz_t(), b.exponent_ - a.exponent_);
        c = cmp(scaled, b.numerator_);
    }
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::string Dyadic::to_decimal() const {
    mpz_class magnitude = abs(numerator_);
    const std::string sign = sgn(numerator_) < 0 ? "-" : "";
    if (exponent_ == 0) return sign + magnitude.get_str() + ".0";

    // n / 2^k == n * 5^k / 10^k; the fraction has exactly k digits.
    mpz_class pow5;
    mpz_ui_pow_ui(pow5.get_mpz_t(), 5, exponent_);
    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, exponent_);
    const mpz_class scaled = magnitude * pow5;
    const mpz_class integer_part = scaled / pow10;
    const mpz_class fraction = scaled % pow10;
    std::string digits = fraction.get_str();
    digits.insert(0, exponent_ - digits.size(), '0');
    return sign + integer_part.get_str() + "." + digits;
}

Dyadic dyadic_add(const Dyadic& a, const Dyadic& b) { return a + b; }

Dyadic dyadic_halve(const Dyadic& a) { return a.halved(); }

std::strong_ordering operator<=>(const TieBreakCost& a, const TieBreakCost& b) {
    if (auto c = a.primary <=> b.primary; c != 0) return c;
    const int c = cmp(a.secondary, b.secondary);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

int TieBreakCost::sign() const {
    if (const int s = primary.sign(); s != 0) return s;
    return sgn(secondary);
}

std::pair<TieBreakCost, Order> cost_min(const TieBreakCost& a, const TieBreakCost& b) {
    const auto c = a <=> b;
    if (c < 0) return {a, Order::Less};
    if (c > 0) return {b, Order::Greater};
    return {a, Order::Equal};
}

}  // namespace blossom_lp
