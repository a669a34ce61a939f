#pragma once

// Exact arithmetic used by the Cantor geometry.
//
// Every length and measure of the constructions is an element of the number
// field Q(2^{1/b}), where b is the reduced denominator of beta = p/(n-p).
// Surd stores such an element in the canonical basis {1, θ, ..., θ^{b-1}}
// with θ = 2^{1/b}. Because x^b - 2^a is irreducible for gcd(a, b) = 1, two
// Surds are equal iff their coefficient vectors are equal, so equality and
// zero tests are exact. Ordering falls back to a 512-bit evaluation, which is
// only consulted when the difference is already known to be nonzero.

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace lorcap {

using Rational = mpq_class;

/// Parses "3/2", "-4", "1.25" or "2.5e-1" into an exact rational.
Rational parse_rational(std::string_view text);

/// Nearest long double; handles magnitudes far outside the double range.
long double to_long_double(const Rational& r);
double to_double(const Rational& r);

/// Exact rational value of a finite double.
Rational from_double(double x);

/// 2^e for integer e.
Rational pow2(long e);

std::string to_string(const Rational& r);

class Surd {
public:
    /// Zero in Q(2^{1/root}).
    explicit Surd(unsigned root = 1);
    Surd(unsigned root, const Rational& value);

    /// 2^exponent; exponent * root must be an integer.
    static Surd power_of_two(unsigned root, const Rational& exponent);

    unsigned root() const { return root_; }
    const std::vector<Rational>& coefficients() const { return coeffs_; }

    bool is_zero() const;
    bool is_rational() const;
    /// Throws if the element is irrational.
    Rational as_rational() const;

    int sign() const;
    long double to_long_double() const;
    double to_double() const { return static_cast<double>(to_long_double()); }

    Surd operator-() const;
    Surd& operator+=(const Surd& other);
    Surd& operator-=(const Surd& other);
    Surd& operator*=(const Surd& other);
    Surd& operator*=(const Rational& factor);
    Surd& operator/=(const Rational& divisor);

    friend Surd operator+(Surd a, const Surd& b) { return a += b; }
    friend Surd operator-(Surd a, const Surd& b) { return a -= b; }
    friend Surd operator*(Surd a, const Surd& b) { return a *= b; }
    friend Surd operator*(Surd a, const Rational& b) { return a *= b; }
    friend Surd operator*(const Rational& b, Surd a) { return a *= b; }
    friend Surd operator/(Surd a, const Rational& b) { return a /= b; }

    friend bool operator==(const Surd& a, const Surd& b);
    friend bool operator<(const Surd& a, const Surd& b) { return (a - b).sign() < 0; }
    friend bool operator<=(const Surd& a, const Surd& b) { return (a - b).sign() <= 0; }
    friend bool operator>(const Surd& a, const Surd& b) { return (a - b).sign() > 0; }
    friend bool operator>=(const Surd& a, const Surd& b) { return (a - b).sign() >= 0; }

    std::string to_string() const;

private:
    void check_compatible(const Surd& other) const;

    unsigned root_;
    std::vector<Rational> coeffs_;
};

Surd abs(const Surd& x);

}  // namespace lorcap
