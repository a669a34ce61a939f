#include "lorcap/exact.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace lorcap {

namespace {

constexpr mp_bitcnt_t kSignPrecision = 512;

// θ^e for e in [0, root), at kSignPrecision bits.
const std::vector<mpf_class>& theta_powers(unsigned root) {
    static std::mutex mutex;
    static std::map<unsigned, std::vector<mpf_class>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(root);
    if (it != cache.end()) return it->second;

    mpf_class theta(std::exp2(1.0 / root), kSignPrecision);
    mpf_class two(2, kSignPrecision);
    // Newton on x^root = 2; quadratic convergence from a double seed.
    for (int iter = 0; iter < 12; ++iter) {
        mpf_class power(1, kSignPrecision);
        for (unsigned i = 0; i + 1 < root; ++i) power *= theta;
        mpf_class next((theta * (root - 1) + two / power) / root, kSignPrecision);
        theta = next;
    }
    std::vector<mpf_class> powers;
    mpf_class acc(1, kSignPrecision);
    for (unsigned e = 0; e < root; ++e) {
        powers.push_back(acc);
        acc *= theta;
    }
    return cache.emplace(root, std::move(powers)).first->second;
}

long double mpz_to_long_double_scaled(const mpz_class& num, const mpz_class& den) {
    // num/den > 0. Take the top ~66 bits of the quotient.
    long bits = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
                static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
    long shift = 66 - bits;
    mpz_class a = num, b = den;
    if (shift > 0) {
        a <<= static_cast<mp_bitcnt_t>(shift);
    } else if (shift < 0) {
        b <<= static_cast<mp_bitcnt_t>(-shift);
    }
    mpz_class q = a / b;
    long double value = 0.0L;
    size_t limbs = mpz_size(q.get_mpz_t());
    for (size_t i = limbs; i-- > 0;) {
        value = std::ldexp(value, GMP_NUMB_BITS) +
                static_cast<long double>(mpz_getlimbn(q.get_mpz_t(), static_cast<mp_size_t>(i)));
    }
    return std::ldexp(value, static_cast<int>(-shift));
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
            s.end());
    if (s.empty()) throw std::invalid_argument("empty rational literal");

    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rational r;
        if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
        if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
        r.canonicalize();
        return r;
    }

    bool negative = false;
    size_t pos = 0;
    if (s[pos] == '+' || s[pos] == '-') {
        negative = s[pos] == '-';
        ++pos;
    }
    mpz_class digits = 0;
    long scale = 0;
    bool seen_digit = false, seen_point = false;
    for (; pos < s.size(); ++pos) {
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits = digits * 10 + (c - '0');
            if (seen_point) --scale;
            seen_digit = true;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit) throw std::invalid_argument("bad rational literal: " + s);
    if (pos < s.size()) {
        if (s[pos] != 'e' && s[pos] != 'E') throw std::invalid_argument("bad rational literal: " + s);
        std::string exponent = s.substr(pos + 1);
        size_t used = 0;
        long e = 0;
        try {
            e = std::stol(exponent, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad exponent in literal: " + s);
        }
        if (used != exponent.size()) throw std::invalid_argument("bad exponent in literal: " + s);
        scale += e;
    }
    Rational r(digits);
    mpz_class ten_power;
    mpz_ui_pow_ui(ten_power.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    if (scale >= 0) {
        r *= ten_power;
    } else {
        r /= ten_power;
    }
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

long double to_long_double(const Rational& r) {
    int s = sgn(r);
    if (s == 0) return 0.0L;
    mpz_class num = abs(r.get_num());
    long double v = mpz_to_long_double_scaled(num, r.get_den());
    return s < 0 ? -v : v;
}

double to_double(const Rational& r) { return static_cast<double>(to_long_double(r)); }

Rational from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite value has no rational form");
    Rational r;
    mpq_set_d(r.get_mpq_t(), x);
    return r;
}

Rational pow2(long e) {
    mpz_class one = 1;
    mpz_class big = one << static_cast<mp_bitcnt_t>(e < 0 ? -e : e);
    return e >= 0 ? Rational(big) : Rational(one, big);
}

std::string to_string(const Rational& r) { return r.get_str(); }

// ---------------------------------------------------------------------------

Surd::Surd(unsigned root) : root_(root), coeffs_(root) {
    if (root == 0) throw std::invalid_argument("Surd root must be positive");
}

Surd::Surd(unsigned root, const Rational& value) : Surd(root) { coeffs_[0] = value; }

Surd Surd::power_of_two(unsigned root, const Rational& exponent) {
    Rational scaled = exponent * root;
    scaled.canonicalize();
    if (scaled.get_den() != 1) {
        throw std::invalid_argument("2^" + exponent.get_str() + " is not in Q(2^{1/" +
                                    std::to_string(root) + "})");
    }
    mpz_class m = scaled.get_num();
    mpz_class q, r;
    mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), root);
    Surd out(root);
    out.coeffs_[r.get_ui()] = pow2(q.get_si());
    return out;
}

void Surd::check_compatible(const Surd& other) const {
    if (root_ != other.root_) throw std::invalid_argument("mixing Surds over different fields");
}

bool Surd::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c == 0; });
}

bool Surd::is_rational() const {
    return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const Rational& c) { return c == 0; });
}

Rational Surd::as_rational() const {
    if (!is_rational()) throw std::domain_error("Surd " + to_string() + " is irrational");
    return coeffs_[0];
}

int Surd::sign() const {
    if (is_rational()) return sgn(coeffs_[0]);
    const auto& powers = theta_powers(root_);
    mpf_class sum(0, kSignPrecision), scale(0, kSignPrecision);
    for (unsigned e = 0; e < root_; ++e) {
        if (coeffs_[e] == 0) continue;
        mpf_class term(coeffs_[e], kSignPrecision);
        term *= powers[e];
        sum += term;
        scale += abs(term);
    }
    // A nonzero element this close to zero relative to its terms would need
    // coefficients with hundreds of digits of cancellation.
    mpf_class threshold(scale, kSignPrecision);
    mpf_div_2exp(threshold.get_mpf_t(), threshold.get_mpf_t(), kSignPrecision - 64);
    if (abs(sum) <= threshold) {
        throw std::runtime_error("Surd sign undecidable at working precision: " + to_string());
    }
    return sgn(sum);
}

long double Surd::to_long_double() const {
    long double sum = 0.0L;
    for (unsigned e = 0; e < root_; ++e) {
        if (coeffs_[e] == 0) continue;
        sum += lorcap::to_long_double(coeffs_[e]) *
               std::exp2(static_cast<long double>(e) / static_cast<long double>(root_));
    }
    return sum;
}

Surd Surd::operator-() const {
    Surd out(*this);
    for (auto& c : out.coeffs_) c = -c;
    return out;
}

Surd& Surd::operator+=(const Surd& other) {
    check_compatible(other);
    for (unsigned e = 0; e < root_; ++e) coeffs_[e] += other.coeffs_[e];
    return *this;
}

Surd& Surd::operator-=(const Surd& other) {
    check_compatible(other);
    for (unsigned e = 0; e < root_; ++e) coeffs_[e] -= other.coeffs_[e];
    return *this;
}

Surd& Surd::operator*=(const Surd& other) {
    check_compatible(other);
    std::vector<Rational> out(root_);
    for (unsigned i = 0; i < root_; ++i) {
        if (coeffs_[i] == 0) continue;
        for (unsigned j = 0; j < root_; ++j) {
            if (other.coeffs_[j] == 0) continue;
            Rational term = coeffs_[i] * other.coeffs_[j];
            unsigned e = i + j;
            if (e >= root_) {
                e -= root_;
                term *= 2;  // θ^root = 2
            }
            out[e] += term;
        }
    }
    coeffs_ = std::move(out);
    return *this;
}

Surd& Surd::operator*=(const Rational& factor) {
    for (auto& c : coeffs_) c *= factor;
    return *this;
}

Surd& Surd::operator/=(const Rational& divisor) {
    if (divisor == 0) throw std::domain_error("division of Surd by zero");
    for (auto& c : coeffs_) c /= divisor;
    return *this;
}

bool operator==(const Surd& a, const Surd& b) {
    a.check_compatible(b);
    return a.coeffs_ == b.coeffs_;
}

std::string Surd::to_string() const {
    std::string out;
    for (unsigned e = 0; e < root_; ++e) {
        if (coeffs_[e] == 0) continue;
        if (!out.empty()) out += " + ";
        out += coeffs_[e].get_str();
        if (e > 0) out += "*2^(" + std::to_string(e) + "/" + std::to_string(root_) + ")";
    }
    return out.empty() ? "0" : out;
}

Surd abs(const Surd& x) { return x.sign() < 0 ? -x : x; }

}  // namespace lorcap
