#include "lorcap/cantor.hpp"

#include <cmath>
#include <stdexcept>

namespace lorcap {

std::string_view to_string(Variant v) { return v == Variant::Uniform ? "uniform" : "harmonic"; }

Variant parse_variant(std::string_view text) {
    if (text == "uniform") return Variant::Uniform;
    if (text == "harmonic") return Variant::Harmonic;
    throw std::invalid_argument("unknown variant '" + std::string(text) + "' (expected uniform|harmonic)");
}

CantorParams::CantorParams(int n, Rational p, Variant variant)
    : n_(n), p_(std::move(p)), variant_(variant) {
    if (n_ < 2) throw std::invalid_argument("Cantor constructions need n >= 2");
    p_.canonicalize();
    if (!(p_ > 1) || !(p_ < n_)) throw std::invalid_argument("Cantor constructions need 1 < p < n");
    beta_ = p_ / (Rational(n_) - p_);
    beta_.canonicalize();
    if (!mpz_fits_uint_p(beta_.get_den().get_mpz_t()) || beta_.get_den() > 4096) {
        throw std::invalid_argument("beta = " + beta_.get_str() + " has an unsupported denominator");
    }
    root_ = static_cast<unsigned>(beta_.get_den().get_ui());
}

bool CantorParams::beta_identity_holds() const {
    return (beta_ + 1) * (Rational(n_) - p_) == Rational(n_);
}

// ---------------------------------------------------------------------------

Word::Word(int n, std::vector<std::int8_t> signs) : n_(n), signs_(std::move(signs)) {
    if (n_ < 1) throw std::invalid_argument("word dimension must be positive");
    if (signs_.empty() || signs_.size() % static_cast<std::size_t>(n_) != 0) {
        throw std::invalid_argument("word must contain a positive whole number of letters");
    }
    for (auto s : signs_) {
        if (s != 1 && s != -1) throw std::invalid_argument("word coordinates must be +1 or -1");
    }
}

std::span<const std::int8_t> Word::letter(int i) const {
    return std::span<const std::int8_t>(signs_).subspan(static_cast<std::size_t>(i * n_),
                                                        static_cast<std::size_t>(n_));
}

Word Word::prefix(int k) const {
    if (k < 1 || k > length()) throw std::out_of_range("word prefix length out of range");
    return Word(n_, std::vector<std::int8_t>(signs_.begin(), signs_.begin() + k * n_));
}

Word Word::extended(std::span<const std::int8_t> letter) const {
    if (static_cast<int>(letter.size()) != n_) throw std::invalid_argument("letter has wrong dimension");
    std::vector<std::int8_t> out = signs_;
    out.insert(out.end(), letter.begin(), letter.end());
    return Word(n_, std::move(out));
}

std::string Word::to_string() const {
    std::string out;
    for (int i = 0; i < length(); ++i) {
        if (i > 0) out += '|';
        for (auto s : letter(i)) out += s > 0 ? '+' : '-';
    }
    return out;
}

Word Word::parse(int n, std::string_view text) {
    std::vector<std::int8_t> signs;
    for (char c : text) {
        if (c == '+') {
            signs.push_back(1);
        } else if (c == '-') {
            signs.push_back(-1);
        } else if (c != '|') {
            throw std::invalid_argument("bad word character '" + std::string(1, c) + "'");
        }
    }
    return Word(n, std::move(signs));
}

std::vector<Word> enumerate_words(int n, int k, const Budget& budget) {
    if (k < 1) throw std::invalid_argument("word length must be >= 1");
    const std::size_t bits = static_cast<std::size_t>(n) * static_cast<std::size_t>(k);
    if (bits >= 63) budget.require(~std::size_t{0}, "word enumeration");
    const std::size_t count = std::size_t{1} << bits;
    budget.require(count, "enumeration of 2^" + std::to_string(bits) + " words");
    std::vector<Word> words;
    words.reserve(count);
    for (std::size_t code = 0; code < count; ++code) {
        std::vector<std::int8_t> signs(bits);
        for (std::size_t b = 0; b < bits; ++b) {
            bool plus = (code >> (bits - 1 - b)) & 1U;
            signs[b] = plus ? 1 : -1;
        }
        words.emplace_back(n, std::move(signs));
    }
    return words;
}

// ---------------------------------------------------------------------------

namespace {

Surd dyadic_power(const CantorParams& params, const Rational& exponent) {
    return Surd::power_of_two(params.root(), exponent);
}

Surd surd_power(Surd base, int e) {
    Surd out(base.root(), Rational(1));
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

void require_generation(int k) {
    if (k < 1) throw std::invalid_argument("generation must be >= 1");
}

}  // namespace

Surd center_offset(const CantorParams& params, int i) {
    require_generation(i);
    const Rational& beta = params.beta();
    Surd s = dyadic_power(params, beta - Rational(i) * (beta + 1));
    if (params.variant() == Variant::Harmonic) s /= Rational(i);
    return s;
}

Surd outer_half_side(const CantorParams& params, int k) {
    require_generation(k);
    const Rational& beta = params.beta();
    Surd s = dyadic_power(params, beta - Rational(k) * (beta + 1));
    if (params.variant() == Variant::Harmonic) s /= Rational(std::max(k - 1, 1));
    return s;
}

Surd inner_half_side(const CantorParams& params, int k) {
    require_generation(k);
    const Rational& beta = params.beta();
    Surd s = dyadic_power(params, -Rational(k) * (beta + 1));
    if (params.variant() == Variant::Harmonic) s /= Rational(k);
    return s;
}

std::vector<Surd> center_exact(const CantorParams& params, const Word& w) {
    if (w.dim() != params.n()) throw std::invalid_argument("word dimension does not match n");
    std::vector<Surd> c(static_cast<std::size_t>(params.n()), Surd(params.root()));
    for (int i = 1; i <= w.length(); ++i) {
        Surd offset = center_offset(params, i);
        auto letter = w.letter(i - 1);
        for (int a = 0; a < params.n(); ++a) {
            if (letter[static_cast<std::size_t>(a)] > 0) {
                c[static_cast<std::size_t>(a)] += offset;
            } else {
                c[static_cast<std::size_t>(a)] -= offset;
            }
        }
    }
    return c;
}

std::vector<double> center(const CantorParams& params, const Word& w) {
    auto exact = center_exact(params, w);
    std::vector<double> out;
    out.reserve(exact.size());
    for (const auto& c : exact) out.push_back(c.to_double());
    return out;
}

Frame frame(const CantorParams& params, const Word& w) {
    return Frame{center(params, w), outer_half_side(params, w.length()).to_double(),
                 inner_half_side(params, w.length()).to_double(), w.length()};
}

Surd generation_measure(const CantorParams& params, int k) {
    require_generation(k);
    const int n = params.n();
    Surd diff = surd_power(outer_half_side(params, k), n) - surd_power(inner_half_side(params, k), n);
    // 2^{nk} annuli, each of measure (2 outer)^n - (2 inner)^n.
    return diff * pow2(static_cast<long>(n) * (k + 1));
}

Surd core_measure(const CantorParams& params, int k) {
    require_generation(k);
    const int n = params.n();
    return surd_power(inner_half_side(params, k), n) * pow2(static_cast<long>(n) * (k + 1));
}

std::vector<Cube> core_cubes(const CantorParams& params, int k, const Budget& budget) {
    auto words = enumerate_words(params.n(), k, budget);
    double half = inner_half_side(params, k).to_double();
    std::vector<Cube> cubes;
    cubes.reserve(words.size());
    for (const auto& w : words) cubes.push_back(Cube{center(params, w), half});
    return cubes;
}

Surd nesting_margin(const CantorParams& params, int k) {
    return inner_half_side(params, k) - (center_offset(params, k + 1) + outer_half_side(params, k + 1));
}

Surd sibling_overlap(const CantorParams& params, int k) {
    return outer_half_side(params, k + 1) - center_offset(params, k + 1);
}

// ---------------------------------------------------------------------------

std::string_view to_string(Location::Kind kind) {
    switch (kind) {
        case Location::Kind::Frame: return "frame";
        case Location::Kind::Core: return "core";
        case Location::Kind::Gap: return "gap";
        case Location::Kind::Null: return "null";
    }
    return "null";
}

Location locate(const CantorParams& params, std::span<const double> x, int depth) {
    const int n = params.n();
    if (static_cast<int>(x.size()) != n) throw std::invalid_argument("point dimension does not match n");
    if (depth < 1) throw std::invalid_argument("locate depth must be >= 1");
    for (double xi : x) {
        if (!std::isfinite(xi) || std::fabs(xi) > 1.0) {
            throw std::domain_error("point lies outside Q(0, 1)");
        }
    }
    Location out;
    for (double xi : x) {
        if (std::fabs(xi) == 1.0) return out;  // on ∂Q(0, 1)
    }

    const unsigned root = params.root();
    std::vector<Surd> point;
    for (double xi : x) point.emplace_back(root, from_double(xi));
    std::vector<Surd> parent(static_cast<std::size_t>(n), Surd(root));
    std::vector<std::int8_t> signs;

    for (int k = 1; k <= depth; ++k) {
        out.generation = k;
        std::vector<std::int8_t> letter(static_cast<std::size_t>(n));
        for (std::size_t a = 0; a < letter.size(); ++a) {
            int s = (point[a] - parent[a]).sign();
            if (s == 0) return out;  // on a quadrant split
            letter[a] = static_cast<std::int8_t>(s);
        }
        signs.insert(signs.end(), letter.begin(), letter.end());

        Surd offset = center_offset(params, k);
        Surd radius(root);
        for (std::size_t a = 0; a < letter.size(); ++a) {
            parent[a] = letter[a] > 0 ? parent[a] + offset : parent[a] - offset;
            Surd d = abs(point[a] - parent[a]);
            if (d > radius) radius = d;
        }

        Word w(n, signs);
        int vs_outer = (radius - outer_half_side(params, k)).sign();
        if (vs_outer == 0) return out;
        if (vs_outer > 0) return Location{Location::Kind::Gap, w, k};
        int vs_inner = (radius - inner_half_side(params, k)).sign();
        if (vs_inner == 0) return out;
        if (vs_inner > 0) return Location{Location::Kind::Frame, w, k};
        if (k == depth) return Location{Location::Kind::Core, w, k};
    }
    return out;
}

std::vector<FrameRow> frame_rows(const CantorParams& params, int max_generation, const Budget& budget) {
    std::vector<FrameRow> rows;
    for (int k = 1; k <= max_generation; ++k) {
        auto words = enumerate_words(params.n(), k, budget);
        double outer = outer_half_side(params, k).to_double();
        double inner = inner_half_side(params, k).to_double();
        budget.require(rows.size() + words.size(), "frame dump");
        for (auto& w : words) {
            auto c = center(params, w);
            rows.push_back(FrameRow{k, std::move(w), std::move(c), inner, outer});
        }
    }
    return rows;
}

std::vector<FrameRow> axis_projection_rows(const CantorParams& params, int generations) {
    std::vector<FrameRow> rows;
    for (int k = 1; k <= generations; ++k) {
        auto words = enumerate_words(1, k);
        double outer = outer_half_side(params, k).to_double();
        double inner = inner_half_side(params, k).to_double();
        for (auto& w : words) {
            Surd c(params.root());
            for (int i = 1; i <= k; ++i) {
                Surd offset = center_offset(params, i);
                c = w.letter(i - 1)[0] > 0 ? c + offset : c - offset;
            }
            rows.push_back(FrameRow{k, std::move(w), {c.to_double()}, inner, outer});
        }
    }
    return rows;
}

}  // namespace lorcap
