#pragma once

// Geometry of the two Cantor-type constructions.
//
// For a word w = (w_1, ..., w_k) of sign vectors in {-1, 1}^n the center is
//   Uniform:  c_w = Σ_i 2^{β - i(β+1)} w_i
//   Harmonic: c_w = Σ_i 2^{β - i(β+1)} w_i / i
// and the frame A_w is the cubic annulus Q(c_w, outer_k) \ Q(c_w, inner_k),
//   Uniform:  outer_k = 2^{β - k(β+1)},               inner_k = 2^{-k(β+1)}
//   Harmonic: outer_k = 2^{β - k(β+1)} / max(k-1, 1), inner_k = 2^{-k(β+1)} / k
// with β = p / (n - p). Lengths and measures are exact elements of Q(2^{1/b}).

#include "lorcap/budget.hpp"
#include "lorcap/exact.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lorcap {

enum class Variant { Uniform, Harmonic };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view text);

class CantorParams {
public:
    /// Requires n >= 2 and 1 < p < n.
    CantorParams(int n, Rational p, Variant variant = Variant::Uniform);

    int n() const { return n_; }
    const Rational& p() const { return p_; }
    const Rational& beta() const { return beta_; }
    Variant variant() const { return variant_; }

    double p_value() const { return to_double(p_); }
    double beta_value() const { return to_double(beta_); }

    /// Denominator b of beta; all lengths live in Q(2^{1/b}).
    unsigned root() const { return root_; }

    /// (β + 1)(n - p) == n, checked in exact arithmetic.
    bool beta_identity_holds() const;

    CantorParams with_variant(Variant v) const { return CantorParams(n_, p_, v); }

private:
    int n_;
    Rational p_;
    Rational beta_;
    Variant variant_;
    unsigned root_;
};

/// A word of sign vectors, stored flat: letter i occupies [i*n, (i+1)*n).
class Word {
public:
    Word(int n, std::vector<std::int8_t> signs);

    int dim() const { return n_; }
    int length() const { return static_cast<int>(signs_.size()) / n_; }
    std::span<const std::int8_t> letter(int i) const;
    std::span<const std::int8_t> signs() const { return signs_; }

    Word prefix(int k) const;
    Word extended(std::span<const std::int8_t> letter) const;

    /// Letters separated by '|', each coordinate rendered as '+' or '-'.
    std::string to_string() const;
    static Word parse(int n, std::string_view text);

    friend bool operator==(const Word&, const Word&) = default;

private:
    int n_;
    std::vector<std::int8_t> signs_;
};

/// All 2^{nk} words of length k in lexicographic order (-1 before +1, earlier
/// letters and coordinates more significant).
std::vector<Word> enumerate_words(int n, int k, const Budget& budget = Budget::from_env());

// Exact building blocks.
Surd center_offset(const CantorParams& params, int i);  // distance of generation-i child centers
Surd outer_half_side(const CantorParams& params, int k);
Surd inner_half_side(const CantorParams& params, int k);
std::vector<Surd> center_exact(const CantorParams& params, const Word& w);

std::vector<double> center(const CantorParams& params, const Word& w);

struct Frame {
    std::vector<double> center;
    double outer = 0.0;
    double inner = 0.0;
    int generation = 0;
};

Frame frame(const CantorParams& params, const Word& w);

/// Exact Lebesgue measure of the union of generation-k frames (k >= 1).
Surd generation_measure(const CantorParams& params, int k);
/// Exact total measure of the 2^{nk} generation-k core cubes Q(c_w, inner_k).
Surd core_measure(const CantorParams& params, int k);

struct Cube {
    std::vector<double> center;
    double half_side = 0.0;
};

/// Closed generation-k cubes Q(c_w, inner_k), in enumerate_words order.
std::vector<Cube> core_cubes(const CantorParams& params, int k, const Budget& budget = Budget::from_env());

/// parent inner_k - (offset_{k+1} + outer_{k+1}); zero for Uniform, positive for Harmonic.
Surd nesting_margin(const CantorParams& params, int k);
/// outer_{k+1} - offset_{k+1}; positive means sibling children overlap.
Surd sibling_overlap(const CantorParams& params, int k);

struct Location {
    enum class Kind {
        Frame,  // x in the open annulus A_w, |w| = generation
        Core,   // x in the open generation-`depth` cube around c_w
        Gap,    // x in the parent inner cube but outside Q(c_w, outer) (Harmonic only)
        Null    // x on a cube boundary or on a quadrant split
    };
    Kind kind = Kind::Null;
    std::optional<Word> word;
    int generation = 0;
};

std::string_view to_string(Location::Kind kind);

/// Descends through the quadrants of successive generations with exact
/// comparisons. Throws std::domain_error if x lies outside the closed Q(0, 1).
Location locate(const CantorParams& params, std::span<const double> x, int depth);

struct FrameRow {
    int generation = 0;
    Word word;
    std::vector<double> center;
    double inner = 0.0;
    double outer = 0.0;
};

/// Every frame of generations 1..max_generation, generation-major.
std::vector<FrameRow> frame_rows(const CantorParams& params, int max_generation,
                                 const Budget& budget = Budget::from_env());

/// The construction restricted to the first coordinate axis: the product
/// structure makes this the one-dimensional Cantor construction with the
/// same β. Rows carry 1-letter-per-generation words over {-1, +1}.
std::vector<FrameRow> axis_projection_rows(const CantorParams& params, int generations);

}  // namespace lorcap
