#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "singlex/errors.hpp"

namespace singlex {

enum class AffectiveDimension { Pleasantness, Attention, Sensitivity, Aptitude };

inline constexpr std::array<AffectiveDimension, 4> kAllDimensions = {
    AffectiveDimension::Pleasantness, AffectiveDimension::Attention,
    AffectiveDimension::Sensitivity, AffectiveDimension::Aptitude};

inline std::string to_string(AffectiveDimension d) {
    switch (d) {
        case AffectiveDimension::Pleasantness: return "Pleasantness";
        case AffectiveDimension::Attention: return "Attention";
        case AffectiveDimension::Sensitivity: return "Sensitivity";
        case AffectiveDimension::Aptitude: return "Aptitude";
    }
    return "?";
}

// Four analog activations in [-1, 1].
struct SenticVector {
    double pleasantness = 0.0;
    double attention = 0.0;
    double sensitivity = 0.0;
    double aptitude = 0.0;

    double operator[](AffectiveDimension d) const {
        switch (d) {
            case AffectiveDimension::Pleasantness: return pleasantness;
            case AffectiveDimension::Attention: return attention;
            case AffectiveDimension::Sensitivity: return sensitivity;
            case AffectiveDimension::Aptitude: return aptitude;
        }
        return 0.0;
    }

    SenticVector clamped() const {
        auto cl = [](double x) { return x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x); };
        return {cl(pleasantness), cl(attention), cl(sensitivity), cl(aptitude)};
    }
};

struct GaussParams {
    double sigma = 1.0 / std::sqrt(2.0 * std::numbers::pi);  // |G(0)| = 1
};

/// Activation curve G(x) = -(1 / (sigma sqrt(2 pi))) exp(-x^2 / (2 sigma^2)),
/// sign included.
inline double gaussian_g(double x, const GaussParams& params = {}) {
    if (!(params.sigma > 0.0) || !std::isfinite(params.sigma))
        throw OutOfRange("sigma must be positive and finite");
    double s = params.sigma;
    return -(1.0 / (s * std::sqrt(2.0 * std::numbers::pi))) *
           std::exp(-(x * x) / (2.0 * s * s));
}

// One of the 24 sentic level names, or "neutral".
struct SenticLevel {
    AffectiveDimension dimension;
    int band;  // -3..3, 0 = neutral
    std::string label;
};

/// Fixed (dimension, band) -> name table; band in -3..3, 0 = "neutral".
inline std::string sentic_label(AffectiveDimension dim, int band) {
    if (band < -3 || band > 3) throw OutOfRange("band must be in [-3, 3]");
    if (band == 0) return "neutral";
    static constexpr const char* table[4][6] = {
        // -3 .. -1, +1 .. +3
        {"grief", "sadness", "pensiveness", "serenity", "joy", "ecstasy"},
        {"amazement", "surprise", "distraction", "interest", "anticipation",
         "vigilance"},
        {"terror", "fear", "apprehension", "annoyance", "anger", "rage"},
        {"loathing", "disgust", "boredom", "acceptance", "trust", "admiration"},
    };
    int row = static_cast<int>(dim);
    int col = band < 0 ? band + 3 : band + 2;
    return table[row][col];
}

/// Quantize an activation into the seven-band scale. Bands: 0 when
/// |x| <= neutral_delta, else sign(x) * {1, 2, 3} for |x| in
/// (neutral_delta, 1/3], (1/3, 2/3], (2/3, 1].
inline SenticLevel quantize(AffectiveDimension dim, double x,
                            double neutral_delta = 0.05) {
    if (!std::isfinite(x) || std::abs(x) > 1.0)
        throw OutOfRange("activation must lie in [-1, 1]");
    if (!(neutral_delta >= 0.0) || neutral_delta >= 1.0 / 3.0)
        throw OutOfRange("neutral_delta must lie in [0, 1/3)");
    double mag = std::abs(x);
    int band;
    if (mag <= neutral_delta)
        band = 0;
    else if (mag <= 1.0 / 3.0)
        band = 1;
    else if (mag <= 2.0 / 3.0)
        band = 2;
    else
        band = 3;
    if (x < 0.0) band = -band;
    return {dim, band, sentic_label(dim, band)};
}

/// Polarity of a concept list:
/// p = sum_i (Pls + |Att| - |Sns| + Apt) / (3 N).
inline double polarity(const std::vector<SenticVector>& concepts) {
    if (concepts.empty()) throw EmptyInput("polarity needs at least one concept");
    double total = 0.0;
    for (const SenticVector& c : concepts)
        total += c.pleasantness + std::abs(c.attention) - std::abs(c.sensitivity) +
                 c.aptitude;
    return total / (3.0 * static_cast<double>(concepts.size()));
}

/// Compound-emotion rules: "love" = joy + trust with minor Attention and
/// Sensitivity; "jealousy" = joy + trust + anger.
inline std::vector<std::string> detect_compound(const SenticVector& v,
                                                double neutral_delta = 0.05) {
    auto band = [&](AffectiveDimension d) {
        return quantize(d, v[d], neutral_delta).band;
    };
    std::vector<std::string> out;
    int p = band(AffectiveDimension::Pleasantness);
    int ap = band(AffectiveDimension::Aptitude);
    int sns = band(AffectiveDimension::Sensitivity);
    if (p == 2 && ap == 2) {
        if (std::abs(v.attention) <= 1.0 / 3.0 &&
            std::abs(v.sensitivity) <= 1.0 / 3.0)
            out.push_back("love");
        if (sns == 2) out.push_back("jealousy");
    }
    return out;
}

}  // namespace singlex
