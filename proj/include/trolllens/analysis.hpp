#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trolllens/matrix.hpp"

namespace trolllens {

struct MannWhitneyResult {
    double u = 0.0; // U statistic of the first sample, midranks for ties
    double z = 0.0; // 0 on the exact path
    double p = 1.0; // two-sided
    bool exact = false;
};

// Exact permutation distribution (counting DP over the pooled midranks).
// Two-sided p is the probability mass at distance >= |U - n1*n2/2| from
// the mean. Feasible whenever |a|*|b| is small; the auto path uses it
// for |a|*|b| <= 400.
MannWhitneyResult mann_whitney_u_exact(std::span<const double> a, std::span<const double> b);

// Normal approximation with tie-corrected variance and continuity
// correction.
MannWhitneyResult mann_whitney_u_approx(std::span<const double> a, std::span<const double> b);

// Exact when |a|*|b| <= 400, approximation otherwise.
// Errors: EmptySample.
MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

// Per-user cue prevalence: for each non-empty theme the share of the
// theme's tweets with the cue present, averaged across the user's
// non-empty themes. presence[i][c] is per-tweet, per-category; tweets
// with theme < 0 are excluded.
std::vector<double> user_cue_prevalence(std::span<const int> themes,
                                        std::span<const std::vector<std::uint8_t>> presence,
                                        int num_themes, std::size_t num_categories);

struct SignificanceRow {
    std::string family;
    std::string category;
    double troll_mean = 0.0;   // percentage
    double regular_mean = 0.0; // percentage
    bool up = false;           // troll_mean > regular_mean
    int stars = 0;             // 3: p<=0.001, 2: p<=0.01, 1: p<=0.05, 0: ns
    double u = 0.0;
    double z = 0.0;
    double p = 1.0;
};

// One row per category: Mann-Whitney across the two groups' per-user
// prevalences. Prevalence matrices are users x categories in [0, 1].
std::vector<SignificanceRow> significance_table(const std::string& family,
                                                std::span<const std::string> categories,
                                                const Matrix& troll_prevalence,
                                                const Matrix& regular_prevalence);

// "1.39^^^0.74"-style cell with the arrows of Table 3; "x" when ns.
std::string render_significance_cell(const SignificanceRow& row);

struct ThemeEmotionProfile {
    // shares[t] sums to 1 across emotions unless the theme is absent
    std::vector<std::vector<double>> shares;
    std::vector<std::uint8_t> absent;
};

// Per theme: mean per-tweet emotion proportions over all tweets in the
// theme, renormalized across emotions. Themes with no tweets (or no
// emotion mass) are flagged absent.
ThemeEmotionProfile theme_emotion_profile(std::span<const int> themes,
                                          std::span<const std::vector<double>> emotion_proportions,
                                          int num_themes, std::size_t num_emotions);

struct FlipFlopPoint {
    int theme = 0;
    bool has_tweets = false;
    double mean_first = 0.0;
    double mean_second = 0.0;
};

// Per-theme means of an emotion pair for one user, in theme order.
// Errors: TooFewThemes when the user's tweets span fewer than 2 themes.
std::vector<FlipFlopPoint> flipflop_trace(std::span<const int> themes,
                                          std::span<const std::vector<double>> emotion_proportions,
                                          int num_themes, std::size_t first_emotion,
                                          std::size_t second_emotion);

} // namespace trolllens
