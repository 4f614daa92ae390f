#include "trolllens/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "trolllens/error.hpp"
#include "trolllens/util.hpp"

namespace trolllens {

namespace {

// midranks of the pooled samples, doubled so they are exact integers
struct PooledRanks {
    std::vector<long> doubled_rank_a; // per element of a
    std::vector<long> doubled_rank_pooled;
    std::vector<std::size_t> tie_sizes;
};

PooledRanks pooled_midranks(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size() + b.size();
    std::vector<std::pair<double, std::size_t>> pooled;
    pooled.reserve(n);
    for (std::size_t i = 0; i < a.size(); ++i) pooled.emplace_back(a[i], i);
    for (std::size_t i = 0; i < b.size(); ++i) pooled.emplace_back(b[i], a.size() + i);
    std::sort(pooled.begin(), pooled.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });

    PooledRanks out;
    out.doubled_rank_a.assign(a.size(), 0);
    out.doubled_rank_pooled.assign(n, 0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && pooled[j].first == pooled[i].first) ++j;
        // midrank of positions i+1 .. j  ->  doubled = (i+1) + j
        long doubled = static_cast<long>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) {
            out.doubled_rank_pooled[k] = doubled;
            if (pooled[k].second < a.size()) out.doubled_rank_a[pooled[k].second] = doubled;
        }
        out.tie_sizes.push_back(j - i);
        i = j;
    }
    return out;
}

double observed_u(std::span<const double> a, std::span<const double> b) {
    PooledRanks ranks = pooled_midranks(a, b);
    long doubled_rank_sum = 0;
    for (long r : ranks.doubled_rank_a) doubled_rank_sum += r;
    double rank_sum = 0.5 * static_cast<double>(doubled_rank_sum);
    return rank_sum - 0.5 * static_cast<double>(a.size()) * (a.size() + 1);
}

double normal_sf(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

void require_samples(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) raise("EmptySample", "Mann-Whitney needs non-empty samples");
}

} // namespace

MannWhitneyResult mann_whitney_u_approx(std::span<const double> a, std::span<const double> b) {
    require_samples(a, b);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double n = na + nb;

    PooledRanks ranks = pooled_midranks(a, b);
    MannWhitneyResult res;
    res.u = observed_u(a, b);
    res.exact = false;

    double tie_term = 0.0;
    for (std::size_t t : ranks.tie_sizes) {
        double td = static_cast<double>(t);
        tie_term += td * td * td - td;
    }
    double variance = na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (variance <= 0.0) {
        res.z = 0.0;
        res.p = 1.0;
        return res;
    }
    const double mu = na * nb / 2.0;
    double diff = res.u - mu;
    double cc = diff > 0.0 ? -0.5 : (diff < 0.0 ? 0.5 : 0.0); // continuity correction
    res.z = (diff + cc) / std::sqrt(variance);
    res.p = std::min(1.0, 2.0 * normal_sf(std::abs(res.z)));
    return res;
}

MannWhitneyResult mann_whitney_u_exact(std::span<const double> a, std::span<const double> b) {
    require_samples(a, b);
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    const std::size_t n = na + nb;
    const bool a_is_small = na <= nb;
    const std::size_t m = a_is_small ? na : nb;

    PooledRanks ranks = pooled_midranks(a, b);

    // distribution of the doubled rank-sum of an m-subset of the pool
    long max_sum = 0;
    {
        std::vector<long> sorted = ranks.doubled_rank_pooled;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < m; ++i) max_sum += sorted[n - 1 - i];
    }
    std::vector<std::vector<double>> count(m + 1, std::vector<double>(max_sum + 1, 0.0));
    count[0][0] = 1.0;
    for (std::size_t e = 0; e < n; ++e) {
        long r = ranks.doubled_rank_pooled[e];
        std::size_t jmax = std::min(m, e + 1);
        for (std::size_t j = jmax; j >= 1; --j) {
            auto& dst = count[j];
            const auto& src = count[j - 1];
            for (long s = max_sum - r; s >= 0; --s)
                if (src[s] != 0.0) dst[s + r] += src[s];
        }
    }

    // doubled U of the small group for a doubled rank-sum s:
    //   u2 = s - m(m+1); distance from the mean in doubled units
    const long m_term = static_cast<long>(m) * static_cast<long>(m + 1);
    const long doubled_mu = static_cast<long>(na) * static_cast<long>(nb);

    MannWhitneyResult res;
    res.exact = true;
    res.u = observed_u(a, b);
    res.z = 0.0;

    // observed distance, computed in exact doubled units via the small group
    long obs_doubled_rank = 0;
    if (a_is_small) {
        for (long r : ranks.doubled_rank_a) obs_doubled_rank += r;
    } else {
        long total = 0;
        for (long r : ranks.doubled_rank_pooled) total += r;
        long a_sum = 0;
        for (long r : ranks.doubled_rank_a) a_sum += r;
        obs_doubled_rank = total - a_sum;
    }
    const long obs_u2 = obs_doubled_rank - m_term;
    const long obs_dist = std::labs(obs_u2 - doubled_mu);

    double tail = 0.0;
    double total_count = 0.0;
    for (long s = 0; s <= max_sum; ++s) {
        double c = count[m][s];
        if (c == 0.0) continue;
        total_count += c;
        if (std::labs((s - m_term) - doubled_mu) >= obs_dist) tail += c;
    }
    res.p = tail / total_count;
    return res;
}

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
    require_samples(a, b);
    if (a.size() * b.size() <= 400) return mann_whitney_u_exact(a, b);
    return mann_whitney_u_approx(a, b);
}

std::vector<double> user_cue_prevalence(std::span<const int> themes,
                                        std::span<const std::vector<std::uint8_t>> presence,
                                        int num_themes, std::size_t num_categories) {
    if (themes.size() != presence.size())
        raise("LengthMismatch", "themes and presence differ in length");
    std::vector<std::vector<long>> hits(static_cast<std::size_t>(num_themes),
                                        std::vector<long>(num_categories, 0));
    std::vector<long> tweets(static_cast<std::size_t>(num_themes), 0);
    for (std::size_t i = 0; i < themes.size(); ++i) {
        int t = themes[i];
        if (t < 0 || t >= num_themes) continue;
        ++tweets[static_cast<std::size_t>(t)];
        for (std::size_t c = 0; c < num_categories; ++c)
            if (presence[i][c]) ++hits[static_cast<std::size_t>(t)][c];
    }
    std::vector<double> out(num_categories, 0.0);
    long active_themes = 0;
    for (int t = 0; t < num_themes; ++t) {
        if (tweets[static_cast<std::size_t>(t)] == 0) continue;
        ++active_themes;
        for (std::size_t c = 0; c < num_categories; ++c)
            out[c] += static_cast<double>(hits[static_cast<std::size_t>(t)][c]) /
                      static_cast<double>(tweets[static_cast<std::size_t>(t)]);
    }
    if (active_themes > 0)
        for (double& v : out) v /= static_cast<double>(active_themes);
    return out;
}

std::vector<SignificanceRow> significance_table(const std::string& family,
                                                std::span<const std::string> categories,
                                                const Matrix& troll_prevalence,
                                                const Matrix& regular_prevalence) {
    if (troll_prevalence.cols != categories.size() || regular_prevalence.cols != categories.size())
        raise("LengthMismatch", "prevalence matrices do not match the category list");

    std::vector<SignificanceRow> rows;
    rows.reserve(categories.size());
    std::vector<double> troll_col(troll_prevalence.rows);
    std::vector<double> regular_col(regular_prevalence.rows);

    for (std::size_t c = 0; c < categories.size(); ++c) {
        for (std::size_t r = 0; r < troll_prevalence.rows; ++r)
            troll_col[r] = troll_prevalence.at(r, c);
        for (std::size_t r = 0; r < regular_prevalence.rows; ++r)
            regular_col[r] = regular_prevalence.at(r, c);

        SignificanceRow row;
        row.family = family;
        row.category = categories[c];
        double troll_sum = 0.0, regular_sum = 0.0;
        for (double v : troll_col) troll_sum += v;
        for (double v : regular_col) regular_sum += v;
        row.troll_mean = troll_col.empty() ? 0.0 : 100.0 * troll_sum / troll_col.size();
        row.regular_mean = regular_col.empty() ? 0.0 : 100.0 * regular_sum / regular_col.size();
        row.up = row.troll_mean > row.regular_mean;

        MannWhitneyResult mw = mann_whitney_u(troll_col, regular_col);
        row.u = mw.u;
        row.z = mw.z;
        row.p = mw.p;
        row.stars = mw.p <= 0.001 ? 3 : mw.p <= 0.01 ? 2 : mw.p <= 0.05 ? 1 : 0;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_significance_cell(const SignificanceRow& row) {
    if (row.stars == 0) return "×"; // ×
    std::string arrows;
    for (int i = 0; i < row.stars; ++i) arrows += row.up ? "↑" : "↓";
    return util::format_fixed(row.troll_mean, 2) + arrows + util::format_fixed(row.regular_mean, 2);
}

ThemeEmotionProfile theme_emotion_profile(std::span<const int> themes,
                                          std::span<const std::vector<double>> emotion_proportions,
                                          int num_themes, std::size_t num_emotions) {
    if (themes.size() != emotion_proportions.size())
        raise("LengthMismatch", "themes and emotion proportions differ in length");
    ThemeEmotionProfile profile;
    profile.shares.assign(static_cast<std::size_t>(num_themes),
                          std::vector<double>(num_emotions, 0.0));
    profile.absent.assign(static_cast<std::size_t>(num_themes), 1);

    std::vector<long> tweets(static_cast<std::size_t>(num_themes), 0);
    for (std::size_t i = 0; i < themes.size(); ++i) {
        int t = themes[i];
        if (t < 0 || t >= num_themes) continue;
        ++tweets[static_cast<std::size_t>(t)];
        for (std::size_t e = 0; e < num_emotions; ++e)
            profile.shares[static_cast<std::size_t>(t)][e] += emotion_proportions[i][e];
    }
    for (int t = 0; t < num_themes; ++t) {
        auto& share = profile.shares[static_cast<std::size_t>(t)];
        if (tweets[static_cast<std::size_t>(t)] == 0) continue;
        double sum = 0.0;
        for (double v : share) sum += v;
        if (sum <= 0.0) {
            std::fill(share.begin(), share.end(), 0.0);
            continue; // theme exists but carries no emotion mass
        }
        for (double& v : share) v /= sum;
        profile.absent[static_cast<std::size_t>(t)] = 0;
    }
    return profile;
}

std::vector<FlipFlopPoint> flipflop_trace(std::span<const int> themes,
                                          std::span<const std::vector<double>> emotion_proportions,
                                          int num_themes, std::size_t first_emotion,
                                          std::size_t second_emotion) {
    if (themes.size() != emotion_proportions.size())
        raise("LengthMismatch", "themes and emotion proportions differ in length");

    std::vector<FlipFlopPoint> trace(static_cast<std::size_t>(num_themes));
    std::vector<long> tweets(static_cast<std::size_t>(num_themes), 0);
    for (std::size_t i = 0; i < themes.size(); ++i) {
        int t = themes[i];
        if (t < 0 || t >= num_themes) continue;
        ++tweets[static_cast<std::size_t>(t)];
        trace[static_cast<std::size_t>(t)].mean_first += emotion_proportions[i][first_emotion];
        trace[static_cast<std::size_t>(t)].mean_second += emotion_proportions[i][second_emotion];
    }
    int themes_with_tweets = 0;
    for (int t = 0; t < num_themes; ++t) {
        auto& point = trace[static_cast<std::size_t>(t)];
        point.theme = t;
        long n = tweets[static_cast<std::size_t>(t)];
        if (n > 0) {
            ++themes_with_tweets;
            point.has_tweets = true;
            point.mean_first /= static_cast<double>(n);
            point.mean_second /= static_cast<double>(n);
        }
    }
    if (themes_with_tweets < 2)
        raise("TooFewThemes", "flip-flop trace needs tweets in at least 2 themes");
    return trace;
}

} // namespace trolllens
