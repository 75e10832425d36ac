#include "crashlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace crashlab {

double a12(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.empty() || y.empty()) throw StatsError("a12 needs nonempty samples");
    double wins = 0.0;
    for (const double xi : x)
        for (const double yj : y) {
            if (xi > yj) wins += 1.0;
            else if (xi == yj) wins += 0.5;
        }
    return wins / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
}

const char* to_string(Magnitude m) {
    switch (m) {
        case Magnitude::Negligible: return "negligible";
        case Magnitude::Small: return "small";
        case Magnitude::Medium: return "medium";
        case Magnitude::Large: return "large";
    }
    return "?";
}

Magnitude magnitude(double a) {
    if (a < 0.0 || a > 1.0) throw StatsError("a12 out of [0, 1]");
    if (a > 0.444 && a < 0.556) return Magnitude::Negligible;
    if ((a >= 0.556 && a < 0.638) || (a > 0.362 && a <= 0.444)) return Magnitude::Small;
    if ((a >= 0.638 && a < 0.714) || (a > 0.286 && a <= 0.362)) return Magnitude::Medium;
    return Magnitude::Large;
}

std::vector<double> midranks(const std::vector<double>& values) {
    const size_t n = values.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace {

double u_from_positions(const std::vector<double>& pooled_ranks, const std::vector<size_t>& x_pos,
                        size_t n1) {
    double rank_sum = 0.0;
    for (const size_t p : x_pos) rank_sum += pooled_ranks[p];
    return rank_sum - 0.5 * static_cast<double>(n1) * static_cast<double>(n1 + 1);
}

// Enumerates n-choose-k position subsets, invoking fn on each.
template <typename F>
void for_each_combination(size_t n, size_t k, F fn) {
    std::vector<size_t> idx(k);
    std::iota(idx.begin(), idx.end(), size_t{0});
    while (true) {
        fn(idx);
        size_t i = k;
        while (i > 0) {
            --i;
            if (idx[i] != i + n - k) break;
            if (i == 0) return;
        }
        if (idx[i] == i + n - k) return;
        idx[i] += 1;
        for (size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

double combinations_count(size_t n, size_t k) {
    double c = 1.0;
    for (size_t i = 0; i < k; ++i) c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return c;
}

}  // namespace

namespace {

double u_statistic(const std::vector<double>& x, const std::vector<double>& y,
                   std::vector<double>* out_ranks) {
    std::vector<double> pooled(x);
    pooled.insert(pooled.end(), y.begin(), y.end());
    std::vector<double> ranks = midranks(pooled);
    double rank_sum_x = 0.0;
    for (size_t i = 0; i < x.size(); ++i) rank_sum_x += ranks[i];
    if (out_ranks) *out_ranks = std::move(ranks);
    return rank_sum_x - 0.5 * static_cast<double>(x.size()) * static_cast<double>(x.size() + 1);
}

}  // namespace

MwuResult mann_whitney_exact(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.empty() || y.empty()) throw StatsError("mann_whitney_u needs nonempty samples");
    const size_t n1 = x.size(), n2 = y.size();
    std::vector<double> ranks;
    const double u1 = u_statistic(x, y, &ranks);
    const double mean = 0.5 * static_cast<double>(n1) * static_cast<double>(n2);

    MwuResult result;
    result.u = u1;
    result.exact = true;
    const double observed_dev = std::abs(u1 - mean);
    size_t extreme = 0;
    size_t total = 0;
    for_each_combination(n1 + n2, n1, [&](const std::vector<size_t>& pos) {
        const double u = u_from_positions(ranks, pos, n1);
        if (std::abs(u - mean) >= observed_dev - 1e-12) ++extreme;
        ++total;
    });
    result.p = static_cast<double>(extreme) / static_cast<double>(total);
    return result;
}

MwuResult mann_whitney_normal(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.empty() || y.empty()) throw StatsError("mann_whitney_u needs nonempty samples");
    const size_t n1 = x.size(), n2 = y.size();
    const double u1 = u_statistic(x, y, nullptr);
    const double mean = 0.5 * static_cast<double>(n1) * static_cast<double>(n2);

    MwuResult result;
    result.u = u1;

    std::vector<double> sorted(x);
    sorted.insert(sorted.end(), y.begin(), y.end());
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0.0;
    size_t i = 0;
    while (i < sorted.size()) {
        size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
    }
    const double dn = static_cast<double>(n1 + n2);
    const double variance = (static_cast<double>(n1) * static_cast<double>(n2) / 12.0) *
                            ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
    if (variance <= 0.0) {
        result.p = 1.0;  // all values identical
        return result;
    }
    const double sigma = std::sqrt(variance);
    const double dev = u1 - mean;
    const double cc = dev > 0.0 ? -0.5 : (dev < 0.0 ? 0.5 : 0.0);
    const double z = (dev + cc) / sigma;
    result.p = std::min(1.0, 2.0 * (1.0 - normal_cdf(std::abs(z))));
    return result;
}

MwuResult mann_whitney_u(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n1 = x.size(), n2 = y.size();
    if (std::min(n1, n2) < 8 && n1 > 0 && n2 > 0 &&
        combinations_count(n1 + n2, std::min(n1, n2)) <= 3.0e6) {
        return mann_whitney_exact(x, y);
    }
    return mann_whitney_normal(x, y);
}

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_beta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    const double front = std::exp(ln_beta + a * std::log(x) + b * std::log(1.0 - x));
    const bool swap = x > (a + 1.0) / (a + b + 2.0);
    if (swap) return 1.0 - incomplete_beta(b, a, 1.0 - x);

    // Lentz continued fraction.
    const double tiny = 1e-300;
    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        const double dm = static_cast<double>(m);
        double num = dm * (b - dm) * x / ((a + 2.0 * dm - 1.0) * (a + 2.0 * dm));
        d = 1.0 + num * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        num = -(a + dm) * (a + b + dm) * x / ((a + 2.0 * dm) * (a + 2.0 * dm + 1.0));
        d = 1.0 + num * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-12) break;
    }
    return front * h / a;
}

double student_t_two_sided_p(double t, double dof) {
    if (!std::isfinite(t)) return 0.0;
    const double x = dof / (dof + t * t);
    return incomplete_beta(0.5 * dof, 0.5, x);
}

SpearmanResult spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw StatsError("spearman_rho needs equal-length vectors");
    if (x.size() < 3) throw StatsError("spearman_rho needs n >= 3");
    const auto rx = midranks(x);
    const auto ry = midranks(y);
    const size_t n = x.size();
    double mean_x = 0.0, mean_y = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mean_x += rx[i];
        mean_y += ry[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);
    double cov = 0.0, var_x = 0.0, var_y = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = rx[i] - mean_x;
        const double dy = ry[i] - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    SpearmanResult result;
    if (var_x <= 0.0 || var_y <= 0.0) {
        result.rho = 0.0;
        result.p = 1.0;
        return result;
    }
    result.rho = cov / std::sqrt(var_x * var_y);
    const double r = std::clamp(result.rho, -1.0, 1.0);
    if (std::abs(r) >= 1.0) {
        result.p = 0.0;
        return result;
    }
    const double dof = static_cast<double>(n) - 2.0;
    const double t = r * std::sqrt(dof / (1.0 - r * r));
    result.p = student_t_two_sided_p(t, dof);
    return result;
}

}  // namespace crashlab
