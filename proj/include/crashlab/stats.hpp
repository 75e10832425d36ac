#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace crashlab {

struct StatsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Vargha-Delaney A: probability a draw from x exceeds a draw from y, ties
// counted half.
double a12(const std::vector<double>& x, const std::vector<double>& y);

enum class Magnitude : uint8_t { Negligible, Small, Medium, Large };
const char* to_string(Magnitude m);

// Kitchenham's bands: negligible (0.444, 0.556); small [0.556, 0.638) or
// (0.362, 0.444]; medium [0.638, 0.714) or (0.286, 0.362]; large otherwise.
Magnitude magnitude(double a12_value);

struct MwuResult {
    double u{0.0};  // U statistic of the first sample
    double p{1.0};  // two-sided
    bool exact{false};
};

// Midrank-based U. Exact enumeration over label assignments when either side
// has fewer than 8 observations (and the assignment count stays tractable);
// tie-corrected normal approximation with continuity correction otherwise.
MwuResult mann_whitney_u(const std::vector<double>& x, const std::vector<double>& y);

// The two p-value routes individually (same U statistic).
MwuResult mann_whitney_exact(const std::vector<double>& x, const std::vector<double>& y);
MwuResult mann_whitney_normal(const std::vector<double>& x, const std::vector<double>& y);

struct SpearmanResult {
    double rho{0.0};
    double p{1.0};
};

// Pearson correlation of midranks; p from the t approximation.
SpearmanResult spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

// Midranks of the values (average rank across ties), 1-based.
std::vector<double> midranks(const std::vector<double>& values);

double normal_cdf(double z);
// Regularized incomplete beta, used for the Student-t tail.
double incomplete_beta(double a, double b, double x);
double student_t_two_sided_p(double t, double dof);

}  // namespace crashlab
