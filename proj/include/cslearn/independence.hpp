#ifndef CSLEARN_INDEPENDENCE_HPP
#define CSLEARN_INDEPENDENCE_HPP

#include <vector>

#include "cslearn/dataset.hpp"

namespace cslearn {

struct CITestResult {
    double statistic = 0.0;  // raw G^2, also for the shifted variant
    int dof = 0;
    double p_value = 1.0;
    bool independent = false;
    // Classic count-based heuristic: the test needs N >= 10 * dof to be
    // trusted.  Unreliable tests report independent = true so that callers
    // treating the result as "no evidence of dependence" stay conservative.
    bool reliable = true;
    // Set when the statistic was shifted by a prior before the tail lookup.
    bool audit = false;
};

// Likelihood-ratio test of X _||_ Y | Z:
//   G^2 = 2 sum N_xyz ln( N_xyz N_z / (N_xz N_yz) )
//   dof = (r_x - 1)(r_y - 1) prod_z r_z
// independent when the chi-square upper tail of G^2 exceeds alpha.
CITestResult g2_test(const CategoricalDataset& ds, int x, int y, const std::vector<int>& z,
                     double alpha);

// The test criticized by the audit mode: the statistic is shifted down by a
// confidence prior p before the threshold comparison, i.e. dependence needs
// G^2 - p > chi2_{alpha,dof}.  Reported p_value uses max(G^2 - p, 0); the
// statistic field keeps the raw G^2.  prior_shift must be >= 0.
CITestResult g2_prior_adjusted(const CategoricalDataset& ds, int x, int y,
                               const std::vector<int>& z, double alpha, double prior_shift);

// Plug-in mutual information in nats from empirical frequencies.
double mutual_information(const CategoricalDataset& ds, int x, int y);

// Chi-square helpers (upper tail probability and its inverse).
double chi_squared_upper_tail(double statistic, int dof);
double chi_squared_critical(double alpha, int dof);

} // namespace cslearn

#endif
