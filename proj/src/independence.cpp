#include "cslearn/independence.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "cslearn/errors.hpp"

namespace cslearn {

namespace {

void check_args(const CategoricalDataset& ds, int x, int y, const std::vector<int>& z) {
    const int n = ds.variable_count();
    if (x < 0 || x >= n || y < 0 || y >= n) fail(Errc::InvalidArgument, "ci test: variable out of range");
    if (x == y) fail(Errc::InvalidArgument, "ci test: x and y must differ");
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i] < 0 || z[i] >= n) fail(Errc::InvalidArgument, "ci test: conditioning variable out of range");
        if (z[i] == x || z[i] == y)
            fail(Errc::InvalidArgument, "ci test: conditioning set contains x or y");
        for (std::size_t j = i + 1; j < z.size(); ++j)
            if (z[i] == z[j]) fail(Errc::InvalidArgument, "ci test: duplicate conditioning variable");
    }
}

struct G2Stat {
    double g2 = 0.0;
    int dof = 0;
};

G2Stat g2_statistic(const CategoricalDataset& ds, int x, int y, const std::vector<int>& z) {
    const int rx = ds.cardinality(x), ry = ds.cardinality(y);
    std::size_t qz = 1;
    for (int v : z) {
        qz *= std::size_t(ds.cardinality(v));
        if (qz * std::size_t(rx) * std::size_t(ry) > (std::size_t(1) << 28))
            fail(Errc::InvalidArgument, "ci test: conditioning state space too large");
    }

    std::vector<long long> nxyz(qz * rx * ry, 0), nxz(qz * rx, 0), nyz(qz * ry, 0), nz(qz, 0);
    for (int row = 0; row < ds.row_count(); ++row) {
        std::size_t cz = 0;
        for (int v : z) cz = cz * std::size_t(ds.cardinality(v)) + ds.value(row, v);
        int vx = ds.value(row, x), vy = ds.value(row, y);
        ++nxyz[(cz * rx + vx) * ry + vy];
        ++nxz[cz * rx + vx];
        ++nyz[cz * ry + vy];
        ++nz[cz];
    }

    double g2 = 0.0;
    for (std::size_t cz = 0; cz < qz; ++cz) {
        if (nz[cz] == 0) continue;
        for (int vx = 0; vx < rx; ++vx) {
            long long cxz = nxz[cz * rx + vx];
            if (cxz == 0) continue;
            for (int vy = 0; vy < ry; ++vy) {
                long long c = nxyz[(cz * rx + vx) * ry + vy];
                if (c == 0) continue;
                long long cyz = nyz[cz * ry + vy];
                g2 += double(c) * std::log(double(c) * double(nz[cz]) / (double(cxz) * double(cyz)));
            }
        }
    }
    g2 *= 2.0;
    // Tiny negative values can appear through rounding when the statistic is
    // exactly zero in exact arithmetic.
    if (g2 < 0.0 && g2 > -1e-9) g2 = 0.0;

    G2Stat out;
    out.g2 = g2;
    double dof = double(rx - 1) * double(ry - 1);
    for (int v : z) dof *= double(ds.cardinality(v));
    out.dof = int(dof);
    return out;
}

} // namespace

double chi_squared_upper_tail(double statistic, int dof) {
    if (dof < 1) fail(Errc::InvalidArgument, "chi_squared_upper_tail: dof must be >= 1");
    if (statistic <= 0.0) return 1.0;
    boost::math::chi_squared_distribution<double> dist{double(dof)};
    return boost::math::cdf(boost::math::complement(dist, statistic));
}

double chi_squared_critical(double alpha, int dof) {
    if (dof < 1) fail(Errc::InvalidArgument, "chi_squared_critical: dof must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) fail(Errc::InvalidArgument, "chi_squared_critical: alpha in (0,1)");
    boost::math::chi_squared_distribution<double> dist{double(dof)};
    return boost::math::quantile(boost::math::complement(dist, alpha));
}

CITestResult g2_test(const CategoricalDataset& ds, int x, int y, const std::vector<int>& z,
                     double alpha) {
    return g2_prior_adjusted(ds, x, y, z, alpha, 0.0);
}

CITestResult g2_prior_adjusted(const CategoricalDataset& ds, int x, int y,
                               const std::vector<int>& z, double alpha, double prior_shift) {
    check_args(ds, x, y, z);
    if (!(alpha > 0.0 && alpha < 1.0)) fail(Errc::InvalidArgument, "ci test: alpha must be in (0,1)");
    if (prior_shift < 0.0) fail(Errc::InvalidArgument, "ci test: prior_shift must be >= 0");

    G2Stat stat = g2_statistic(ds, x, y, z);
    CITestResult res;
    res.statistic = stat.g2;
    res.dof = stat.dof;
    res.audit = prior_shift > 0.0;
    res.reliable = ds.row_count() >= 10 * stat.dof;

    double effective = std::max(stat.g2 - prior_shift, 0.0);
    res.p_value = chi_squared_upper_tail(effective, stat.dof);
    if (!res.reliable) {
        res.independent = true;  // too little data to claim dependence
        return res;
    }
    res.independent = res.p_value >= alpha;
    return res;
}

double mutual_information(const CategoricalDataset& ds, int x, int y) {
    check_args(ds, x, y, {});
    const int rx = ds.cardinality(x), ry = ds.cardinality(y);
    const double n = double(ds.row_count());
    std::vector<long long> nxy(std::size_t(rx) * ry, 0), nx(rx, 0), ny(ry, 0);
    for (int row = 0; row < ds.row_count(); ++row) {
        int vx = ds.value(row, x), vy = ds.value(row, y);
        ++nxy[std::size_t(vx) * ry + vy];
        ++nx[vx];
        ++ny[vy];
    }
    double mi = 0.0;
    for (int vx = 0; vx < rx; ++vx)
        for (int vy = 0; vy < ry; ++vy) {
            long long c = nxy[std::size_t(vx) * ry + vy];
            if (c == 0) continue;
            mi += double(c) / n * std::log(double(c) * n / (double(nx[vx]) * double(ny[vy])));
        }
    return std::max(mi, 0.0);
}

} // namespace cslearn
