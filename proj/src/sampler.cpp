#include "cslearn/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "cslearn/errors.hpp"

namespace cslearn {

CategoricalDataset forward_sample(const BayesNet& net, int n, RngSeed seed) {
    if (n < 1) fail(Errc::InvalidArgument, "forward_sample: sample count must be positive");
    const int nodes = net.node_count();
    std::vector<int> order = net.graph().topological_order();
    std::vector<std::uint8_t> codes(std::size_t(n) * nodes);
    std::vector<std::uint8_t> row(nodes);
    for (int r = 0; r < n; ++r) {
        Rng rng = Rng::derive(seed, kStreamRow, std::uint64_t(r));
        for (int v : order) {
            const Cpt& cpt = net.cpt(v);
            const int card = net.variable(v).cardinality();
            const int cfg = net.parent_config(v, row);
            double u = rng.next_unit();
            double cum = 0.0;
            int pick = card - 1;  // guards against cum never exceeding u
            for (int k = 0; k < card; ++k) {
                cum += cpt.probs[std::size_t(cfg) * card + k];
                if (u < cum) {
                    pick = k;
                    break;
                }
            }
            row[v] = std::uint8_t(pick);
        }
        std::copy(row.begin(), row.end(), codes.begin() + std::size_t(r) * nodes);
    }
    return CategoricalDataset(net.variables(), std::move(codes));
}

void SyntheticSpec::validate() const {
    if (sample_count < 1) fail(Errc::Config, "synthetic: sample_count must be positive");
    if (sig_digits && (*sig_digits < 1 || *sig_digits > 8))
        fail(Errc::Config, "synthetic: sig_digits must be in 1..8");
    auto check = [](const NodeMechanism& m, const char* node) {
        if (m.variance <= 0.0) fail(Errc::Config, std::string("synthetic: variance of ") + node + " must be > 0");
        if (m.noise_variance < 0.0)
            fail(Errc::Config, std::string("synthetic: noise_variance of ") + node + " must be >= 0");
    };
    check(x, "X");
    check(y, "Y");
    check(z, "Z");
}

Dag synthetic_truth(SyntheticStructure s) {
    switch (s) {
        case SyntheticStructure::Chain:
            return Dag::from_edges({"X", "Y", "Z"}, {{0, 1}, {1, 2}});
        case SyntheticStructure::Fork:
            return Dag::from_edges({"X", "Y", "Z"}, {{1, 0}, {1, 2}});
        case SyntheticStructure::Collider:
            return Dag::from_edges({"X", "Y", "Z"}, {{0, 1}, {2, 1}});
    }
    fail(Errc::Internal, "synthetic_truth: bad structure");
}

ContinuousTable sample_synthetic(const SyntheticSpec& spec, RngSeed seed) {
    spec.validate();
    ContinuousTable table;
    table.columns = {"X", "Y", "Z"};
    table.rows = spec.sample_count;
    table.values.resize(std::size_t(spec.sample_count) * 3);

    auto exo = [](Rng& rng, const NodeMechanism& m) {
        return rng.normal(m.mean, std::sqrt(m.variance));
    };
    auto endo = [](Rng& rng, const NodeMechanism& m, double parent_sum) {
        return m.coefficient * parent_sum + rng.normal(0.0, std::sqrt(m.noise_variance));
    };

    for (int r = 0; r < spec.sample_count; ++r) {
        Rng rng = Rng::derive(seed, kStreamRow, std::uint64_t(r));
        double xv = 0, yv = 0, zv = 0;
        switch (spec.structure) {
            case SyntheticStructure::Chain:
                xv = exo(rng, spec.x);
                yv = endo(rng, spec.y, xv);
                zv = endo(rng, spec.z, yv);
                break;
            case SyntheticStructure::Fork:
                yv = exo(rng, spec.y);
                xv = endo(rng, spec.x, yv);
                zv = endo(rng, spec.z, yv);
                break;
            case SyntheticStructure::Collider:
                xv = exo(rng, spec.x);
                zv = exo(rng, spec.z);
                yv = endo(rng, spec.y, xv + zv);
                break;
        }
        if (spec.sig_digits) {
            xv = round_sig(xv, *spec.sig_digits);
            yv = round_sig(yv, *spec.sig_digits);
            zv = round_sig(zv, *spec.sig_digits);
        }
        table.values[std::size_t(r) * 3 + 0] = xv;
        table.values[std::size_t(r) * 3 + 1] = yv;
        table.values[std::size_t(r) * 3 + 2] = zv;
    }
    return table;
}

double round_sig(double x, int digits) {
    if (digits < 1 || digits > 15) fail(Errc::InvalidArgument, "round_sig: digits must be in 1..15");
    if (x == 0.0 || !std::isfinite(x)) return x;
    int e = int(std::floor(std::log10(std::abs(x))));
    double scale = std::pow(10.0, digits - 1 - e);
    return std::round(x * scale) / scale;
}

CategoricalDataset discretize_quantile(const ContinuousTable& table, int bins) {
    if (bins < 2) fail(Errc::Config, "discretize: bins must be at least 2");
    if (table.rows < 2) fail(Errc::Semantic, "discretize: need at least two rows");
    const int ncol = int(table.columns.size());
    std::vector<Variable> vars(ncol);
    std::vector<std::uint8_t> codes(std::size_t(table.rows) * ncol);

    int width = bins > 10 ? 2 : 1;
    for (int c = 0; c < ncol; ++c) {
        std::vector<double> sorted(table.rows);
        for (int r = 0; r < table.rows; ++r) sorted[r] = table.at(r, c);
        std::sort(sorted.begin(), sorted.end());

        // Interpolated quantiles at j/bins for j = 1..bins-1.
        std::vector<double> cuts(bins - 1);
        for (int j = 1; j < bins; ++j) {
            double h = double(table.rows - 1) * j / bins;
            std::size_t lo = std::size_t(std::floor(h));
            double frac = h - double(lo);
            double v = sorted[lo];
            if (lo + 1 < sorted.size()) v += frac * (sorted[lo + 1] - sorted[lo]);
            cuts[j - 1] = v;
        }

        std::vector<int> bin_of(table.rows);
        std::vector<bool> used(bins, false);
        for (int r = 0; r < table.rows; ++r) {
            double v = table.at(r, c);
            int b = bins - 1;
            for (int j = 0; j < bins - 1; ++j) {
                if (v <= cuts[j]) {
                    b = j;
                    break;
                }
            }
            bin_of[r] = b;
            used[b] = true;
        }

        // Compact away empty bins so codes stay contiguous.
        std::vector<int> remap(bins, -1);
        int next = 0;
        for (int b = 0; b < bins; ++b)
            if (used[b]) remap[b] = next++;
        if (next < 2)
            fail(Errc::Semantic, "discretize: column '" + table.columns[c] + "' is degenerate");

        vars[c].name = table.columns[c];
        for (int b = 0; b < bins; ++b) {
            if (!used[b]) continue;
            std::string label = "b" + std::to_string(b);
            if (width == 2 && b < 10) label = "b0" + std::to_string(b);
            vars[c].labels.push_back(label);
        }
        for (int r = 0; r < table.rows; ++r)
            codes[std::size_t(r) * ncol + c] = std::uint8_t(remap[bin_of[r]]);
    }
    return CategoricalDataset(std::move(vars), std::move(codes));
}

} // namespace cslearn
