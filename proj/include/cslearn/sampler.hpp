#ifndef CSLEARN_SAMPLER_HPP
#define CSLEARN_SAMPLER_HPP

#include <optional>

#include "cslearn/bif.hpp"
#include "cslearn/dataset.hpp"
#include "cslearn/rng.hpp"

namespace cslearn {

// Ancestral sampling: each node is drawn after its parents, from the CPT row
// selected by the sampled parent values.  Row r uses the generator derived
// from (seed, kStreamRow, r), so any prefix of a larger sample is identical
// to a smaller sample with the same seed.
// Column labels come from the network, so cardinalities are preserved even
// when a rare label never occurs in the sample.
CategoricalDataset forward_sample(const BayesNet& net, int n, RngSeed seed);

// Three-variable linear-Gaussian generators over nodes X, Y, Z:
//   chain     X -> Y -> Z
//   fork      X <- Y -> Z
//   collider  X -> Y <- Z
// Exogenous nodes are N(mean, variance); an endogenous node is
// coefficient * (sum of parents) + N(0, noise_variance).
enum class SyntheticStructure { Chain, Fork, Collider };

struct NodeMechanism {
    double mean = 0.0;
    double variance = 1.0;         // exogenous nodes only
    double coefficient = 1.0;      // endogenous nodes only
    double noise_variance = 1.0;   // endogenous nodes only
};

struct SyntheticSpec {
    SyntheticStructure structure = SyntheticStructure::Chain;
    NodeMechanism x, y, z;
    int sample_count = 100;
    // When set, every value is rounded to this many significant digits,
    // emulating measurement precision loss.  Accepted range 1..8.
    std::optional<int> sig_digits;

    void validate() const;
};

Dag synthetic_truth(SyntheticStructure s);
ContinuousTable sample_synthetic(const SyntheticSpec& spec, RngSeed seed);

// Half-away-from-zero rounding to `digits` significant decimal digits.
double round_sig(double x, int digits);

// Equal-frequency binning.  Cut points are the j/bins quantiles (linear
// interpolation between order statistics); a value lands in the first bin
// whose upper cut is >= value.  Bins that receive no values are dropped from
// the label set; a column left with fewer than two distinct bins is an error.
CategoricalDataset discretize_quantile(const ContinuousTable& table, int bins);

} // namespace cslearn

#endif
