#pragma once

#include "loadgen/rng.hpp"

namespace loadgen {

// Inverse-transform Pareto: xmin / u^(1/alpha) for u in (0,1].
// Every sample is >= xmin. Throws std::invalid_argument on alpha <= 0,
// xmin <= 0, or u outside (0,1].
double pareto_quantile(double u, double alpha, double xmin);

double sample_pareto(Rng& rng, double alpha, double xmin);

}  // namespace loadgen
