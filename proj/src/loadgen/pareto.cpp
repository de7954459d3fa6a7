#include "loadgen/pareto.hpp"

#include <cmath>
#include <stdexcept>

namespace loadgen {

double pareto_quantile(double u, double alpha, double xmin) {
    if (!(alpha > 0.0)) throw std::invalid_argument("pareto_alpha must be > 0");
    if (!(xmin > 0.0)) throw std::invalid_argument("pareto_xmin must be > 0");
    if (!(u > 0.0) || u > 1.0) throw std::invalid_argument("u must lie in (0,1]");
    return xmin / std::pow(u, 1.0 / alpha);
}

double sample_pareto(Rng& rng, double alpha, double xmin) {
    return pareto_quantile(uniform_oc(rng), alpha, xmin);
}

}  // namespace loadgen
