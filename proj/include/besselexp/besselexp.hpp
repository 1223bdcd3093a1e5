#ifndef BESSELEXP_BESSELEXP_HPP
#define BESSELEXP_BESSELEXP_HPP

// Sampling the Bessel exponential distribution, the conjugate posterior of a
// von Mises concentration parameter.

#include "besselexp/errors.hpp"
#include "besselexp/quadrature.hpp"
#include "besselexp/rng.hpp"
#include "besselexp/sampler.hpp"
#include "besselexp/special_functions.hpp"
#include "besselexp/tuning.hpp"
#include "besselexp/validation.hpp"
#include "besselexp/von_mises.hpp"

#endif  // BESSELEXP_BESSELEXP_HPP
