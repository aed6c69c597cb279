#pragma once

// Umbrella header: the full separation-diagnostics and Bayesian binary
// regression toolkit.

#include <sepbayes/rng.hpp>
#include <sepbayes/distributions.hpp>
#include <sepbayes/link.hpp>
#include <sepbayes/priors.hpp>
#include <sepbayes/dataset.hpp>
#include <sepbayes/lp.hpp>
#include <sepbayes/separation.hpp>
#include <sepbayes/samplers.hpp>
#include <sepbayes/diagnostics.hpp>
#include <sepbayes/predict.hpp>
#include <sepbayes/simulate.hpp>
#include <sepbayes/io.hpp>
