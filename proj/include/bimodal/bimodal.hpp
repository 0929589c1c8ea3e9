#ifndef BIMODAL_BIMODAL_HPP
#define BIMODAL_BIMODAL_HPP

#include "bimodal/bivariate.hpp"
#include "bimodal/distribution.hpp"
#include "bimodal/fit.hpp"
#include "bimodal/ks.hpp"
#include "bimodal/numerics.hpp"
#include "bimodal/process.hpp"
#include "bimodal/random.hpp"

#endif  // BIMODAL_BIMODAL_HPP
