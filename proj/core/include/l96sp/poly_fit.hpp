#pragma once

#include "l96sp/poly_model.hpp"
#include "l96sp/residuals.hpp"

namespace l96sp {

/// Ordinary least squares of r_hat on (x^3, x^2, x, 1), then AR1 parameters
/// of the fit residuals: phi is their lag-1 autocorrelation within
/// segments (per gridpoint), sigma their root-mean-square. Diagnostics
/// (R^2, residual sd, point count) are stored in the model. Throws
/// NumericalError when the design matrix is rank deficient.
PolyModel fit_polynomial(const ResidualDataset& ds);

}  // namespace l96sp
