#pragma once

namespace fiipnn {

/// 1 / Gamma(x). Entire: returns 0 at x = 0, -1, -2, ...
double recip_gamma(double x);

struct MlfParams {
    double alpha = 1.0;
    double beta = 1.0;
};

/// Two-parameter Mittag-Leffler function E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha k + beta)
/// for real z.
///
/// Supported: 0 < alpha <= 1, beta > 0. For alpha < 1 every real z up to the
/// overflow threshold of the series is handled; for alpha == 1 and beta != 1
/// only |z| <= 8. Throws std::domain_error outside the supported range and
/// NumericalError on overflow.
double mittag_leffler(const MlfParams& p, double z);

/// E_alpha(z) = E_{alpha,1}(z)
inline double mittag_leffler(double alpha, double z) { return mittag_leffler({alpha, 1.0}, z); }

/// v0 * E_alpha(-theta t^alpha): the decay envelope of a certified network.
/// Throws std::domain_error for t < 0, theta <= 0, v0 < 0 or alpha outside (0, 1].
double ml_envelope(double alpha, double theta, double v0, double t);

}  // namespace fiipnn
