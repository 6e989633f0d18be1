#include "fiipnn/mlf.hpp"

#include "fiipnn/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace fiipnn {

namespace {

constexpr double kPi = std::numbers::pi;

// sin(pi t) with exact zeros at the integers.
double sin_pi(double t) {
    double r = std::remainder(t, 2.0);  // r in [-1, 1]
    if (r == 0.0 || std::abs(r) == 1.0) return 0.0;
    if (std::abs(r) == 0.5) return std::copysign(1.0, r);
    return std::sin(kPi * r);
}

double cos_pi(double t) { return sin_pi(t + 0.5); }

// Power series, used for |z| <= 1 and for z > 0 (no cancellation there).
double ml_series(double alpha, double beta, double z) {
    constexpr int kMaxTerms = 200000;
    const double log_abs_z = z != 0.0 ? std::log(std::abs(z)) : 0.0;
    double sum = recip_gamma(beta);
    if (z == 0.0) return sum;

    double prev = std::abs(sum);
    for (int k = 1; k < kMaxTerms; ++k) {
        const double arg = alpha * k + beta;
        double term;
        if (k * log_abs_z < 600.0 && arg < 170.0) {
            term = std::pow(z, k) * recip_gamma(arg);
        } else {
            double mag = std::exp(k * log_abs_z - std::lgamma(arg));
            term = (z < 0.0 && (k % 2 == 1)) ? -mag : mag;
        }
        sum += term;
        if (!std::isfinite(sum)) throw NumericalError("Mittag-Leffler series overflow");
        const double abs_term = std::abs(term);
        if (abs_term <= 1e-17 * std::abs(sum) && abs_term <= prev) return sum;
        prev = abs_term;
    }
    throw NumericalError("Mittag-Leffler series did not converge");
}

// E_{alpha,beta}(-x) for 0 < alpha < 1, 0 < beta <= 1, x > 0, from the Hankel
// contour integral collapsed onto the negative real axis. With u = r^alpha:
//
//   E(-x) = 1/(alpha pi) int_0^inf exp(-u^(1/alpha)) u^((1-beta)/alpha)
//           [u sin(beta pi) + x sin((beta - alpha) pi)] / (u^2 + 2 x u cos(alpha pi) + x^2) du
//
// The poles of 1/(s^alpha + x) lie off the principal sheet when alpha < 1, so
// there is no residue term. The integrand is bounded; for alpha > 1/2 it has a
// peak of width x sin(alpha pi) at u = -x cos(alpha pi), used as a breakpoint.
double ml_hankel(double alpha, double beta, double x) {
    const double sin_b = sin_pi(beta);
    const double sin_ba = sin_pi(beta - alpha);
    const double cos_a = cos_pi(alpha);
    const double inv_alpha = 1.0 / alpha;
    const double power = (1.0 - beta) * inv_alpha;
    const double x_sin_a = x * sin_pi(alpha);

    auto integrand = [=](double u) {
        if (u <= 0.0) return power == 0.0 ? x * sin_ba / (x * x) : 0.0;
        const double decay = std::exp(-std::pow(u, inv_alpha));
        if (decay == 0.0) return 0.0;
        const double num = u * sin_b + x * sin_ba;
        const double shifted = u + x * cos_a;
        const double den = shifted * shifted + x_sin_a * x_sin_a;
        const double weight = power == 0.0 ? 1.0 : std::pow(u, power);
        return decay * weight * num / den;
    };

    // Beyond u = 45^alpha the factor exp(-u^(1/alpha)) is below 3e-20, and
    // the rest of the integrand is at most 45 times its value near u = 0.
    const double upper = std::pow(45.0, alpha);
    std::vector<double> cuts{0.0, std::min(1.0, upper), upper};
    if (cos_a < 0.0) {
        const double peak = -x * cos_a;
        const double width = std::abs(x_sin_a);
        for (double c : {peak - 4.0 * width, peak, peak + 4.0 * width}) {
            if (c > 0.0 && c < upper) cuts.push_back(c);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // u^(1/alpha) and u^power are not smooth at u = 0, which stalls bisection;
    // tanh-sinh takes the first piece.
    // The abscissa tables grow lazily, so each thread keeps its own.
    thread_local boost::math::quadrature::tanh_sinh<double> near_zero;
    using boost::math::quadrature::gauss_kronrod;
    double total = near_zero.integrate(integrand, cuts[0], cuts[1], 1e-14);
    for (std::size_t i = 1; i + 1 < cuts.size(); ++i) {
        total += gauss_kronrod<double, 31>::integrate(integrand, cuts[i], cuts[i + 1], 15, 1e-14);
    }
    return total / (alpha * kPi);
}

double ml_negative(double alpha, double beta, double x) {
    // E_{a,b}(z) = 1/Gamma(b) + z E_{a,a+b}(z) lowers beta into (0, 1].
    if (beta > 1.0) {
        const double lower = ml_negative(alpha, beta - alpha, x);
        return (lower - recip_gamma(beta - alpha)) / (-x);
    }
    return ml_hankel(alpha, beta, x);
}

}  // namespace

double recip_gamma(double x) {
    if (std::isnan(x)) return x;
    if (x <= 0.0 && x == std::floor(x)) return 0.0;
    if (x > 0.0) {
        if (x > 171.0) return std::exp(-std::lgamma(x));
        return 1.0 / std::tgamma(x);
    }
    // Reflection: 1/Gamma(x) = Gamma(1 - x) sin(pi x) / pi.
    const double s = sin_pi(x);
    const double g = 1.0 - x;
    if (g < 171.0) return std::tgamma(g) * s / kPi;
    return std::copysign(std::exp(std::lgamma(g) + std::log(std::abs(s) / kPi)), s);
}

double mittag_leffler(const MlfParams& p, double z) {
    const double alpha = p.alpha;
    const double beta = p.beta;
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("Mittag-Leffler: alpha outside (0,1]");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw std::domain_error("Mittag-Leffler: beta must be positive");
    if (std::isnan(z)) throw std::domain_error("Mittag-Leffler: z is NaN");

    if (alpha == 1.0) {
        if (beta == 1.0) return std::exp(z);
        if (std::abs(z) > 8.0) {
            throw std::domain_error("Mittag-Leffler: alpha = 1 with beta != 1 supports |z| <= 8 only");
        }
        return ml_series(alpha, beta, z);
    }
    if (z >= -1.0) return ml_series(alpha, beta, z);
    if (std::isinf(z)) return 0.0;
    return ml_negative(alpha, beta, -z);
}

double ml_envelope(double alpha, double theta, double v0, double t) {
    if (!(t >= 0.0)) throw std::domain_error("envelope: negative t");
    if (!(theta > 0.0)) throw std::domain_error("envelope: theta must be positive");
    if (!(v0 >= 0.0)) throw std::domain_error("envelope: v0 must be nonnegative");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("envelope: alpha outside (0,1]");
    if (v0 == 0.0) return 0.0;
    return v0 * mittag_leffler(alpha, -theta * std::pow(t, alpha));
}

}  // namespace fiipnn
