#pragma once

#include <complex>

namespace cqm::specfun {

using Complex = std::complex<double>;

// Multivalued functions use the principal branch, phase in (-pi, pi].
// A signed zero imaginary part selects the side of the negative real cut
// (C99 Annex G): (-x, -0.0) has phase -pi, which is how e^{-i pi} z is spelled.
double principal_arg(Complex z);
Complex principal_log(Complex z);
Complex principal_pow(Complex z, Complex a);

// Rotates z by e^{s i pi} (s = +1 or -1) and returns the value with the phase
// on the requested side of the cut when the result lands on it.
Complex rotate_half_turn(Complex z, int s);

struct PrecisionPolicy {
    double series_tol = 1e-17;        // term-ratio stop
    int max_terms = 4000;
    double asymptotic_switch = 17.0;  // |z| beyond which large-argument Bessel expansions are used
    double kummer_series_radius = 12.0;
    double kummer_asymptotic_switch = 30.0;

    void validate() const;
};

bool is_nonpositive_integer(Complex z);

Complex log_gamma(Complex z);
Complex gamma(Complex z);
Complex rgamma(Complex z);  // 1/Gamma, zero at the poles

// Real order, real argument. Backed by Boost.Math.
double bessel_j(double mu, double x);
double bessel_y(double mu, double x);
Complex hankel(int kind, double mu, double x);

// Real order mu > -1, complex argument.
Complex bessel_i(double mu, Complex z, const PrecisionPolicy& pol = {});
// e^{-|Re z|} I_mu(z)
Complex bessel_i_scaled(double mu, Complex z, const PrecisionPolicy& pol = {});
// Real x >= 0, real arithmetic throughout.
double bessel_i_scaled(double mu, double x, const PrecisionPolicy& pol = {});
Complex bessel_j(double mu, Complex z, const PrecisionPolicy& pol = {});

// Generalized Laguerre L_n^{(alpha)}(x) by upward recurrence.
double laguerre(int n, double alpha, double x);
// Gegenbauer C_l^{(nu)}(x) by recurrence.
double gegenbauer(int l, double nu, double x);

Complex kummer_m(Complex a, Complex b, Complex z, const PrecisionPolicy& pol = {});
// M(a,b,z)/Gamma(b), finite at nonpositive integer b.
Complex kummer_m_reg(Complex a, Complex b, Complex z, const PrecisionPolicy& pol = {});
Complex tricomi_u(Complex a, Complex b, Complex z, const PrecisionPolicy& pol = {});

// Whittaker functions M_{kappa,m}(z), W_{kappa,m}(z) and the regularized
// M_{kappa,m}(z)/Gamma(1+2m). With m = mu/2 the Kummer parameters are
// a = (1+mu)/2 - kappa, b = 1+mu.
Complex whittaker_m(Complex kappa, Complex half_mu, Complex z, const PrecisionPolicy& pol = {});
Complex whittaker_w(Complex kappa, Complex half_mu, Complex z, const PrecisionPolicy& pol = {});
Complex whittaker_m_reg(Complex kappa, Complex half_mu, Complex z, const PrecisionPolicy& pol = {});

}  // namespace cqm::specfun
