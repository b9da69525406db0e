#pragma once

#include <Eigen/Dense>

#include "rotsym/distributions.hpp"
#include "rotsym/numerics.hpp"

namespace rotsym {

/// Information functionals of the angular functions f (score target) and g
/// (true law), all as integrals against the cosine density tilde g_p.
struct InfoFunctionals {
  double i_p = 0.0;   // I_p(g)  = int phi_g sqrt(1-t^2) tilde g_p
  double j_p = 0.0;   // J_p(g)  = int phi_g^2 (1-t^2) tilde g_p
  double j_fg = 0.0;  // J_p(f;g) = int phi_f phi_g (1-t^2) tilde g_p
  double h_fg = 0.0;  // H_p(f;g) = int phi_f sqrt(1-t^2) tilde g_p
  double k_fg = 0.0;  // K_p(f;g) = int phi_f^2 (1-t^2) tilde g_p
};

/// Quadrature at the default order, checked against double the order;
/// a change above 1e-8 (relative to max(1, |value|)) throws divergent_functional.
InfoFunctionals info_functionals(const AngularFunction& f, const AngularFunction& g, int p);

/// E_g[h(V)] for the cosine law of (g, p), with h given as h(t, sqrt(1-t^2)).
double cosine_expectation(const AngularFunction& g, int p,
                          const std::function<double(double, double)>& h,
                          const numerics::QuadratureRule& rule = numerics::default_rule());

/// Population counterpart of D-hat:
/// (p-2) E[V (1-V^2)^{-1/2}] / ((p-1) E[V]).
double population_d(const AngularFunction& g, int p);

/// 1 - I_p^2 / J_p at the vMF angular function exp(eta t), from the Bessel
/// closed form with exponentially scaled Bessels.
double are_vmf(int p, double eta);
/// Same quantity from info_functionals().
double are_quadrature(int p, double eta);

/// (p-1) tr[L^2] / (2 (p+1)) for a symmetric traceless (p-1) x (p-1) L.
double noncentrality_te(const Eigen::MatrixXd& l, int p);
/// k^2 / (p-1).
double noncentrality_tm(double k, int p);
/// Noncentrality of the f-efficient unspecified-theta location test under
/// tangent vMF alternatives with true angular function g and kappa_n = k/sqrt(n).
double noncentrality_semiparam(const AngularFunction& f, const AngularFunction& g, double k, int p);

/// Asymptotic power 1 - F_{df,lambda}(chi2_{df,1-alpha}).
double predicted_power(double lambda, int df, double alpha);

}  // namespace rotsym
