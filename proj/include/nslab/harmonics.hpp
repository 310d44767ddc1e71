#pragma once

#include <span>
#include <vector>

#include "nslab/field.hpp"

namespace nslab {

/// Packed (l, m) index for tables over 0 <= l <= lmax, |m| <= l.
inline int lm_index(int l, int m) { return l * l + l + m; }
inline int lm_count(int lmax) { return (lmax + 1) * (lmax + 1); }

/// Orthonormal spherical harmonic Y_lm(theta, phi), Condon-Shortley phase.
/// Stable to l = 32 via the normalized associated Legendre recurrence.
cdouble ylm(int l, int m, double theta, double phi);

/// All Y_lm for l <= lmax at one direction, packed by lm_index.
void ylm_array(int lmax, double theta, double phi, std::span<cdouble> out);

/// Normalized associated Legendre P~_l^m(x) for m >= 0, such that
/// Y_lm = P~_l^m(cos theta) e^{i m phi}.
void legendre_array(int lmax, double x, std::span<double> out);

struct BesselPair {
    double j;
    double y;
};

/// Spherical Bessel j_l (downward recurrence, normalized) and Neumann y_l
/// (upward recurrence). x = 0 is valid for j only; y is singular there.
BesselPair spherical_bessel(int l, double x);

/// j_0..j_lmax and y_0..y_lmax in one pass.
void spherical_bessel_array(int lmax, double x, std::span<double> j_out, std::span<double> y_out);

/// Derivatives via the recurrence f' = f_{l-1} - (l+1)/x f_l.
BesselPair spherical_bessel_derivative(int l, double x);

struct SolidBasisValue {
    cdouble smooth;     // sqrt(2/pi) k j_l(kr) Y_lm
    cdouble irregular;  // sqrt(2/pi) k y_l(kr) Y_lm
};

/// Solid harmonic basis pair at one point; r > 0 required for the irregular
/// branch (Neumann singularity at the origin).
SolidBasisValue solid_basis(double k, int l, int m, double r, double theta, double phi);

/// Only the regular branch; valid at r = 0 too.
cdouble solid_basis_smooth(double k, int l, int m, double r, double theta, double phi);

struct SphericalPoint {
    double r;
    double theta;
    double phi;
};

/// Product quadrature on the ball r in (r_min, R): Gauss-Legendre radial
/// nodes, Gauss-Legendre nodes in cos(theta), uniform phi. Exact for
/// polynomial degree <= 2*order - 1 in each factor.
struct BallQuadrature {
    double radius = 0.0;
    double r_min = 0.0;
    std::vector<double> radii, radial_weights;      // n_r entries
    std::vector<double> cos_theta, theta_weights;   // n_theta entries
    int n_phi = 0;

    std::size_t size() const { return radii.size() * cos_theta.size() * n_phi; }
    std::size_t node_index(std::size_t ir, std::size_t it, std::size_t ip) const {
        return (ir * cos_theta.size() + it) * n_phi + ip;
    }
    SphericalPoint point(std::size_t ir, std::size_t it, std::size_t ip) const {
        return {radii[ir], std::acos(cos_theta[it]), kTwoPi * ip / n_phi};
    }
    /// Volume integral of sampled values.
    double integrate(std::span<const double> samples) const;
};

BallQuadrature make_ball_quadrature(int n_r, int n_theta, int n_phi, double radius,
                                    double r_min_fraction = 1e-6);

/// Quadrature sized for analysis up to lmax with n_radial solid-harmonic
/// nodes k_n = n pi / R.
BallQuadrature default_ball_quadrature(int lmax, int n_radial, double radius);

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int order, std::span<double> nodes, std::span<double> weights);

/// Solid-harmonic expansion coefficients: complex F (regular family) and
/// optionally S (irregular family) per (radial node, l, m). The continuum
/// k dk integral is discretized on the nodes k_n = n pi / R.
struct HarmonicCoefficients {
    int lmax = 0;
    double ball_radius = 0.0;
    std::vector<double> radial_k;   // k_n values
    std::vector<cdouble> f_coeff;   // node-major, lm_index-packed
    std::vector<cdouble> s_coeff;   // empty unless the singular family was fit

    bool has_singular() const { return !s_coeff.empty(); }
    std::size_t coeff_index(std::size_t node, int l, int m) const {
        return node * lm_count(lmax) + lm_index(l, m);
    }
};

/// Fits the sampled scalar to the solid-harmonic basis: angular analysis by
/// quadrature, radial profile by least squares per l (the k_n basis is not
/// exactly orthogonal for l >= 1, so a Gram solve replaces plain projection).
HarmonicCoefficients expand(std::span<const double> samples, const BallQuadrature& quad,
                            int lmax, int n_radial, bool with_singular = false);

/// Evaluates the expansion at arbitrary points (real part; coefficients of
/// real fields are conjugate-symmetric).
std::vector<double> reconstruct(const HarmonicCoefficients& coeffs,
                                std::span<const SphericalPoint> points);

/// Samples the component sum (or one component) of a velocity field on the
/// quadrature nodes of the inscribed ball by exact trigonometric evaluation.
/// component -1 requests the sum of the three components.
std::vector<double> sample_on_ball(const SpectralVelocityField& u, int component,
                                   const BallQuadrature& quad);

/// Dissipation-rate expansion: per-l rank-one factorization of the
/// coefficient tables into an angular profile C_lm and m-independent radial
/// profiles F_kl (and S_kl when the singular family is present).
struct EpsilonExpansion {
    int lmax = 0;
    std::vector<double> radial_k;
    std::vector<cdouble> c_lm;           // lm_index-packed, unit norm per l
    std::vector<double> f_kl;            // node-major per l: index node*(lmax+1)+l
    std::vector<double> s_kl;            // same layout; empty without singular part
    std::vector<double> l_energy;        // per-l energy of the factorized tables
    std::vector<double> rank1_residual;  // per-l relative factorization residual
    double decay_slope = 0.0;            // d log(E_l) / d l fit
    bool decay_flat = false;             // too little l-content to fit a slope
};

EpsilonExpansion epsilon_expansion(std::span<const double> samples, const BallQuadrature& quad,
                                   int lmax, int n_radial, bool with_singular = false);

/// Young's inequality upper bound a*b <= a^p/p + b^q/q, 1/p + 1/q = 1.
double young_bound(double a, double b, double p);

}  // namespace nslab
