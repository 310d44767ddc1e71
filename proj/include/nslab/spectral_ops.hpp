#pragma once

#include <vector>

#include "nslab/field.hpp"
#include "nslab/transform.hpp"

namespace nslab {

/// Per mode k != 0 removes the component of the coefficient parallel to k;
/// the zero mode is left unchanged. Output satisfies the incompressibility
/// invariant |k.u_k| <= eps_div * ||u||.
SpectralVelocityField leray_project(const SpectralVelocityField& f);

/// Fractional power of the Stokes operator (-nu Laplacian)^s, diagonal in
/// Fourier space: each mode is scaled by (nu |kappa|^2)^s. Negative powers
/// require a drift-free field (zero mode not invertible).
SpectralVelocityField stokes_apply(const SpectralVelocityField& u, double s, double nu);

/// sqrt( L^3 sum_k (nu |kappa|^2)^s |u_k|^2 ); s = 0 is the bare L2 norm.
double sobolev_norm(const SpectralVelocityField& u, double s, double nu);

/// Zeroes the k = 0 coefficient (Galilean drift removal).
SpectralVelocityField remove_drift(const SpectralVelocityField& u);

/// Spectral velocity gradients: rate-of-stress S_ij = d u_i / d x_j,
/// symmetric part sigma, vorticity omega = curl u, and grad omega.
struct FieldGradients {
    TensorFieldSample stress_rate;   // S_ij
    TensorFieldSample strain;        // sigma = (S + S^T)/2
    SpectralVelocityField vorticity; // omega
    TensorFieldSample vorticity_gradient;
};
FieldGradients field_gradients(const SpectralVelocityField& u);

/// max_k |kappa . u_k| relative to the H1-scale sqrt(sum |kappa|^2 |u_k|^2).
double divergence_residual(const SpectralVelocityField& u);

/// Largest |mean velocity| component of the reconstructed physical field.
double mean_velocity_magnitude(const SpectralVelocityField& u);

/// H (bare L2) inner product L^3 sum conj(u_k).v_k, real part.
double h_inner(const SpectralVelocityField& u, const SpectralVelocityField& v);
double h_norm(const SpectralVelocityField& u);

/// (grad u, grad v) = L^3 sum |kappa|^2 conj(u_k).v_k, real part.
double gradient_inner(const SpectralVelocityField& u, const SpectralVelocityField& v);

/// Zeroes every coefficient with any index on the Nyquist plane.
void zero_nyquist(SpectralVelocityField& u);

/// Two-thirds rule: zeroes modes with any |k_i| > N/3.
void dealias_two_thirds(SpectralVelocityField& u);

/// Enforces coeff(-k) = conj(coeff(k)) by averaging the pair.
void enforce_reality(SpectralVelocityField& u);

/// Max deviation from conjugate symmetry relative to the field magnitude.
double reality_defect(const SpectralVelocityField& u);

/// Shell-binned energy spectrum E(s) = 1/2 L^3 sum_{|k| in shell s} |u_k|^2,
/// shells s = round(|k|), s = 0..smax. Sum over shells equals the energy.
std::vector<double> shell_spectrum(const SpectralVelocityField& u);

/// 1/2 ||u||_H^2.
double energy(const SpectralVelocityField& u);

/// 1/2 ||curl u||_H^2.
double enstrophy(const SpectralVelocityField& u);

/// sum_k |kappa|^2 |u_k|^2  (spatial average of |grad u|^2).
double gradient_square_average(const SpectralVelocityField& u);

/// Maximum pointwise velocity magnitude on the collocation grid.
double max_velocity(const SpectralVelocityField& u, FourierWorkspace& ws);

/// Maximum pointwise vorticity magnitude on the collocation grid.
double max_vorticity(const SpectralVelocityField& u, FourierWorkspace& ws);

}  // namespace nslab
