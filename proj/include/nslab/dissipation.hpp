#pragma once

#include <span>

#include "nslab/dynamics.hpp"

namespace nslab {

/// Per-sample dissipation functionals. Rate quantities use the spatial
/// average over the torus (the bare L1 functional); energy and enstrophy use
/// the H-norm convention. The free component index is not summed in the
/// per-component entries (NSRI); the scalar fields carry the index sum (SRI)
/// and the Euclidean aggregate is reported separately.
struct DissipationReport {
    double t = 0.0;
    std::array<double, 3> advective_component{};  // <|sum_j u_j d_j u_i|> per i
    std::array<double, 3> temporal_component{};   // -<u_i d_t u_i> per i
    double nu_t_nl = 0.0;    // sum_i advective_component[i]
    double nu_t_temp = 0.0;  // sum_i temporal_component[i]
    double nu_t = 0.0;       // nu_t_nl + nu_t_temp
    double nu_tot = 0.0;     // nu_t + nu
    double nl_euclidean = 0.0;
    double temp_euclidean = 0.0;
    double viscous_rate = 0.0;  // nu <|grad u|^2>
    double energy = 0.0;        // 1/2 ||u||_H^2
    double enstrophy = 0.0;     // 1/2 ||omega||_H^2
    double div_residual = 0.0;
};

/// Requires the sample to carry its discrete right-hand side.
DissipationReport dissipation_report(const TrajectorySample& sample, double nu,
                                     FourierWorkspace& ws,
                                     DealiasRule dealias = DealiasRule::TwoThirds);

std::vector<DissipationReport> dissipation_series(const Trajectory& trajectory);

/// | <du/dt, u>_H + nu ||grad u||_H^2 | / ||u||_H^2 per stored sample, using
/// the stored discrete right-hand side. Zero to roundoff on exact heat
/// trajectories; equals the dealiasing neutrality defect on inviscid runs.
std::vector<double> energy_identity_residual(const Trajectory& trajectory, double nu);

/// Discrete energy-identity residual from the per-step scalar series:
/// | dE/dt (central differences) + nu ||grad u||_H^2 | / E at interior
/// records. Converges at second order in dt on smooth runs.
std::vector<double> discrete_energy_residual(std::span<const StepRecord> steps);

/// Entropy surrogate: log of the effective volume of the normalized weight
/// distribution over the harmonic mean-vs-fluctuation decomposition. The
/// normalized mean state concentrates on the double-mean component and
/// evaluates to log 1 = 0; the value is never negative.
struct EntropySurrogate {
    double value = 0.0;
    double mean_weight = 0.0;               // normalized double-mean weight
    std::vector<double> contributions;      // per-weight -p log p ledger
};
EntropySurrogate entropy_surrogate(const SpectralVelocityField& u, int lmax = 4);

/// Term-by-term regularity norms along a trajectory, plus the L^{4/3}-in-time
/// aggregates of the dual-norm series. Dual norms use the configured
/// viscosity (unit viscosity when inviscid).
struct RegularityLedger {
    std::vector<double> times;
    std::vector<double> h_norm;            // ||u||_H
    std::vector<double> h1_norm;           // ||u||_{H_1}
    std::vector<double> dtu_dual_norm;     // ||du/dt||_{H_{-1}}
    std::vector<double> advective_dual_norm;  // ||(u.grad)u||_{H_{-1}}
    double dtu_l43_aggregate = 0.0;
    double advective_l43_aggregate = 0.0;
};
RegularityLedger regularity_ledger(const Trajectory& trajectory);

/// L^r(0,T; L^s) mixed space-time norm on the admissible line
/// 2/r + 3/s = 3/2, 2 <= s <= 6; r may be infinity (essential supremum).
double mixed_norm(const Trajectory& trajectory, double r, double s);

}  // namespace nslab
