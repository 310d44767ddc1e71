#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nslab/cutoff.hpp"
#include "nslab/field.hpp"
#include "nslab/transform.hpp"

namespace nslab {

enum class Scheme { ImexCn, EtdRk2 };
enum class DealiasRule { TwoThirds, None };

Scheme parse_scheme(const std::string& name);
DealiasRule parse_dealias(const std::string& name);
std::string to_string(Scheme s);
std::string to_string(DealiasRule d);

struct SimulationConfig {
    int n = 32;
    double length = kTwoPi;
    double nu = 0.01;  // kinematic viscosity; 0 selects the Euler equation
    double dt = 1e-3;
    double t_final = 1.0;
    Scheme scheme = Scheme::EtdRk2;
    DealiasRule dealias = DealiasRule::TwoThirds;
    std::string init = "taylor-green";
    int output_every = 100;
    std::uint64_t seed = 0;
    bool store_fields = true;
    double advective_cfl = 0.5;
    /// Stirring force hook; only the zero force is supported (f = 0).
    std::optional<std::string> forcing;

    void validate() const;
    std::size_t step_count() const;
};

struct TrajectorySample {
    double t = 0.0;
    SpectralVelocityField u;
    /// Discrete right-hand side nu*Lap(u) - P((u.grad)u) evaluated from u.
    std::optional<SpectralVelocityField> du_dt;
};

/// Per-step scalar record (kept for every step regardless of field cadence).
struct StepRecord {
    double t = 0.0;
    double energy = 0.0;              // 1/2 ||u||_H^2
    double energy_dissipation = 0.0;  // nu ||grad u||_H^2
    double max_velocity = 0.0;
    double div_residual = 0.0;
};

struct Trajectory {
    SimulationConfig config;
    std::vector<TrajectorySample> samples;
    std::vector<StepRecord> steps;
};

/// Dealiased pseudo-spectral advective term (u.grad)u, unprojected.
struct AdvectiveTerm {
    SpectralVelocityField field;
    double max_velocity = 0.0;
};
AdvectiveTerm advective_term(const SpectralVelocityField& u, FourierWorkspace& ws,
                             DealiasRule dealias);

/// P((u.grad)u): the Leray-projected nonlinear term.
SpectralVelocityField nonlinear_term(const SpectralVelocityField& u, FourierWorkspace& ws,
                                     DealiasRule dealias = DealiasRule::TwoThirds);

/// nu*Lap(u) - P((u.grad)u).
SpectralVelocityField navier_stokes_rhs(const SpectralVelocityField& u, double nu,
                                        FourierWorkspace& ws, DealiasRule dealias);

/// Advances one step. Viscous part exact (integrating factor) under etd-rk2,
/// Crank-Nicolson under imex-cn; nonlinearity explicit in both.
TrajectorySample step(const TrajectorySample& sample, const SimulationConfig& cfg,
                      FourierWorkspace& ws);

using StepObserver = std::function<void(const StepRecord&)>;

Trajectory simulate(const SimulationConfig& cfg);
Trajectory simulate(const SimulationConfig& cfg, const StepObserver& observer);

/// Simulates from an explicit initial field (ensemble members and tests).
Trajectory simulate(const SimulationConfig& cfg, const SpectralVelocityField& initial,
                    const StepObserver& observer = {});

/// Weak-solution residual against a cutoff function over [t1, t2]; the time
/// integrals use the trapezoid rule on stored samples.
double weak_residual(const Trajectory& trajectory, const CutoffFunction& phi, double t1,
                     double t2);

/// Initial-data constructors. Descriptors:
///   taylor-green
///   single-mode:kx,ky,kz[:px,py,pz]
///   random-band:kmin,kmax,slope[,rms]
///   harmonic-mean[:lmax[,rms]]
///   strictly-turbulent[:l[,rms]]
SpectralVelocityField initial_data(const std::string& descriptor, const WaveGrid& grid,
                                   std::uint64_t seed);

/// Random-band field with explicit per-shell energies (shell index = |k|).
SpectralVelocityField random_shell_field(const WaveGrid& grid,
                                         const std::vector<double>& shell_energy,
                                         std::uint64_t seed);

}  // namespace nslab
