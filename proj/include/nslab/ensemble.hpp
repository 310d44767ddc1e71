#pragma once

#include <span>

#include "nslab/dynamics.hpp"

namespace nslab {

enum class Perturbation { RandomPhase, SignFlip, BandNoise };

Perturbation parse_perturbation(const std::string& name);
std::string to_string(Perturbation p);

/// Reproducible ensemble description. Perturbations preserve
/// divergence-freedom, reality, and zero drift; random-phase re-draws every
/// phase with the member seed while the base descriptor fixes the shell
/// energies exactly.
struct EnsembleSpec {
    int count = 16;
    std::string base_init = "random-band:1,3,-1.6667,0.05";
    Perturbation perturbation = Perturbation::RandomPhase;
    double amplitude = 0.1;  // delta scale for sign-flip / band-noise
    std::uint64_t seed = 0;
    SimulationConfig config;
};

/// Initial field of one ensemble member.
SpectralVelocityField member_initial_field(const EnsembleSpec& spec, const WaveGrid& grid,
                                           int member);

/// Coefficient-wise mean of trajectories sharing grid and sample times.
Trajectory ensemble_mean(std::span<const Trajectory> members);

/// Exact heat flow: every mode scaled by exp(-nu |kappa|^2 t); no stepping.
SpectralVelocityField heat_solution(const SpectralVelocityField& u0, double nu, double t);

/// Exact heat trajectory sampled uniformly on [0, t_final], with the exact
/// right-hand side nu*Lap(u) stored per sample.
Trajectory heat_trajectory(const SpectralVelocityField& u0, double nu, double t_final,
                           int sample_count);

/// One ensemble pass: running means of the member fields and of the
/// advective-term fields at every sample time, plus scalar averages.
struct EnsembleResult {
    std::vector<double> times;
    std::vector<SpectralVelocityField> mean_u;
    std::vector<SpectralVelocityField> mean_advective;
    std::vector<double> mean_nu_t_nl;    // ensemble average of the scalar functional
    std::vector<double> mean_nu_t_temp;
    SpectralVelocityField mean_initial;
};
EnsembleResult run_ensemble(const EnsembleSpec& spec);

struct ExponentFit {
    double exponent = 0.0;
    double stderr_ = 0.0;
};

/// Mean-is-heat verification across ensemble sizes (prefix ensembles of the
/// same member stream). Deviation compares M_N(u)(t) against the exact heat
/// flow of M_N(u0) in the H norm; the nonlinear checks track the magnitude
/// of the member-averaged advective field and of the advective field of the
/// mean trajectory.
struct MeanReport {
    std::vector<int> counts;
    std::vector<double> times;
    std::vector<std::vector<double>> deviation_series;  // [count][time]
    std::vector<double> deviation_metric;               // sup over t > 0
    ExponentFit deviation_fit;                          // deviation ~ N^{-p}
    std::vector<double> nl_mean_magnitude;              // sup_t ||M_N(w)(t)||_H
    ExponentFit nl_fit;
    std::vector<double> iterated_nl_magnitude;          // sup_t ||w(M_N(u))(t)||_H
    ExponentFit iterated_fit;
    std::vector<double> mean_nu_t_nl;                   // largest-count scalar series
    std::vector<double> mean_nu_t_temp;
};

MeanReport mean_heat_deviation(const EnsembleSpec& spec, std::vector<int> counts);

/// Thread budget: NS_LAB_THREADS caps internal parallelism (0/unset = auto).
int thread_budget();

}  // namespace nslab
