#pragma once

#include <map>

#include "biclab/observe.hpp"

namespace biclab {

// The symmetrized product states the dynamics starts from: boson pairs (and a
// quadruplet) stacked on sites next to the impurity.
enum class InitialState {
	N4_1122,    // pairs on sites 1 and 2            (N = 4)
	N6_1111_22, // four bosons on site 1, pair on 2  (N = 6)
	N6_112233,  // pairs on sites 1, 2 and 3         (N = 6)
	Custom,
};

InitialState parse_initial_state(const std::string& name);
const char*  to_string(InitialState k);

// Normalized, parity-even vector (1 + P)/sqrt(2) applied to the product state
Eigen::VectorXd build_initial_state(InitialState kind, const SectorBasis& basis);
// Custom Fock seed; optionally parity-symmetrized
Eigen::VectorXd build_initial_state(const FockState& fock, const SectorBasis& basis,
                                    bool symmetrize);

struct QuenchScenario {
	LatticeSpec  lattice;
	ModelParams  params;
	InitialState initial = InitialState::N4_1122;
	FockState    custom_fock;         // used by InitialState::Custom
	bool         symmetrize = true;

	double           t_max   = 400.0;
	std::size_t      samples = 801;   // including t = 0
	std::vector<int> sites   = {0, 1, 2};
	double           tail_start = 200.0;  // long-time window [tail_start, t_max]

	bool   with_ensembles = true;   // dense spectrum, microcanonical + diagonal ensemble
	double mc_half_window = 0.5;    // in units of t
	double evolve_tol     = 1e-9;
	std::size_t dense_cap = 12000;
};

struct OverlapRecord {
	double energy;
	double weight;  // |<E|psi0>|^2
	double width;
	int    parity_sign;
};

struct QuenchResult {
	std::vector<double>                times;
	std::map<int, std::vector<double>> series;         // site -> <n_x>(t)
	double                             energy = 0;     // <H> at t = 0
	double                             energy_drift = 0;  // max relative drift
	double                             norm_drift   = 0;
	double                             parity_drift = 0;  // of symmetrized states
	std::map<int, double>              long_time_avg;
	std::map<int, double>              microcanonical;   // empty without ensembles
	std::map<int, double>              diagonal;         // diagonal-ensemble values
	std::vector<OverlapRecord>         overlaps;         // weights > 1e-3, descending
};

QuenchResult run_quench(const QuenchScenario& scenario);

// Infinite-time average sum_blocks <psi_P|O|psi_P> over degenerate blocks of a
// complete spectrum, for a diagonal observable.
double diagonal_ensemble(const Eigen::VectorXd& initial, const Spectrum& spectrum,
                         std::span<const double> obs_diagonal, double degeneracy_tol = 1e-9);

// Dephased average from precomputed per-eigenstate expectations; exact when
// the spectrum is non-degenerate.
double diagonal_ensemble_eev(const Eigen::VectorXd& initial, const Spectrum& spectrum,
                             std::span<const double> eev);

// Dominant nonzero angular frequency of a uniformly sampled series (windowed
// periodogram with parabolic peak refinement).
double dominant_frequency(std::span<const double> values, double dt);

}  // namespace biclab
