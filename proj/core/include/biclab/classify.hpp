#pragma once

#include <memory>
#include <optional>

#include "biclab/observe.hpp"

namespace biclab {

// Parity-symmetrized radial density, tail(r) = (rho(r) + rho(-r))/2 for
// r = 0..L, attached to the candidate it was measured on.
struct TailProfile {
	int                 half_length = 0;
	double              candidate_energy = 0;
	Parity              parity = Parity::None;
	std::vector<double> tail;  // index r
};

TailProfile tail_profile(const DensityProfile& profile, double candidate_energy, Parity parity);
TailProfile tail_profile(const Eigen::VectorXd& state, const SectorBasis& basis,
                         double candidate_energy, Parity parity);

enum class Verdict { BIC, Resonance, Undecided };
const char* to_string(Verdict v);

// One tail comparison between consecutive system sizes at fixed distance r.
struct TailStep {
	int    L_small = 0, L_large = 0;
	int    r     = 0;
	double ratio = 0;  // tail_{L_large}(r) / tail_{L_small}(r)
};

enum class Trend { NonIncreasing, Increasing, Mixed };

struct Classification {
	Verdict               verdict = Verdict::Undecided;
	std::optional<double> decay_rate;  // log-tail slope per site on the largest size
	std::vector<TailStep> evidence;
	std::vector<std::pair<int, Trend>> trends;  // per distance r
};

struct ClassifyOptions {
	int    r0         = 3;      // first tail distance entering the comparison
	double eps        = 0.20;   // relative tolerance per size step
	double floor_zero = 1e-14;  // below this, tails compare as flat
	double fit_floor  = 1e-12;  // tail values entering the decay fit
};

// Size-scaling verdict over >= 3 system sizes:
//   BIC        - no tail value grows beyond eps at any step, and the log-tail
//                of the largest size fits a negative slope;
//   Resonance  - the majority of tested distances grow steadily beyond eps;
//   Undecided  - anything non-monotonic.
Classification classify_candidate(std::vector<TailProfile> profiles,
                                  const ClassifyOptions& options = {});

// One candidate eigenstate per system size, matched by parity, energy window
// and minimal width.
struct CandidateMatch {
	int         L = 0;
	std::size_t spectrum_index = 0;
	double      energy = 0;
	double      width = 0;
};

struct SizedSpectrum {
	int                                L = 0;
	std::shared_ptr<const ParityBasis> basis;  // parity sector the spectrum was solved in
	Spectrum                           spectrum;
};

std::vector<CandidateMatch> match_candidate_across_sizes(const std::vector<SizedSpectrum>& spectra,
                                                         double energy_ref, double window);

}  // namespace biclab
