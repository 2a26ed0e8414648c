#include "biclab/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace biclab {

const char* to_string(Verdict v) {
	switch(v) {
	case Verdict::BIC: return "BIC";
	case Verdict::Resonance: return "Resonance";
	default: return "Undecided";
	}
}

TailProfile tail_profile(const DensityProfile& profile, double candidate_energy, Parity parity) {
	TailProfile t;
	t.half_length      = profile.half_length;
	t.candidate_energy = candidate_energy;
	t.parity           = parity;
	t.tail.resize(profile.half_length + 1);
	t.tail[0] = profile.at_site(0);
	for(int r = 1; r <= profile.half_length; ++r)
		t.tail[r] = 0.5 * (profile.at_site(r) + profile.at_site(-r));
	return t;
}

TailProfile tail_profile(const Eigen::VectorXd& state, const SectorBasis& basis,
                         double candidate_energy, Parity parity) {
	return tail_profile(density(state, basis), candidate_energy, parity);
}

Classification classify_candidate(std::vector<TailProfile> profiles,
                                  const ClassifyOptions& options) {
	if(profiles.size() < 3) throw error("classify_candidate: needs >= 3 system sizes");
	std::sort(profiles.begin(), profiles.end(),
	          [](const TailProfile& a, const TailProfile& b) { return a.half_length < b.half_length; });
	for(std::size_t i = 0; i + 1 < profiles.size(); ++i)
		if(profiles[i].half_length == profiles[i + 1].half_length)
			throw error("classify_candidate: duplicate system size L = "
			            + std::to_string(profiles[i].half_length));

	Classification out;
	// pairwise steps; each step compares every r it can see (r0..L_small)
	for(std::size_t i = 0; i + 1 < profiles.size(); ++i) {
		const TailProfile& a = profiles[i];
		const TailProfile& b = profiles[i + 1];
		for(int r = options.r0; r <= a.half_length; ++r) {
			const double va = a.tail[r];
			const double vb = b.tail[r];
			double       ratio;
			if(va < options.floor_zero && vb < options.floor_zero) ratio = 1.0;
			else if(va < options.floor_zero) ratio = std::numeric_limits<double>::infinity();
			else ratio = vb / va;
			out.evidence.push_back({a.half_length, b.half_length, r, ratio});
		}
	}

	// trend per distance r over all steps that see it; the Resonance vote is
	// restricted to distances visible at every size (r <= min L), while the
	// BIC condition must hold wherever any step can look
	const int r_union  = profiles[profiles.size() - 2].half_length;
	const int r_common = profiles.front().half_length;
	bool      all_nonincreasing = true;
	int       n_common = 0, n_increasing = 0;
	for(int r = options.r0; r <= r_union; ++r) {
		double net       = 1.0;
		bool   step_up   = false;  // some step grows beyond eps
		bool   step_down = false;  // some step shrinks beyond eps
		bool   seen      = false;
		for(const TailStep& s : out.evidence)
			if(s.r == r) {
				seen = true;
				net *= s.ratio;
				if(s.ratio > 1.0 + options.eps) step_up = true;
				if(s.ratio < 1.0 / (1.0 + options.eps)) step_down = true;
			}
		if(!seen) continue;
		Trend trend;
		if(!step_up && net <= 1.0 + options.eps) trend = Trend::NonIncreasing;
		else if(!step_down && net > 1.0 + options.eps) trend = Trend::Increasing;
		else trend = Trend::Mixed;
		out.trends.emplace_back(r, trend);
		if(trend != Trend::NonIncreasing) all_nonincreasing = false;
		if(r <= r_common) {
			++n_common;
			if(trend == Trend::Increasing) ++n_increasing;
		}
	}
	if(n_common == 0) throw error("classify_candidate: no tail distances >= r0 common to the sizes");

	// decay fit on the largest size
	const TailProfile& largest = profiles.back();
	double             sx = 0, sy = 0, sxx = 0, sxy = 0;
	int                n_fit = 0;
	for(int r = options.r0; r <= largest.half_length; ++r)
		if(largest.tail[r] > options.fit_floor) {
			const double y = std::log(largest.tail[r]);
			sx += r;
			sy += y;
			sxx += double(r) * r;
			sxy += r * y;
			++n_fit;
		}
	if(n_fit >= 2) {
		const double denom = n_fit * sxx - sx * sx;
		if(denom != 0) out.decay_rate = (n_fit * sxy - sx * sy) / denom;
	}

	if(all_nonincreasing && out.decay_rate && *out.decay_rate < 0) out.verdict = Verdict::BIC;
	else if(2 * n_increasing > n_common) out.verdict = Verdict::Resonance;
	else out.verdict = Verdict::Undecided;
	return out;
}

std::vector<CandidateMatch> match_candidate_across_sizes(const std::vector<SizedSpectrum>& spectra,
                                                         double energy_ref, double window) {
	std::vector<CandidateMatch> out;
	for(const SizedSpectrum& s : spectra) {
		std::optional<CandidateMatch> best;
		for(std::size_t k = 0; k < s.spectrum.size(); ++k) {
			if(std::abs(s.spectrum.values[k] - energy_ref) > window) continue;
			const double w = width(
			    density(Eigen::VectorXd(s.spectrum.vectors.col(static_cast<Eigen::Index>(k))),
			            *s.basis));
			if(!best || w < best->width)
				best = CandidateMatch{s.L, k, s.spectrum.values[k], w};
		}
		if(!best)
			throw error("no state within window " + std::to_string(window) + " of E = "
			            + std::to_string(energy_ref) + " at L = " + std::to_string(s.L));
		out.push_back(*best);
	}
	return out;
}

}  // namespace biclab
