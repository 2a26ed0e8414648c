#include "biclab/quench.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace biclab {

InitialState parse_initial_state(const std::string& name) {
	if(name == "n4_1122") return InitialState::N4_1122;
	if(name == "n6_1111_22") return InitialState::N6_1111_22;
	if(name == "n6_112233") return InitialState::N6_112233;
	if(name == "custom") return InitialState::Custom;
	throw error("unknown initial state '" + name + "'");
}

const char* to_string(InitialState k) {
	switch(k) {
	case InitialState::N4_1122: return "n4_1122";
	case InitialState::N6_1111_22: return "n6_1111_22";
	case InitialState::N6_112233: return "n6_112233";
	default: return "custom";
	}
}

namespace {

FockState seed_fock(InitialState kind, const SectorBasis& basis) {
	switch(kind) {
	case InitialState::N4_1122: return basis.fock_from_sites({{1, 2}, {2, 2}});
	case InitialState::N6_1111_22: return basis.fock_from_sites({{1, 4}, {2, 2}});
	case InitialState::N6_112233:
		if(basis.lattice().half_length < 3) throw error("initial state needs L >= 3");
		return basis.fock_from_sites({{1, 2}, {2, 2}, {3, 2}});
	default: throw error("custom initial state needs an explicit Fock seed");
	}
}

}  // namespace

Eigen::VectorXd build_initial_state(const FockState& fock, const SectorBasis& basis,
                                    bool symmetrize) {
	const std::size_t r = basis.rank_of(fock);
	Eigen::VectorXd   v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.dim()));
	if(!symmetrize) {
		v[static_cast<Eigen::Index>(r)] = 1.0;
		return v;
	}
	const std::size_t pr = basis.reflected(r);
	if(pr == r) {
		v[static_cast<Eigen::Index>(r)] = 1.0;  // already parity-even
		return v;
	}
	constexpr double inv_sqrt2        = 0.70710678118654752440;
	v[static_cast<Eigen::Index>(r)]   = inv_sqrt2;
	v[static_cast<Eigen::Index>(pr)]  = inv_sqrt2;
	return v;
}

Eigen::VectorXd build_initial_state(InitialState kind, const SectorBasis& basis) {
	return build_initial_state(seed_fock(kind, basis), basis, true);
}

double diagonal_ensemble(const Eigen::VectorXd& initial, const Spectrum& spectrum,
                         std::span<const double> obs_diagonal, double degeneracy_tol) {
	if(!spectrum.complete) throw error("diagonal ensemble needs a complete spectrum");
	if(static_cast<std::size_t>(initial.size()) != static_cast<std::size_t>(spectrum.vectors.rows()))
		throw error("diagonal ensemble: size mismatch");
	const Eigen::VectorXd coef = spectrum.vectors.transpose() * initial;
	const double scale = 1.0
	                     + std::max(std::abs(spectrum.values.front()),
	                                std::abs(spectrum.values.back()));
	double      total = 0;
	std::size_t i     = 0;
	while(i < spectrum.size()) {
		std::size_t j = i;
		while(j + 1 < spectrum.size()
		      && spectrum.values[j + 1] - spectrum.values[j] < degeneracy_tol * scale)
			++j;
		// projector expectation over the degenerate block
		Eigen::VectorXd proj = Eigen::VectorXd::Zero(initial.size());
		for(std::size_t k = i; k <= j; ++k)
			proj += coef[static_cast<Eigen::Index>(k)] * spectrum.vectors.col(static_cast<Eigen::Index>(k));
		for(Eigen::Index n = 0; n < proj.size(); ++n)
			total += obs_diagonal[static_cast<std::size_t>(n)] * proj[n] * proj[n];
		i = j + 1;
	}
	return total;
}

double diagonal_ensemble_eev(const Eigen::VectorXd& initial, const Spectrum& spectrum,
                             std::span<const double> eev) {
	if(!spectrum.complete) throw error("diagonal ensemble needs a complete spectrum");
	const Eigen::VectorXd coef = spectrum.vectors.transpose() * initial;
	double                total = 0;
	for(std::size_t k = 0; k < spectrum.size(); ++k)
		total += coef[static_cast<Eigen::Index>(k)] * coef[static_cast<Eigen::Index>(k)] * eev[k];
	return total;
}

double dominant_frequency(std::span<const double> values, double dt) {
	const std::size_t n = values.size();
	if(n < 8) throw error("dominant_frequency: series too short");
	double mean = 0;
	for(double v : values) mean += v;
	mean /= static_cast<double>(n);

	// Hann-windowed periodogram
	const std::size_t   nfreq = n / 2;
	std::vector<double> power(nfreq + 1, 0.0);
	for(std::size_t k = 1; k <= nfreq; ++k) {
		std::complex<double> acc = 0;
		for(std::size_t j = 0; j < n; ++j) {
			const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * j / (n - 1));
			const double ph = -2.0 * std::numbers::pi * double(k) * double(j) / double(n);
			acc += w * (values[j] - mean) * std::complex<double>(std::cos(ph), std::sin(ph));
		}
		power[k] = std::norm(acc);
	}
	std::size_t peak = 1;
	for(std::size_t k = 2; k <= nfreq; ++k)
		if(power[k] > power[peak]) peak = k;
	// parabolic refinement around the peak bin
	double delta = 0;
	if(peak > 1 && peak < nfreq) {
		const double a = power[peak - 1], b = power[peak], c = power[peak + 1];
		const double denom = a - 2 * b + c;
		if(denom != 0) delta = 0.5 * (a - c) / denom;
	}
	return 2.0 * std::numbers::pi * (double(peak) + delta) / (double(n) * dt);
}

QuenchResult run_quench(const QuenchScenario& sc) {
	const int n_of_kind = [&] {
		switch(sc.initial) {
		case InitialState::N4_1122: return 4;
		case InitialState::N6_1111_22:
		case InitialState::N6_112233: return 6;
		default: {
			int n = 0;
			for(auto o : sc.custom_fock) n += o;
			return n;
		}
		}
	}();
	auto basis = std::make_shared<SectorBasis>(sc.lattice, n_of_kind);

	Eigen::VectorXd psi0 = sc.initial == InitialState::Custom
	                           ? build_initial_state(sc.custom_fock, *basis, sc.symmetrize)
	                           : build_initial_state(sc.initial, *basis);
	const SparseOperator h = build_full_hamiltonian(sc.params, *basis);
	const SparseOperator p = build_parity_matrix(*basis);

	QuenchResult out;
	out.energy = energy_expectation(h, psi0);

	if(sc.samples < 2) throw error("quench needs at least two samples");
	const double dt = sc.t_max / static_cast<double>(sc.samples - 1);
	out.times.resize(sc.samples);
	std::vector<std::vector<double>> site_diag;
	for(int site : sc.sites) site_diag.push_back(number_diagonal(site, *basis));
	for(int site : sc.sites) out.series[site] = {};

	Eigen::VectorXcd psi = psi0.cast<std::complex<double>>();
	const double     parity0 = psi0.dot(p.apply(psi0));
	for(std::size_t k = 0; k < sc.samples; ++k) {
		out.times[k] = dt * static_cast<double>(k);
		if(k > 0) psi = evolve(h, psi, dt, sc.evolve_tol * dt / sc.t_max);
		for(std::size_t si = 0; si < sc.sites.size(); ++si) {
			double v = 0;
			for(Eigen::Index i = 0; i < psi.size(); ++i)
				v += site_diag[si][static_cast<std::size_t>(i)] * std::norm(psi[i]);
			out.series[sc.sites[si]].push_back(v);
		}
		const double e_now = energy_expectation(h, psi);
		out.energy_drift = std::max(out.energy_drift,
		                            std::abs(e_now - out.energy) / std::max(1.0, std::abs(out.energy)));
		out.norm_drift   = std::max(out.norm_drift, std::abs(psi.norm() - 1.0));
		const double par = psi.dot(p.apply(psi)).real();
		out.parity_drift = std::max(out.parity_drift, std::abs(par - parity0));
	}

	for(std::size_t si = 0; si < sc.sites.size(); ++si) {
		double      sum = 0;
		std::size_t cnt = 0;
		for(std::size_t k = 0; k < sc.samples; ++k)
			if(out.times[k] >= sc.tail_start) {
				sum += out.series[sc.sites[si]][k];
				++cnt;
			}
		if(cnt == 0) throw error("quench tail window is empty");
		out.long_time_avg[sc.sites[si]] = sum / static_cast<double>(cnt);
	}

	if(sc.with_ensembles) {
		if(basis->dim() > sc.dense_cap)
			throw error("ensemble comparison needs a dense-solvable dimension; raise dense_cap "
			            "or disable with_ensembles");
		Spectrum spec = eig_dense(h, DenseOptions{.dense_cap = sc.dense_cap});
		for(std::size_t si = 0; si < sc.sites.size(); ++si) {
			const auto eev = eigenstate_expectations(spec, site_diag[si]);
			out.microcanonical[sc.sites[si]]
			    = microcanonical_average(spec, eev, out.energy, sc.mc_half_window * sc.params.t);
			out.diagonal[sc.sites[si]] = diagonal_ensemble(psi0, spec, site_diag[si]);
		}
		// overlap decomposition of the initial state
		const Eigen::VectorXd coef = spec.vectors.transpose() * psi0;
		const SparseOperator  pmat = p;
		for(std::size_t k = 0; k < spec.size(); ++k) {
			const double w = coef[static_cast<Eigen::Index>(k)] * coef[static_cast<Eigen::Index>(k)];
			if(w <= 1e-3) continue;
			const Eigen::VectorXd v = spec.vectors.col(static_cast<Eigen::Index>(k));
			OverlapRecord         rec;
			rec.energy      = spec.values[k];
			rec.weight      = w;
			rec.width       = width(density(v, *basis));
			rec.parity_sign = pmat.apply(v).dot(v) > 0 ? 1 : -1;
			out.overlaps.push_back(rec);
		}
		std::sort(out.overlaps.begin(), out.overlaps.end(),
		          [](const OverlapRecord& a, const OverlapRecord& b) { return a.weight > b.weight; });
	}
	return out;
}

}  // namespace biclab
