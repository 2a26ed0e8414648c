#include "biclab/observe.hpp"

#include <cmath>

namespace biclab {

double DensityProfile::sum() const {
	double s = 0;
	for(double v : rho) s += v;
	return s;
}

namespace {

DensityProfile density_from_weights(const std::vector<double>& weight, const SectorBasis& basis) {
	const int      m = basis.lattice().site_count();
	DensityProfile p;
	p.half_length = basis.lattice().half_length;
	p.particles   = basis.particles();
	p.rho.assign(m, 0.0);
	for(std::size_t r = 0; r < basis.dim(); ++r) {
		const double w = weight[r];
		if(w == 0.0) continue;
		const auto s = basis.state(r);
		for(int i = 0; i < m; ++i)
			if(s[i]) p.rho[i] += w * s[i];
	}
	const double inv_n = basis.particles() > 0 ? 1.0 / basis.particles() : 0.0;
	for(double& v : p.rho) v *= inv_n;
	return p;
}

}  // namespace

DensityProfile density(const Eigen::VectorXd& state, const SectorBasis& basis) {
	if(static_cast<std::size_t>(state.size()) != basis.dim()) throw error("density: size mismatch");
	std::vector<double> w(basis.dim());
	for(std::size_t r = 0; r < basis.dim(); ++r)
		w[r] = state[static_cast<Eigen::Index>(r)] * state[static_cast<Eigen::Index>(r)];
	return density_from_weights(w, basis);
}

DensityProfile density(const Eigen::VectorXcd& state, const SectorBasis& basis) {
	if(static_cast<std::size_t>(state.size()) != basis.dim()) throw error("density: size mismatch");
	std::vector<double> w(basis.dim());
	for(std::size_t r = 0; r < basis.dim(); ++r) w[r] = std::norm(state[static_cast<Eigen::Index>(r)]);
	return density_from_weights(w, basis);
}

DensityProfile density(const Eigen::VectorXd& adapted, const ParityBasis& basis) {
	return density(basis.lift(adapted), basis.parent());
}

double width(const DensityProfile& profile) {
	double m1 = 0, m2 = 0;
	for(int x = -profile.half_length; x <= profile.half_length; ++x) {
		const double r = profile.at_site(x);
		m1 += x * r;
		m2 += double(x) * x * r;
	}
	double var = m2 - m1 * m1;
	if(var < -1e-12) throw error("width: negative variance " + std::to_string(var));
	if(var < 0) var = 0;
	return std::sqrt(var);
}

double microcanonical_average(const Spectrum& spectrum, std::span<const double> eev, double energy,
                              double half_window) {
	if(!spectrum.complete) throw error("microcanonical average needs a complete spectrum");
	if(eev.size() != spectrum.size()) throw error("microcanonical average: eev size mismatch");
	double      sum   = 0;
	std::size_t count = 0;
	for(std::size_t k = 0; k < spectrum.size(); ++k)
		if(std::abs(spectrum.values[k] - energy) <= half_window) {
			sum += eev[k];
			++count;
		}
	if(count == 0)
		throw error("microcanonical window [" + std::to_string(energy - half_window) + ", "
		            + std::to_string(energy + half_window)
		            + "] contains no eigenstates; enlarge the window");
	return sum / static_cast<double>(count);
}

double overlap(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a.dot(b); }

std::complex<double> overlap(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
	return a.dot(b);
}

double energy_expectation(const SparseOperator& op, const Eigen::VectorXd& state) {
	return state.dot(op.apply(state));
}

double energy_expectation(const SparseOperator& op, const Eigen::VectorXcd& state) {
	return state.dot(op.apply(state)).real();
}

std::vector<double> number_diagonal(int site, const SectorBasis& basis) {
	const int           idx = basis.lattice().index_of(site);
	std::vector<double> d(basis.dim());
	for(std::size_t r = 0; r < basis.dim(); ++r) d[r] = basis.state(r)[idx];
	return d;
}

std::vector<double> number_diagonal(int site, const ParityBasis& basis) {
	const int           idx = basis.parent().lattice().index_of(site);
	std::vector<double> d(basis.dim());
	for(std::size_t k = 0; k < basis.dim(); ++k) {
		const auto& e = basis.element(k);
		const auto  a = basis.parent().state(e.rep);
		if(e.self_symmetric) d[k] = a[idx];
		else {
			const auto b = basis.parent().state(e.partner);
			d[k]         = 0.5 * (a[idx] + b[idx]);
		}
	}
	return d;
}

std::vector<double> eigenstate_expectations(const Spectrum& spectrum,
                                            std::span<const double> diagonal) {
	if(static_cast<std::size_t>(spectrum.vectors.rows()) != diagonal.size())
		throw error("eigenstate_expectations: size mismatch");
	std::vector<double> out(spectrum.size());
	for(std::size_t k = 0; k < spectrum.size(); ++k) {
		const auto v = spectrum.vectors.col(static_cast<Eigen::Index>(k));
		double     s = 0;
		for(Eigen::Index i = 0; i < v.size(); ++i) s += diagonal[static_cast<std::size_t>(i)] * v[i] * v[i];
		out[k] = s;
	}
	return out;
}

}  // namespace biclab
