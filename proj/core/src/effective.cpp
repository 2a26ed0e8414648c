#include "biclab/effective.hpp"

#include <cmath>
#include <map>

namespace biclab {

EffectiveBasis::EffectiveBasis(int half_length) : half_length_(half_length) {
	if(half_length < 2) throw error("effective basis needs half-length >= 2");
	for(int x1 = -half_length; x1 <= half_length; ++x1) {
		if(x1 == 0) continue;
		for(int x2 = x1 + 1; x2 <= half_length; ++x2) {
			if(x2 == 0) continue;
			configs_.push_back({x1, x2});
		}
	}
}

std::optional<std::size_t> EffectiveBasis::index_of(PairConfig c) const {
	if(c.x1 >= c.x2 || c.x1 == 0 || c.x2 == 0 || c.x1 < -half_length_ || c.x2 > half_length_)
		return std::nullopt;
	// lexicographic position: count configs with smaller x1, then offset in x2
	std::size_t idx = 0;
	for(int x1 = -half_length_; x1 < c.x1; ++x1) {
		if(x1 == 0) continue;
		int n = half_length_ - x1;            // x2 in (x1, L]
		if(x1 < 0) n -= 1;                    // excluding x2 = 0
		idx += static_cast<std::size_t>(n);
	}
	int offset = c.x2 - c.x1 - 1;
	if(c.x1 < 0 && c.x2 > 0) offset -= 1;  // skip x2 = 0
	return idx + static_cast<std::size_t>(offset);
}

Eigen::VectorXd EffectiveBasis::embed(const Eigen::VectorXd& coefficients, ClusterSector sector,
                                      const SectorBasis& fock) const {
	if(static_cast<std::size_t>(coefficients.size()) != dim())
		throw error("embed: coefficient size mismatch");
	if(fock.particles() != 4) throw error("embed: pair sectors carry N = 4");
	if(fock.lattice().half_length < half_length_) throw error("embed: Fock lattice too small");
	Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(fock.dim()));
	for(std::size_t i = 0; i < dim(); ++i) {
		const PairConfig& c = configs_[i];
		FockState         s;
		if(sector == ClusterSector::APair)
			s = fock.fock_from_sites({{c.x1, 2}, {c.x2, 2}});
		else
			s = fock.fock_from_sites({{0, 2}, {c.x1, 1}, {c.x2, 1}});
		full[static_cast<Eigen::Index>(fock.rank_of(s))] = coefficients[static_cast<Eigen::Index>(i)];
	}
	return full;
}

namespace {

void check_denominators_022(const ModelParams& p) {
	if(p.U == 0.0) throw error("H022 undefined at U = 0");
	if(p.U == p.V) throw error("H022 undefined at U = V (degenerate virtual state)");
}

void check_denominators_211(const ModelParams& p) {
	if(p.V == 0.0 || p.U + p.V == 0.0 || 2 * p.U + p.V == 0.0 || p.U == 0.0)
		throw error("H211 second order undefined: V, U+V, 2U+V and U must be nonzero");
}

}  // namespace

SparseOperator build_h022(const ModelParams& params, int half_length, bool include_constant) {
	check_denominators_022(params);
	const EffectiveBasis basis(half_length);
	const double t2 = params.t * params.t;
	const double U = params.U, V = params.V;

	std::vector<SparseOperator::Triplet> tris;
	for(std::size_t i = 0; i < basis.dim(); ++i) {
		const auto [x1, x2] = basis.config(i);
		double diag = 4 * t2 / U;
		for(int s : {-1, +1}) {
			const bool occupied = (x1 == s || x2 == s);
			diag += 2 * t2 / (U - (occupied ? V : 0.0));
		}
		if(x2 == x1 + 1) diag -= 16 * t2 / U;
		if(include_constant) diag += 2 * U;
		tris.push_back({i, i, diag});
		// cluster hops; destination must stay ordered, off-impurity, unoccupied
		for(PairConfig to : {PairConfig{x1 - 1, x2}, PairConfig{x1 + 1, x2},
		                     PairConfig{x1, x2 - 1}, PairConfig{x1, x2 + 1}}) {
			const auto j = basis.index_of(to);
			if(j && *j > i) tris.push_back({i, *j, 2 * t2 / U});
		}
	}
	return SparseOperator::from_triplets(basis.dim(), std::move(tris), true);
}

SparseOperator build_h211(const ModelParams& params, int half_length, int order,
                          bool include_constant) {
	if(order != 1 && order != 2) throw error("H211 order must be 1 or 2");
	if(order == 2) check_denominators_211(params);
	const EffectiveBasis basis(half_length);
	const double t = params.t, U = params.U, V = params.V;
	const double t2 = t * t;

	std::vector<SparseOperator::Triplet> tris;
	const double exchange = order == 2 ? t2 * (U - V) / ((U + V) * (2 * U + V)) : 0.0;
	const double adj_diag = order == 2 ? t2 * (8 * U * U + 5 * U * V - V * V) / (V * (U + V) * (2 * U + V)) : 0.0;

	for(std::size_t i = 0; i < basis.dim(); ++i) {
		const auto [y1, y2] = basis.config(i);
		double diag = include_constant ? U + 2 * V : 0.0;
		if(order == 2) {
			diag += 4 * t2 / (U + V);
			for(int s : {-1, +1})
				if(y1 == s || y2 == s) diag += adj_diag;
			if(y2 == y1 + 1) diag -= 4 * t2 / U;  // virtual double occupancy of the pair
		}
		if(diag != 0.0) tris.push_back({i, i, diag});
		// first-order single-particle hops
		for(PairConfig to : {PairConfig{y1 - 1, y2}, PairConfig{y1 + 1, y2},
		                     PairConfig{y1, y2 - 1}, PairConfig{y1, y2 + 1}}) {
			const auto j = basis.index_of(to);
			if(j && *j > i) tris.push_back({i, *j, -t});
		}
		if(order == 2) {
			// exchange across the impurity: the single at -+1 moves to +-1
			for(int from : {-1, +1}) {
				if(y1 != from && y2 != from) continue;
				const int to    = -from;
				const int other = (y1 == from) ? y2 : y1;
				if(other == to) continue;
				PairConfig target{std::min(to, other), std::max(to, other)};
				const auto j = basis.index_of(target);
				if(j && *j > i) tris.push_back({i, *j, exchange});
			}
			// correlated shift of an adjacent pair through double occupancy
			if(y2 == y1 + 1) {
				for(PairConfig to : {PairConfig{y1 + 1, y2 + 1}, PairConfig{y1 - 1, y2 - 1}}) {
					const auto j = basis.index_of(to);
					if(j && *j > i) tris.push_back({i, *j, -2 * t2 / U});
				}
			}
		}
	}
	return SparseOperator::from_triplets(basis.dim(), std::move(tris), true);
}

double cross_coupling(const ModelParams& params) {
	if(params.V == 0.0) throw error("cross coupling undefined at V = 0");
	return 4.0 * std::sqrt(2.0) * params.t * params.t / params.V;
}

SparseOperator build_combined(const ModelParams& params, int half_length) {
	const EffectiveBasis basis(half_length);
	const SparseOperator a = build_h022(params, half_length, true);
	const SparseOperator b = build_h211(params, half_length, 2, true);
	const std::size_t    na = basis.dim();

	std::vector<SparseOperator::Triplet> tris;
	a.for_each_entry([&](std::size_t r, std::size_t c, double v) { tris.push_back({r, c, v}); });
	b.for_each_entry(
	    [&](std::size_t r, std::size_t c, double v) { tris.push_back({na + r, na + c, v}); });
	const auto idx = basis.index_of({-1, +1});
	tris.push_back({*idx, na + *idx, cross_coupling(params)});
	return SparseOperator::from_triplets(2 * na, std::move(tris), true);
}

namespace {

// (N0, sorted off-impurity occupations) identifies a cluster sector
struct SectorLabel {
	int                    n0;
	std::vector<int>       clusters;
	friend bool operator==(const SectorLabel&, const SectorLabel&) = default;
};

SectorLabel label_of(std::span<const occupation_t> s, int impurity_index) {
	SectorLabel l;
	l.n0 = s[impurity_index];
	for(int i = 0; i < static_cast<int>(s.size()); ++i)
		if(i != impurity_index && s[i] > 0) l.clusters.push_back(s[i]);
	std::sort(l.clusters.begin(), l.clusters.end());
	return l;
}

SectorLabel label_for(ClusterSector sector) {
	if(sector == ClusterSector::APair) return {0, {2, 2}};
	return {2, {1, 1}};
}

double sector_energy(ClusterSector sector, const ModelParams& p) {
	return sector == ClusterSector::APair ? 2 * p.U : p.U + 2 * p.V;
}

}  // namespace

Eigen::MatrixXd numeric_second_order(ClusterSector bra, ClusterSector ket,
                                     const ModelParams& params, const SectorBasis& fock,
                                     const EffectiveBasis& configs) {
	if(fock.lattice().boundary != Boundary::Open)
		throw error("numeric_second_order: Fock basis must be open-boundary");
	if(fock.particles() != 4) throw error("numeric_second_order: Fock basis must carry N = 4");
	if(fock.lattice().half_length < configs.half_length() + 1)
		throw error("numeric_second_order: Fock half-length must exceed the config range "
		            "(virtual hops at the boundary)");

	const int    ci    = fock.lattice().index_of(0);
	const auto   bonds = lattice_bonds(fock.lattice());
	const double t     = params.t;
	const double e_ket = sector_energy(ket, params);
	const SectorLabel a_label = label_for(ClusterSector::APair);
	const SectorLabel b_label = label_for(ClusterSector::BPair);

	auto h0_energy = [&](std::span<const occupation_t> s) {
		double d = 0;
		for(occupation_t n : s) d += 0.5 * params.U * n * (n - 1.0);
		return d + params.V * s[ci];
	};
	auto in_model_space = [&](std::span<const occupation_t> s) {
		const SectorLabel l = label_of(s, ci);
		return l == a_label || l == b_label;
	};
	auto fock_of = [&](PairConfig c, ClusterSector sector) {
		if(sector == ClusterSector::APair) return fock.fock_from_sites({{c.x1, 2}, {c.x2, 2}});
		return fock.fock_from_sites({{0, 2}, {c.x1, 1}, {c.x2, 1}});
	};

	// bra lookup: full-basis rank -> row index
	std::map<std::size_t, std::size_t> bra_rows;
	for(std::size_t i = 0; i < configs.dim(); ++i)
		bra_rows[fock.rank_of(fock_of(configs.config(i), bra))] = i;

	const double    scale = std::max({1.0, std::abs(params.U), std::abs(params.V)});
	Eigen::MatrixXd out   = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(configs.dim()),
	                                              static_cast<Eigen::Index>(configs.dim()));
	std::vector<Move> first, second;
	for(std::size_t j = 0; j < configs.dim(); ++j) {
		const FockState ket_state = fock_of(configs.config(j), ket);
		kinetic_moves(ket_state, bonds, first);
		for(const Move& m1 : first) {
			const std::size_t q = fock.rank_of(m1.state);
			if(in_model_space(fock.state(q))) {
				// first-order contribution
				auto it = bra_rows.find(q);
				if(it != bra_rows.end())
					out(static_cast<Eigen::Index>(it->second), static_cast<Eigen::Index>(j))
					    += t * m1.amplitude;
				continue;
			}
			const double denom = e_ket - h0_energy(fock.state(q));
			if(std::abs(denom) < 1e-9 * scale)
				throw error("numeric_second_order: resolvent singular (degenerate virtual state); "
				            "perturbation theory breaks down here");
			kinetic_moves(m1.state, bonds, second);
			for(const Move& m2 : second) {
				auto it = bra_rows.find(fock.rank_of(m2.state));
				if(it != bra_rows.end())
					out(static_cast<Eigen::Index>(it->second), static_cast<Eigen::Index>(j))
					    += t * t * m2.amplitude * m1.amplitude / denom;
			}
		}
	}
	return out;
}

BoundStateFormula bound_state_energy(Branch branch, const ModelParams& params) {
	const double t2 = params.t * params.t;
	const double U = params.U, V = params.V;
	if(U == 0.0) throw error("bound-state energies undefined at U = 0");
	BoundStateFormula f;
	f.branch = branch;
	switch(branch) {
	case Branch::B1: {
		if(V == 0 || U == V || U + 7 * V == 0)
			throw error("E_b1 undefined: vanishing denominator");
		f.energy    = 2 * U - 8 * t2 / U + 16 * t2 / U * V * V / ((U - V) * (U + 7 * V));
		f.exists    = (-U / (3 * V) < 1.0);
		f.momentum1 = (U - V) / V;
		f.momentum2 = -V / (U + 7 * V);
		break;
	}
	case Branch::B2: {
		if(V == 0 || U == V) throw error("E_b2 undefined: vanishing denominator");
		f.energy    = 2 * U + 8 * t2 / U + 4 * t2 / U * ((U - V) * (U - V) + V * V) / (V * (U - V));
		const double ratio = U / (2 * V);
		f.exists           = ratio > 0.0 && ratio < 1.0;
		f.momentum1        = V / (U - V);
		f.momentum2        = (U - V) / V;
		break;
	}
	case Branch::Secondary: {
		if(V == 0 || U == V || 8 * U - 7 * V == 0)
			throw error("secondary branch undefined: vanishing denominator");
		f.energy = 2 * U - 8 * t2 / U + 16 * t2 / U * (U - V) * (U - V) / (V * (8 * U - 7 * V));
		const double ratio = U / V;
		f.exists           = ratio > 0.75 && ratio < 1.0;
		f.momentum1        = (8 * U - 7 * V) / (U - V);
		f.momentum2        = (U - V) / V;
		break;
	}
	}
	return f;
}

double bound_state_wavefunction(Branch branch, int parity_sign, const ModelParams& params,
                                PairConfig c) {
	if(parity_sign != 1 && parity_sign != -1) throw error("parity sign must be +-1");
	if(c.x1 >= c.x2 || c.x1 == 0 || c.x2 == 0) throw error("invalid pair configuration");
	const double U = params.U, V = params.V;
	switch(branch) {
	case Branch::B1: {
		const double a = (U - V) / V;
		const double b = -V / (U + 7 * V);
		if(c.x1 > 0) return std::pow(a, c.x1) * std::pow(b, c.x2);
		if(c.x2 < 0) return parity_sign * std::pow(a, -c.x2) * std::pow(b, -c.x1);
		return 0.0;  // straddling the impurity
	}
	case Branch::B2: {
		if(parity_sign < 0) return 0.0;  // no odd-parity bound state in this region
		if(c.x1 < 0 && c.x2 > 0) return std::pow((U - V) / V, c.x2 - c.x1);
		return 0.0;
	}
	default: throw error("no closed-form wavefunction for this branch");
	}
}

Eigen::VectorXd assemble_bound_state(Branch branch, int parity_sign, const ModelParams& params,
                                     const EffectiveBasis& basis) {
	Eigen::VectorXd v(static_cast<Eigen::Index>(basis.dim()));
	for(std::size_t i = 0; i < basis.dim(); ++i)
		v[static_cast<Eigen::Index>(i)] = bound_state_wavefunction(branch, parity_sign, params,
		                                                           basis.config(i));
	const double n = v.norm();
	if(n > 0) v /= n;
	return v;
}

}  // namespace biclab
