#include "biclab/basis.hpp"

#include <algorithm>
#include <limits>

namespace biclab {

namespace {

// C(n, k) in 64 bits with explicit overflow detection
std::size_t checked_binomial(std::size_t n, std::size_t k) {
	if(k > n) return 0;
	k = std::min(k, n - k);
	std::size_t result = 1;
	for(std::size_t i = 1; i <= k; ++i) {
		// result * (n - k + i) / i is integral at every step
		std::size_t factor = n - k + i;
		if(result > std::numeric_limits<std::size_t>::max() / factor)
			throw error("binomial coefficient overflow: C(" + std::to_string(n) + ", "
			            + std::to_string(k) + ")");
		result = result * factor / i;
	}
	return result;
}

}  // namespace

std::size_t sector_dimension(int site_count, int particles) {
	if(site_count < 1) throw error("site count must be >= 1");
	if(particles < 0) throw error("particle number must be >= 0");
	return checked_binomial(static_cast<std::size_t>(site_count + particles - 1),
	                        static_cast<std::size_t>(particles));
}

FockState parity_reflect(const FockState& state) {
	FockState out(state.rbegin(), state.rend());
	return out;
}

SectorBasis::SectorBasis(LatticeSpec lattice, int particles, std::size_t dimension_cap)
    : lattice_(lattice), particles_(particles), m_(lattice.site_count()) {
	dim_ = sector_dimension(m_, particles_);
	if(dim_ > dimension_cap)
		throw error("sector dimension " + std::to_string(dim_) + " exceeds cap "
		            + std::to_string(dimension_cap));
	if(particles_ > std::numeric_limits<occupation_t>::max())
		throw error("particle number too large for occupation storage");

	// compositions(r, k) = number of weak compositions of r into k parts
	compositions_.assign(static_cast<std::size_t>(particles_ + 1) * (m_ + 1), 0);
	for(int r = 0; r <= particles_; ++r)
		for(int k = 0; k <= m_; ++k)
			compositions_[static_cast<std::size_t>(r) * (m_ + 1) + k]
			    = (k == 0) ? (r == 0 ? 1 : 0)
			               : checked_binomial(static_cast<std::size_t>(r + k - 1),
			                                  static_cast<std::size_t>(k - 1));

	occ_.assign(dim_ * static_cast<std::size_t>(m_), 0);
	// enumerate in descending lexicographic order
	std::vector<occupation_t> cur(m_, 0);
	std::size_t               row = 0;
	auto                      emit = [&](const std::vector<occupation_t>& s) {
        std::copy(s.begin(), s.end(), occ_.begin() + row * static_cast<std::size_t>(m_));
        ++row;
	};
	// iterative: start with everything on the leftmost site
	auto rec = [&](auto&& self, int pos, int remaining) -> void {
		if(pos == m_ - 1) {
			cur[pos] = static_cast<occupation_t>(remaining);
			emit(cur);
			return;
		}
		for(int c = remaining; c >= 0; --c) {
			cur[pos] = static_cast<occupation_t>(c);
			self(self, pos + 1, remaining - c);
		}
	};
	rec(rec, 0, particles_);
}

FockState SectorBasis::state_vector(std::size_t rank) const {
	auto s = state(rank);
	return FockState(s.begin(), s.end());
}

std::size_t SectorBasis::rank_of(std::span<const occupation_t> state) const {
	if(static_cast<int>(state.size()) != m_) throw error("state size does not match lattice");
	std::size_t rank      = 0;
	int         remaining = particles_;
	for(int pos = 0; pos < m_ - 1; ++pos) {
		int n = state[pos];
		// states whose occupation at pos exceeds ours come first
		for(int c = remaining; c > n; --c)
			rank += compositions(remaining - c, m_ - pos - 1);
		remaining -= n;
		if(remaining < 0) throw error("state has more particles than the sector");
	}
	if(state[m_ - 1] != remaining) throw error("state particle number does not match sector");
	return rank;
}

std::size_t SectorBasis::reflected(std::size_t rank) const {
	auto                      s = state(rank);
	std::vector<occupation_t> rev(s.rbegin(), s.rend());
	return rank_of(rev);
}

FockState SectorBasis::fock_from_sites(const std::vector<std::pair<int, int>>& site_occupations) const {
	FockState s(m_, 0);
	int       total = 0;
	for(auto [x, n] : site_occupations) {
		s[lattice_.index_of(x)] = static_cast<occupation_t>(s[lattice_.index_of(x)] + n);
		total += n;
	}
	if(total != particles_)
		throw error("occupations sum to " + std::to_string(total) + ", sector has N = "
		            + std::to_string(particles_));
	return s;
}

ParityBasis::ParityBasis(std::shared_ptr<const SectorBasis> parent, Parity parity)
    : parent_(std::move(parent)), parity_(parity) {
	if(parity_ == Parity::None) throw error("parity basis requires Even or Odd");
	const std::size_t dim = parent_->dim();
	owner_.assign(dim, npos);
	elements_.reserve(dim / 2 + 1);
	for(std::size_t r = 0; r < dim; ++r) {
		const std::size_t pr = parent_->reflected(r);
		if(pr == r) {
			if(parity_ == Parity::Even) {
				owner_[r] = elements_.size();
				elements_.push_back({r, r, true});
			}
		}
		else if(pr > r) {
			owner_[r]  = elements_.size();
			owner_[pr] = elements_.size();
			elements_.push_back({r, pr, false});
		}
	}
}

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

Eigen::VectorXd ParityBasis::lift(const Eigen::VectorXd& adapted) const {
	Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(parent_->dim()));
	const double    s    = sign();
	for(std::size_t k = 0; k < elements_.size(); ++k) {
		const Element& e = elements_[k];
		if(e.self_symmetric) full[static_cast<Eigen::Index>(e.rep)] = adapted[static_cast<Eigen::Index>(k)];
		else {
			full[static_cast<Eigen::Index>(e.rep)]     += kInvSqrt2 * adapted[static_cast<Eigen::Index>(k)];
			full[static_cast<Eigen::Index>(e.partner)] += s * kInvSqrt2 * adapted[static_cast<Eigen::Index>(k)];
		}
	}
	return full;
}

Eigen::VectorXd ParityBasis::project(const Eigen::VectorXd& full) const {
	Eigen::VectorXd adapted = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim()));
	const double    s       = sign();
	for(std::size_t k = 0; k < elements_.size(); ++k) {
		const Element& e = elements_[k];
		if(e.self_symmetric) adapted[static_cast<Eigen::Index>(k)] = full[static_cast<Eigen::Index>(e.rep)];
		else
			adapted[static_cast<Eigen::Index>(k)]
			    = kInvSqrt2 * (full[static_cast<Eigen::Index>(e.rep)] + s * full[static_cast<Eigen::Index>(e.partner)]);
	}
	return adapted;
}

Eigen::VectorXcd ParityBasis::lift(const Eigen::VectorXcd& adapted) const {
	Eigen::VectorXcd full = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(parent_->dim()));
	const double     s    = sign();
	for(std::size_t k = 0; k < elements_.size(); ++k) {
		const Element& e = elements_[k];
		if(e.self_symmetric) full[static_cast<Eigen::Index>(e.rep)] = adapted[static_cast<Eigen::Index>(k)];
		else {
			full[static_cast<Eigen::Index>(e.rep)]     += kInvSqrt2 * adapted[static_cast<Eigen::Index>(k)];
			full[static_cast<Eigen::Index>(e.partner)] += s * kInvSqrt2 * adapted[static_cast<Eigen::Index>(k)];
		}
	}
	return full;
}

Eigen::VectorXcd ParityBasis::project(const Eigen::VectorXcd& full) const {
	Eigen::VectorXcd adapted = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim()));
	const double     s       = sign();
	for(std::size_t k = 0; k < elements_.size(); ++k) {
		const Element& e = elements_[k];
		if(e.self_symmetric) adapted[static_cast<Eigen::Index>(k)] = full[static_cast<Eigen::Index>(e.rep)];
		else
			adapted[static_cast<Eigen::Index>(k)]
			    = kInvSqrt2 * (full[static_cast<Eigen::Index>(e.rep)] + s * full[static_cast<Eigen::Index>(e.partner)]);
	}
	return adapted;
}

std::size_t count_self_symmetric(const SectorBasis& basis) {
	std::size_t count = 0;
	for(std::size_t r = 0; r < basis.dim(); ++r)
		if(basis.reflected(r) == r) ++count;
	return count;
}

}  // namespace biclab
