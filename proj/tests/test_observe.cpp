#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "biclab/observe.hpp"
#include "biclab/quench.hpp"

using namespace biclab;

namespace {
DensityProfile uniform_profile(int L) {
	DensityProfile p;
	p.half_length = L;
	p.particles   = 1;
	p.rho.assign(2 * L + 1, 1.0 / (2 * L + 1));
	return p;
}
}  // namespace

TEST_CASE("density of a product state") {
	SectorBasis     basis({5, Boundary::Periodic}, 4);
	Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.dim()));
	v[static_cast<Eigen::Index>(basis.rank_of(basis.fock_from_sites({{1, 2}, {2, 2}})))] = 1.0;
	const DensityProfile p = density(v, basis);
	CHECK(p.at_site(1) == doctest::Approx(0.5).epsilon(1e-15));
	CHECK(p.at_site(2) == doctest::Approx(0.5).epsilon(1e-15));
	CHECK(p.at_site(0) == 0.0);
	CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("parity-even states have mirror-symmetric density") {
	auto        basis = std::make_shared<SectorBasis>(LatticeSpec{4, Boundary::Periodic}, 3);
	ParityBasis even(basis, Parity::Even);
	Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(even.dim()));
	for(Eigen::Index i = 0; i < v.size(); ++i) v[i] = std::sin(0.3 * double(i) + 0.7);
	v /= v.norm();
	const DensityProfile p = density(v, even);
	for(int x = 1; x <= 4; ++x) CHECK(std::abs(p.at_site(x) - p.at_site(-x)) < 1e-12);
	CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("width formula") {
	SUBCASE("delta at the impurity") {
		DensityProfile p;
		p.half_length = 3;
		p.particles   = 1;
		p.rho         = {0, 0, 0, 1, 0, 0, 0};
		CHECK(width(p) == 0.0);
	}
	SUBCASE("two-point distribution") {
		DensityProfile p;
		p.half_length = 3;
		p.particles   = 4;
		p.rho         = {0, 0, 0, 0, 0.5, 0.5, 0};
		CHECK(width(p) == doctest::Approx(0.5).epsilon(1e-14));
	}
	SUBCASE("uniform over 11 sites") {
		CHECK(width(uniform_profile(5)) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-13));
	}
	SUBCASE("translation covariance") {
		DensityProfile a, b;
		a.half_length = b.half_length = 5;
		a.particles = b.particles = 1;
		a.rho.assign(11, 0.0);
		b.rho.assign(11, 0.0);
		a.rho[3] = 0.25;
		a.rho[4] = 0.75;
		b.rho[4] = 0.25;
		b.rho[5] = 0.75;
		CHECK(width(a) == doctest::Approx(width(b)).epsilon(1e-13));
	}
	SUBCASE("corrupted profile throws") {
		DensityProfile p;
		p.half_length = 1;
		p.particles   = 1;
		p.rho         = {-0.5, 2.0, -0.5};  // variance is strongly negative
		CHECK_THROWS_AS(width(p), error);
	}
}

TEST_CASE("microcanonical average") {
	Spectrum s;
	s.complete  = true;
	s.values    = {-2.0, -1.0, 0.0, 1.0, 2.0};
	s.vectors   = Eigen::MatrixXd::Identity(5, 5);
	s.residuals = {0, 0, 0, 0, 0};
	const std::vector<double> eev{10.0, 20.0, 30.0, 40.0, 50.0};
	SUBCASE("single state") { CHECK(microcanonical_average(s, eev, -2.0, 0.5) == 10.0); }
	SUBCASE("constant values") {
		const std::vector<double> c(5, 7.5);
		CHECK(microcanonical_average(s, c, 0.0, 10.0) == doctest::Approx(7.5));
	}
	SUBCASE("window mean") {
		CHECK(microcanonical_average(s, eev, 0.0, 1.0) == doctest::Approx(30.0));
	}
	SUBCASE("empty window throws") {
		CHECK_THROWS_AS(microcanonical_average(s, eev, 10.0, 0.5), error);
	}
	SUBCASE("incomplete spectrum rejected") {
		Spectrum t = s;
		t.complete = false;
		CHECK_THROWS_AS(microcanonical_average(t, eev, 0.0, 1.0), error);
	}
}

TEST_CASE("overlap and energy expectation") {
	SectorBasis       basis({5, Boundary::Periodic}, 4);
	const ModelParams p{1.0, -20.0, -10.0};
	const SparseOperator  h    = build_full_hamiltonian(p, basis);
	const Eigen::VectorXd psi0 = build_initial_state(InitialState::N4_1122, basis);
	CHECK(overlap(psi0, psi0) == doctest::Approx(1.0).epsilon(1e-14));
	CHECK(energy_expectation(h, psi0) == doctest::Approx(2 * p.U).epsilon(1e-13));

	SectorBasis six({5, Boundary::Periodic}, 6);
	const ModelParams p6{1.0, -15.0, -20.0};
	const SparseOperator h6 = build_full_hamiltonian(p6, six);
	CHECK(energy_expectation(h6, build_initial_state(InitialState::N6_1111_22, six))
	      == doctest::Approx(7 * p6.U).epsilon(1e-13));
	CHECK(energy_expectation(h6, build_initial_state(InitialState::N6_112233, six))
	      == doctest::Approx(3 * p6.U).epsilon(1e-13));
}

TEST_CASE("eigenstate expectations against direct evaluation") {
	SectorBasis          basis({3, Boundary::Periodic}, 2);
	const SparseOperator h    = build_full_hamiltonian({1.0, -6.0, -2.5}, basis);
	const Spectrum       spec = eig_dense(h);
	const auto           diag = number_diagonal(1, basis);
	const auto           eev  = eigenstate_expectations(spec, diag);
	for(std::size_t k = 0; k < spec.size(); ++k) {
		const Eigen::VectorXd v = spec.vectors.col(static_cast<Eigen::Index>(k));
		const DensityProfile  d = density(v, basis);
		CHECK(eev[k] == doctest::Approx(d.at_site(1) * basis.particles()).epsilon(1e-12));
	}
}
