#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "biclab/model.hpp"
#include "biclab/solve.hpp"

using namespace biclab;

namespace {
std::shared_ptr<SectorBasis> make_basis(int L, int n, Boundary b = Boundary::Periodic) {
	return std::make_shared<SectorBasis>(LatticeSpec{L, b}, n);
}
}  // namespace

TEST_CASE("three-site ring, single particle") {
	auto basis = make_basis(1, 1);
	SUBCASE("free ring spectrum") {
		const SparseOperator h = build_full_hamiltonian({1.0, 0.0, 0.0}, *basis);
		const Spectrum       s = eig_dense(h);
		CHECK(s.values[0] == doctest::Approx(-2.0).epsilon(1e-12));
		CHECK(s.values[1] == doctest::Approx(1.0).epsilon(1e-12));
		CHECK(s.values[2] == doctest::Approx(1.0).epsilon(1e-12));
	}
	SUBCASE("matrix transcription with impurity") {
		const SparseOperator  h = build_full_hamiltonian({1.0, 0.0, -10.0}, *basis);
		const Eigen::MatrixXd m = h.to_dense();
		Eigen::MatrixXd       expected(3, 3);
		expected << 0, -1, -1, -1, -10, -1, -1, -1, 0;
		CHECK((m - expected).cwiseAbs().maxCoeff() == 0.0);
	}
}

TEST_CASE("H0 diagonal entries") {
	auto                 basis = make_basis(5, 4);
	const ModelParams    p{1.0, -20.0, -10.0};
	const SparseOperator h0 = build_h0(p, *basis);
	// two pair clusters away from the impurity: U per pair
	const std::size_t r1 = basis->rank_of(basis->fock_from_sites({{1, 2}, {2, 2}}));
	CHECK(h0.coeff(r1, r1) == doctest::Approx(2 * p.U).epsilon(1e-15));
	// two on the impurity plus singles at -1, +1: U + 2V
	const std::size_t r2 = basis->rank_of(basis->fock_from_sites({{0, 2}, {-1, 1}, {1, 1}}));
	CHECK(h0.coeff(r2, r2) == doctest::Approx(p.U + 2 * p.V).epsilon(1e-15));
}

TEST_CASE("H = H0 + t T decomposition") {
	auto          basis = make_basis(3, 3);
	std::mt19937  rng(7);
	std::uniform_real_distribution<double> d(-20.0, 20.0);
	for(int trial = 0; trial < 5; ++trial) {
		const ModelParams    p{std::abs(d(rng)) + 0.1, d(rng), d(rng)};
		const SparseOperator full = build_full_hamiltonian(p, *basis);
		const SparseOperator sum  = build_h0(p, *basis).add_scaled(build_kinetic(*basis), p.t);
		CHECK((full.to_dense() - sum.to_dense()).cwiseAbs().maxCoeff() < 1e-14);
	}
}

TEST_CASE("number operators sum to N") {
	auto            basis = make_basis(5, 4);
	Eigen::MatrixXd total = Eigen::MatrixXd::Zero(1001, 1001);
	for(int x = -5; x <= 5; ++x) total += build_number_operator(x, *basis).to_dense();
	CHECK((total - 4.0 * Eigen::MatrixXd::Identity(1001, 1001)).cwiseAbs().maxCoeff() < 1e-14);
	CHECK_THROWS_AS(build_number_operator(6, *basis), error);
}

TEST_CASE("parity operator") {
	auto                 basis = make_basis(5, 4);
	const SparseOperator p     = build_parity_matrix(*basis);
	const ModelParams    mp{1.0, -20.0, -10.0};
	const SparseOperator h  = build_full_hamiltonian(mp, *basis);
	const Eigen::MatrixXd pd = p.to_dense(), hd = h.to_dense();
	CHECK((pd * pd - Eigen::MatrixXd::Identity(1001, 1001)).cwiseAbs().maxCoeff() == 0.0);
	CHECK((pd * hd * pd - hd).cwiseAbs().maxCoeff() < 1e-12 * h.max_abs());
}

TEST_CASE("assembled operators are exactly symmetric") {
	auto                  basis = make_basis(3, 3);
	const SparseOperator  h = build_full_hamiltonian({1.0, -7.3, 2.1}, *basis);
	const Eigen::MatrixXd m = h.to_dense();
	CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("parity blocks reproduce the full spectrum") {
	for(int n = 1; n <= 3; ++n) {
		auto                 basis = make_basis(3, n);
		const ModelParams    p{1.0, -4.5, -2.0};
		const Spectrum       full = eig_dense(build_full_hamiltonian(p, *basis));
		std::vector<double>  merged;
		for(Parity par : {Parity::Even, Parity::Odd}) {
			ParityBasis    pb(basis, par);
			const Spectrum s = eig_dense(build_full_hamiltonian(p, pb));
			merged.insert(merged.end(), s.values.begin(), s.values.end());
		}
		std::sort(merged.begin(), merged.end());
		REQUIRE(merged.size() == full.size());
		for(std::size_t k = 0; k < merged.size(); ++k)
			CHECK(std::abs(merged[k] - full.values[k]) < 1e-10);
	}
}

TEST_CASE("boundary flag controls the wrap bond") {
	for(auto [boundary, expected] : {std::pair{Boundary::Periodic, -1.0}, {Boundary::Open, 0.0}}) {
		auto basis = make_basis(2, 1, boundary);
		const SparseOperator h  = build_full_hamiltonian({1.0, 0.0, 0.0}, *basis);
		const std::size_t    rl = basis->rank_of(basis->fock_from_sites({{2, 1}}));
		const std::size_t    rr = basis->rank_of(basis->fock_from_sites({{-2, 1}}));
		CHECK(h.coeff(rl, rr) == expected);
	}
}

TEST_CASE("coordinate dump format") {
	auto basis = make_basis(1, 1);
	const SparseOperator h = build_full_hamiltonian({1.0, 0.0, -10.0}, *basis);
	std::ostringstream   os;
	h.write_coordinate_file(os);
	std::istringstream in(os.str());
	std::size_t        row, col;
	double             value;
	std::size_t        lines = 0;
	while(in >> row >> col >> value) {
		CHECK(row < 3);
		CHECK(col < 3);
		CHECK(std::abs(h.coeff(row, col) - value) == 0.0);
		++lines;
	}
	CHECK(lines == h.stored_entries());
}
