#include <benchmark/benchmark.h>

#include "biclab/effective.hpp"
#include "biclab/quench.hpp"

using namespace biclab;

namespace {

const ModelParams kParams{1.0, -20.0, -10.0};

void BM_basis_enumeration(benchmark::State& state) {
	const int L = static_cast<int>(state.range(0));
	for(auto _ : state) {
		SectorBasis basis({L, Boundary::Periodic}, 4);
		benchmark::DoNotOptimize(basis.dim());
	}
}
BENCHMARK(BM_basis_enumeration)->Arg(5)->Arg(11)->Arg(17);

void BM_ranking(benchmark::State& state) {
	SectorBasis basis({11, Boundary::Periodic}, 4);
	std::size_t r = 0;
	for(auto _ : state) {
		benchmark::DoNotOptimize(basis.rank_of(basis.state(r)));
		r = (r + 1) % basis.dim();
	}
}
BENCHMARK(BM_ranking);

void BM_hamiltonian_assembly(benchmark::State& state) {
	const int   L = static_cast<int>(state.range(0));
	SectorBasis basis({L, Boundary::Periodic}, 4);
	for(auto _ : state) {
		benchmark::DoNotOptimize(build_full_hamiltonian(kParams, basis).stored_entries());
	}
	state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(basis.dim()));
}
BENCHMARK(BM_hamiltonian_assembly)->Arg(5)->Arg(11);

void BM_parity_assembly(benchmark::State& state) {
	const int L     = static_cast<int>(state.range(0));
	auto      basis = std::make_shared<SectorBasis>(LatticeSpec{L, Boundary::Periodic}, 4);
	ParityBasis even(basis, Parity::Even);
	for(auto _ : state) {
		benchmark::DoNotOptimize(build_full_hamiltonian(kParams, even).stored_entries());
	}
}
BENCHMARK(BM_parity_assembly)->Arg(5)->Arg(11);

void BM_sparse_matvec(benchmark::State& state) {
	const int            L = static_cast<int>(state.range(0));
	SectorBasis          basis({L, Boundary::Periodic}, 4);
	const SparseOperator h = build_full_hamiltonian(kParams, basis);
	Eigen::VectorXd      x = Eigen::VectorXd::Random(static_cast<Eigen::Index>(h.dim()));
	Eigen::VectorXd      y(x.size());
	for(auto _ : state) {
		h.apply(x.data(), y.data());
		benchmark::DoNotOptimize(y.data());
		std::swap(x, y);
	}
	state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(h.stored_entries()));
}
BENCHMARK(BM_sparse_matvec)->Arg(11)->Arg(17);

void BM_dense_eig(benchmark::State& state) {
	SectorBasis          basis({5, Boundary::Periodic}, 4);
	const SparseOperator h = build_full_hamiltonian(kParams, basis);
	for(auto _ : state) {
		benchmark::DoNotOptimize(eig_dense(h).values.front());
	}
}
BENCHMARK(BM_dense_eig)->Unit(benchmark::kMillisecond);

void BM_window_solve(benchmark::State& state) {
	auto        basis = std::make_shared<SectorBasis>(LatticeSpec{11, Boundary::Periodic}, 4);
	ParityBasis even(basis, Parity::Even);
	const SparseOperator h    = build_full_hamiltonian(kParams, even);
	const double         e_b1 = bound_state_energy(Branch::B1, kParams).energy;
	const EffectiveBasis eb(11);
	WindowOptions        opts;
	opts.seed = even.project(
	    eb.embed(assemble_bound_state(Branch::B1, +1, kParams, eb), ClusterSector::APair, *basis));
	for(auto _ : state) {
		benchmark::DoNotOptimize(eig_window(h, e_b1, 1, opts).values.front());
	}
}
BENCHMARK(BM_window_solve)->Unit(benchmark::kMillisecond);

void BM_evolve_step(benchmark::State& state) {
	SectorBasis          basis({5, Boundary::Periodic}, 4);
	const SparseOperator h = build_full_hamiltonian(kParams, basis);
	Eigen::VectorXcd     psi
	    = build_initial_state(InitialState::N4_1122, basis).cast<std::complex<double>>();
	for(auto _ : state) {
		psi = evolve(h, psi, 0.5, 1e-9);
		benchmark::DoNotOptimize(psi.data());
	}
}
BENCHMARK(BM_evolve_step)->Unit(benchmark::kMillisecond);

void BM_second_order_oracle(benchmark::State& state) {
	const int            L = static_cast<int>(state.range(0));
	const SectorBasis    fock({L + 1, Boundary::Open}, 4);
	const EffectiveBasis configs(L);
	for(auto _ : state) {
		benchmark::DoNotOptimize(
		    numeric_second_order(ClusterSector::APair, ClusterSector::APair, kParams, fock, configs)
		        .norm());
	}
}
BENCHMARK(BM_second_order_oracle)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
