#include <benchmark/benchmark.h>

#include "liesplit/dense.hpp"
#include "liesplit/obstruction.hpp"
#include "liesplit/scheme.hpp"

using namespace liesplit;

namespace {

Scheme strang()
{
	Scheme s;
	s.stages = {{rat_make(1, 2), Bracket::leaf(1), GaussRat(1)},
	            {rat_make(1, 2), Bracket::leaf(1), GaussRat(0)}};
	return s;
}

void BM_mul_truncated(benchmark::State &state)
{
	int n = static_cast<int>(state.range(0));
	Polynomial<Rat> a = exp_truncated(Polynomial<Rat>::generator(n, 0));
	Polynomial<Rat> b = exp_truncated(Polynomial<Rat>::generator(n, 1));
	for (auto _ : state)
		benchmark::DoNotOptimize(mul_truncated(a, b));
}
BENCHMARK(BM_mul_truncated)->Arg(4)->Arg(6)->Arg(8);

void BM_log_of_product(benchmark::State &state)
{
	int n = static_cast<int>(state.range(0));
	Polynomial<Rat> p = mul_truncated(exp_truncated(Polynomial<Rat>::generator(n, 0)),
	                                  exp_truncated(Polynomial<Rat>::generator(n, 1)));
	for (auto _ : state)
		benchmark::DoNotOptimize(log_truncated(p));
}
BENCHMARK(BM_log_of_product)->Arg(4)->Arg(6)->Arg(8);

void BM_hall_generate(benchmark::State &state)
{
	int n = static_cast<int>(state.range(0));
	for (auto _ : state)
		benchmark::DoNotOptimize(HallBasis::generate(2, n, HallPolicy::BStar));
}
BENCHMARK(BM_hall_generate)->Arg(5)->Arg(8);

void BM_zeta_coordinates(benchmark::State &state)
{
	int n = static_cast<int>(state.range(0));
	const HallBasis &basis = bstar_basis(std::max(n, 5));
	DiracControl c = scheme_to_control(strang());
	for (auto _ : state)
		benchmark::DoNotOptimize(zeta_coordinates(c, basis, n));
}
BENCHMARK(BM_zeta_coordinates)->Arg(3)->Arg(5);

void BM_dense_series_order_residual(benchmark::State &state)
{
	int n = static_cast<int>(state.range(0));
	DenseSeries<CDual> x0(n), x1(n);
	x0.at(1, 0) = CDual(0.5);
	x1.at(1, 1) = CDual(1.0);
	for (auto _ : state)
	{
		auto p = dense_mul(dense_exp(x0), dense_exp(x1));
		p = dense_mul(p, dense_exp(x0));
		benchmark::DoNotOptimize(dense_log(p));
	}
}
BENCHMARK(BM_dense_series_order_residual)->Arg(4)->Arg(6)->Arg(8);

void BM_w1_obstruction(benchmark::State &state)
{
	DiracControl c;
	c.horizon = 1;
	c.impulses = {{Rat(0), Bracket::leaf(1), GaussRat(rat_make(1, 3))},
	              {rat_make(3, 4), Bracket::leaf(1), GaussRat(rat_make(2, 3))}};
	for (auto _ : state)
		benchmark::DoNotOptimize(w1_obstruction(c));
}
BENCHMARK(BM_w1_obstruction);

} // namespace

BENCHMARK_MAIN();
