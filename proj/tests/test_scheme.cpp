#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "liesplit/scheme.hpp"
#include "liesplit/scheme_io.hpp"

using namespace liesplit;

namespace {

using PG = Polynomial<GaussRat>;

Bracket X0() { return Bracket::leaf(0); }
Bracket X1() { return Bracket::leaf(1); }

Scheme strang()
{
	Scheme s;
	s.stages = {{rat_make(1, 2), X1(), GaussRat(1)}, {rat_make(1, 2), X1(), GaussRat(0)}};
	return s;
}

Scheme trotter()
{
	Scheme s;
	s.stages = {{Rat(1), X1(), GaussRat(1)}};
	return s;
}

// e^{T/4 f0} e^{2T/3 f1} e^{3T/4 f0} e^{T/3 f1}, exact on the quadratic system
Scheme exact_quad()
{
	Scheme s;
	s.stages = {{rat_make(1, 4), X1(), GaussRat(rat_make(2, 3))},
	            {rat_make(3, 4), X1(), GaussRat(rat_make(1, 3))}};
	return s;
}

PG drift_exp(int n, const Rat &d)
{
	PG x0 = PG::generator(n, 0);
	x0.scale(GaussRat(d));
	return exp_truncated(x0);
}

PG jump_exp(int n, const Bracket &b, const Rat &a)
{
	PG e = evaluate_as<GaussRat>(b, n);
	e.scale(GaussRat(a));
	return exp_truncated(e);
}

DiracControl random_control(std::mt19937 &rng, int impulses, bool with_w1)
{
	std::uniform_int_distribution<int> num(-2, 2), den(1, 3), tden(5, 9), pick(0, 3);
	DiracControl c;
	c.horizon = 1;
	std::vector<Rat> times;
	while (static_cast<int>(times.size()) < impulses)
	{
		Rat t = rat_make(pick(rng) + 1, tden(rng));
		bool dup = false;
		for (auto &u : times)
			dup = dup || u == t;
		if (!dup && t < Rat(1))
			times.push_back(t);
	}
	std::sort(times.begin(), times.end());
	for (auto &t : times)
	{
		Bracket ch = with_w1 && pick(rng) == 0 ? Bracket::W(1) : X1();
		int n = num(rng);
		if (n == 0)
			n = 1;
		c.impulses.push_back({t, ch, GaussRat(rat_make(n, den(rng)))});
	}
	return c;
}

} // namespace

TEST_CASE("scheme to control")
{
	DiracControl cs = scheme_to_control(strang());
	CHECK(cs.horizon == Rat(1));
	REQUIRE(cs.impulses.size() == 1);
	CHECK(cs.impulses[0].time == rat_make(1, 2));
	CHECK(cs.impulses[0].amplitude == GaussRat(1));

	// the exact-quadratic scheme reads right-to-left: (1/3) delta_0 + (2/3) delta_{3/4}
	DiracControl c9 = scheme_to_control(exact_quad());
	REQUIRE(c9.impulses.size() == 2);
	CHECK(c9.impulses[0].time == Rat(0));
	CHECK(c9.impulses[0].amplitude == GaussRat(rat_make(1, 3)));
	CHECK(c9.impulses[1].time == rat_make(3, 4));
	CHECK(c9.impulses[1].amplitude == GaussRat(rat_make(2, 3)));

	DiracControl ct = scheme_to_control(trotter());
	REQUIRE(ct.impulses.size() == 1);
	CHECK(ct.impulses[0].time == Rat(0));

	// zero-amplitude stages are dropped
	Scheme padded = strang();
	padded.stages.push_back({Rat(0), X1(), GaussRat(0)});
	CHECK(scheme_to_control(padded).impulses.size() == 1);

	Scheme negative;
	negative.alpha_domain = AlphaDomain::Real;
	negative.stages = {{Rat(-1), X1(), GaussRat(1)}, {Rat(2), X1(), GaussRat(1)}};
	CHECK_THROWS_AS(scheme_to_control(negative), std::domain_error);

	// round trip through control_to_scheme reproduces the stages
	Scheme back = control_to_scheme(c9);
	REQUIRE(back.stages.size() == 2);
	CHECK(back.stages[0].alpha == rat_make(1, 4));
	CHECK(back.stages[0].beta == GaussRat(rat_make(2, 3)));
	CHECK(back.stages[1].alpha == rat_make(3, 4));
	Scheme back_strang = control_to_scheme(cs);
	REQUIRE(back_strang.stages.size() == 2);
	CHECK(back_strang.stages[1].beta == GaussRat(0));
}

TEST_CASE("formal series reproduces the worked five-factor product")
{
	// u1 = 7 delta_3 on X1, u2 = 8 delta_5 on W1, horizon 6:
	// exp(X0) exp(8 W1) exp(2 X0) exp(7 X1) exp(3 X0)
	DiracControl c;
	c.horizon = 6;
	c.impulses = {{Rat(3), X1(), GaussRat(7)}, {Rat(5), Bracket::W(1), GaussRat(8)}};
	int n = 4;
	PG want = drift_exp(n, Rat(1));
	want = mul_truncated(want, jump_exp(n, Bracket::W(1), Rat(8)));
	want = mul_truncated(want, drift_exp(n, Rat(2)));
	want = mul_truncated(want, jump_exp(n, X1(), Rat(7)));
	want = mul_truncated(want, drift_exp(n, Rat(3)));
	CHECK(formal_series(c, n) == want);
}

TEST_CASE("formal series basics")
{
	DiracControl empty;
	empty.horizon = 1;
	CHECK(formal_series(empty, 3) == drift_exp(3, Rat(1)));

	// channel degree beyond the truncation
	DiracControl w1c;
	w1c.horizon = 1;
	w1c.impulses = {{rat_make(1, 2), Bracket::W(1), GaussRat(1)}};
	CHECK_THROWS_AS(formal_series(w1c, 2), std::domain_error);

	// scheme series = verbatim written product = series of the control
	Scheme s = exact_quad();
	CHECK(scheme_series(s, 4) == formal_series(scheme_to_control(s), 4));
}

TEST_CASE("composition multiplies series")
{
	std::mt19937 rng(17);
	for (int trial = 0; trial < 4; ++trial)
	{
		DiracControl u = random_control(rng, 2, false);
		DiracControl v = random_control(rng, 2, false);
		DiracControl uv = compose(u, v); // v first in time
		CHECK(uv.horizon == Rat(2));
		CHECK(formal_series(uv, 4) ==
		      mul_truncated(formal_series(u, 4), formal_series(v, 4)));
	}
}

TEST_CASE("zeta coordinates")
{
	const HallBasis &basis = bstar_basis(5);

	// pure drift+jump target: log(exp(X0+X1)) has only the generators
	PG target(3);
	target.add_term(Word::single(0), GaussRat(1));
	target.add_term(Word::single(1), GaussRat(1));
	auto ref = reference_zeta(basis, 3);
	CHECK(ref.at(X0()) == GaussRat(1));
	CHECK(ref.at(X1()) == GaussRat(1));
	CHECK(ref.at(Bracket::M(1)) == GaussRat(0));

	// exactquad: zeta_{X1}=1, zeta_{M1}=0, zeta_{W1}=0 and zeta_{M2} = 1/48
	// (= 3/16 - 1/6 after the diffeo corrections; frozen from this exact
	// computation)
	auto z = zeta_coordinates(scheme_to_control(exact_quad()), basis, 3);
	CHECK(z.at(X0()) == GaussRat(1));
	CHECK(z.at(X1()) == GaussRat(1));
	CHECK(z.at(Bracket::M(1)) == GaussRat(0));
	CHECK(z.at(Bracket::W(1)) == GaussRat(0));
	CHECK(z.at(Bracket::M(2)) == GaussRat(rat_make(1, 48)));

	// Strang matches the reference through degree 2, not through 3
	auto zs = zeta_coordinates(scheme_to_control(strang()), basis, 3);
	CHECK(zs.at(X0()) == GaussRat(1));
	CHECK(zs.at(X1()) == GaussRat(1));
	CHECK(zs.at(Bracket::M(1)) == GaussRat(0));
	bool degree3_defect = !is_zero(zs.at(Bracket::M(2))) || !is_zero(zs.at(Bracket::W(1)));
	CHECK(degree3_defect);
}

TEST_CASE("xi coordinates reproduce the worked values")
{
	const HallBasis &basis = bstar_basis(5);
	DiracControl c = scheme_to_control(exact_quad());
	auto xi = xi_coordinates(c, basis, 3);
	CHECK(xi.kind == CoordinateKind::SecondKind);
	// U(1) = 1, int U = 1/2, (1/2) int U^2 = 1/6, int int U = 3/16
	CHECK(xi.at(X1()) == GaussRat(1));
	CHECK(xi.at(Bracket::M(1)) == GaussRat(rat_make(1, 2)));
	CHECK(xi.at(Bracket::W(1)) == GaussRat(rat_make(1, 6)));
	CHECK(xi.at(Bracket::M(2)) == GaussRat(rat_make(3, 16)));
	CHECK(xi.at(X0()) == GaussRat(1));
}

TEST_CASE("descending product formula")
{
	std::mt19937 rng(29);
	const HallBasis &basis = bstar_basis(5);
	for (int trial = 0; trial < 3; ++trial)
	{
		DiracControl c = random_control(rng, 3, true);
		auto xi = xi_coordinates(c, basis, 5);
		CHECK(descending_product(xi) == formal_series(c, 5));
	}
}

TEST_CASE("xi to zeta matches the degree-3 closed forms")
{
	std::mt19937 rng(41);
	const HallBasis &basis = bstar_basis(5);
	for (int trial = 0; trial < 6; ++trial)
	{
		DiracControl c = random_control(rng, 3, false);
		auto xi = xi_coordinates(c, basis, 3);
		auto zeta = zeta_coordinates(c, basis, 3);

		GaussRat xX0 = xi.at(X0()), xX1 = xi.at(X1());
		GaussRat xM1 = xi.at(Bracket::M(1)), xM2 = xi.at(Bracket::M(2));
		GaussRat xW1 = xi.at(Bracket::W(1));
		GaussRat half(rat_make(1, 2)), twelfth(rat_make(1, 12));

		CHECK(zeta.at(X0()) == xX0);
		CHECK(zeta.at(X1()) == xX1);
		CHECK(zeta.at(Bracket::M(1)) == xM1 - half * xX0 * xX1);
		CHECK(zeta.at(Bracket::M(2)) == xM2 - half * xX0 * xM1 + twelfth * xX0 * xX0 * xX1);
		CHECK(zeta.at(Bracket::W(1)) == xW1 - half * xM1 * xX1 + twelfth * xX1 * xX1 * xX0);

		// the triangular maps are mutually inverse
		auto z2 = xi_to_zeta(xi);
		for (size_t i = 0; i < z2.values.size(); ++i)
			CHECK(z2.values[i] == zeta.values[i]);
		auto xi2 = zeta_to_xi(zeta);
		for (size_t i = 0; i < xi2.values.size(); ++i)
			CHECK(xi2.values[i] == xi.values[i]);
	}
}

TEST_CASE("round trip at degree 5 with commutator channels")
{
	std::mt19937 rng(43);
	const HallBasis &basis = bstar_basis(5);
	for (int trial = 0; trial < 3; ++trial)
	{
		DiracControl c = random_control(rng, 3, true);
		auto xi = xi_coordinates(c, basis, 5);
		auto zeta = zeta_coordinates(c, basis, 5);
		auto z2 = xi_to_zeta(xi);
		for (size_t i = 0; i < z2.values.size(); ++i)
			CHECK(z2.values[i] == zeta.values[i]);
		auto xi2 = zeta_to_xi(zeta);
		for (size_t i = 0; i < xi2.values.size(); ++i)
			CHECK(xi2.values[i] == xi.values[i]);
	}
}

TEST_CASE("order of classical schemes")
{
	OrderResult r1 = order_of_scheme(trotter(), 4);
	CHECK(!r1.at_least);
	CHECK(r1.order == 1);

	OrderResult r2 = order_of_scheme(strang(), 4);
	CHECK(r2.order == 2);

	OrderResult r9 = order_of_scheme(exact_quad(), 4);
	CHECK(r9.order == 2);
	CHECK(r9.defect_degree == 3);
	REQUIRE(r9.defect.size() == 1); // only the M2 coordinate fails
	CHECK(r9.defect[0].first == Bracket::M(2));
	CHECK(r9.defect[0].second == GaussRat(rat_make(1, 48)));

	// total-time normalization: doubling all alphas and the amplitudes
	// appropriately leaves the order unchanged
	Scheme doubled = strang();
	for (auto &st : doubled.stages)
	{
		st.alpha *= 2;
		st.beta = st.beta * GaussRat(2);
	}
	CHECK(order_of_scheme(doubled, 4).order == 2);

	Scheme inexact = strang();
	inexact.exact = false;
	CHECK_THROWS_AS(order_of_scheme(inexact, 4), std::domain_error);
}

TEST_CASE("order checker is basis independent")
{
	// direct monomial comparison against exp(X0+X1)
	Scheme s = strang();
	int probe = 3;
	PG target(probe);
	target.add_term(Word::single(0), GaussRat(1));
	target.add_term(Word::single(1), GaussRat(1));
	PG direct = scheme_series(s, probe) - exp_truncated(target);
	int first_defect = 0;
	for (int n = 1; n <= probe && !first_defect; ++n)
		if (!grade(direct, n).is_zero())
			first_defect = n;
	CHECK(first_defect == 3);

	// via zeta in the lyndon basis
	HallBasis lyndon = HallBasis::generate(2, probe, HallPolicy::Lyndon);
	auto z = zeta_coordinates(scheme_to_control(s), lyndon, probe);
	int defect = 0;
	for (size_t i = 0; i < z.values.size() && !defect; ++i)
	{
		const Bracket &b = lyndon.elements()[i];
		GaussRat want = b.is_leaf() ? GaussRat(1) : GaussRat(0);
		if (!(z.values[i] == want))
			defect = b.length();
	}
	CHECK(defect == 3);
}

TEST_CASE("homogeneity")
{
	const HallBasis &basis = bstar_basis(4);
	DiracControl c = scheme_to_control(strang());
	CHECK(homogeneity_check(c, Rat(1), {Rat(1), Rat(1)}, basis, 4));
	CHECK(homogeneity_check(c, Rat(2), {Rat(1), Rat(1)}, basis, 4));
	CHECK(homogeneity_check(c, rat_make(1, 3), {Rat(1), Rat(3)}, basis, 4));
	CHECK(homogeneity_check(c, Rat(2), {rat_make(5, 7), Rat(-2)}, basis, 4));
	CHECK_THROWS_AS(homogeneity_check(c, Rat(0), {Rat(1), Rat(1)}, basis, 4),
	                std::domain_error);
}

TEST_CASE("domain checks")
{
	Scheme s = strang();
	CHECK_NOTHROW(s.check_domains());

	Scheme neg = strang();
	neg.stages[0].alpha = rat_make(-1, 2);
	CHECK_THROWS_AS(neg.check_domains(), std::domain_error);
	neg.alpha_domain = AlphaDomain::Real;
	CHECK_NOTHROW(neg.check_domains());

	// two distinct flows need positive drift between them
	Scheme tight;
	tight.stages = {{rat_make(1, 2), X1(), GaussRat(1)},
	                {Rat(0), Bracket::W(1), GaussRat(1)},
	                {rat_make(1, 2), X1(), GaussRat(0)}};
	CHECK_THROWS_AS(tight.check_domains(), std::domain_error);
	tight.stages[1].alpha = rat_make(1, 4);
	CHECK_NOTHROW(tight.check_domains());

	Scheme cplx = strang();
	cplx.stages[0].beta = gauss_parse("1+i");
	CHECK_THROWS_AS(cplx.check_domains(), std::domain_error);
	cplx.beta_domain = BetaDomain::Complex;
	CHECK_NOTHROW(cplx.check_domains());
}

TEST_CASE("scheme file round trip")
{
	Scheme s = exact_quad();
	s.beta_domain = BetaDomain::Positive;
	std::string text = format_scheme(s);
	std::istringstream in(text);
	Scheme back = parse_scheme(in);
	CHECK(back.exact);
	CHECK(back.beta_domain == BetaDomain::Positive);
	REQUIRE(back.stages.size() == 2);
	CHECK(back.stages[0].alpha == rat_make(1, 4));
	CHECK(back.stages[0].beta == GaussRat(rat_make(2, 3)));
	CHECK(back.stages[1].channel == X1());

	// complex coefficients
	Scheme cs;
	cs.beta_domain = BetaDomain::Complex;
	cs.stages = {{rat_make(1, 2), X1(), gauss_parse("1/2+1/6i")},
	             {rat_make(1, 2), Bracket::W(1), gauss_parse("-i")}};
	std::istringstream cin2(format_scheme(cs));
	Scheme cback = parse_scheme(cin2);
	CHECK(cback.stages[0].beta == gauss_parse("1/2+1/6i"));
	CHECK(cback.stages[1].beta == gauss_parse("-i"));
	CHECK(cback.stages[1].channel == Bracket::W(1));

	// float coefficients round-trip losslessly and are flagged inexact
	Scheme fs;
	fs.exact = false;
	fs.alpha_domain = AlphaDomain::Real;
	fs.stages = {{rat_from_double(0.675603595979828817), X1(),
	              GaussRat(rat_from_double(1.351207191959657634))}};
	std::istringstream fin(format_scheme(fs));
	Scheme fback = parse_scheme(fin);
	CHECK(!fback.exact);
	CHECK(fback.stages[0].alpha == fs.stages[0].alpha);
	CHECK(fback.stages[0].beta == fs.stages[0].beta);

	std::istringstream bad("scheme\nstage 1/2 X1\n");
	CHECK_THROWS_AS(parse_scheme(bad), ParseError);
	std::istringstream bad2("scheme\nstage 1/0 X1 1\n");
	CHECK_THROWS_AS(parse_scheme(bad2), ParseError);
}

TEST_CASE("control file round trip")
{
	DiracControl c = scheme_to_control(exact_quad());
	std::istringstream in(format_control(c));
	DiracControl back = parse_control(in);
	CHECK(back.horizon == Rat(1));
	REQUIRE(back.impulses.size() == 2);
	CHECK(back.impulses[1].time == rat_make(3, 4));

	std::istringstream in2(format_scheme(exact_quad()));
	DiracControl viaScheme = parse_control_or_scheme(in2);
	CHECK(viaScheme.impulses.size() == 2);
}

TEST_CASE("regularized pulses converge to the impulse coordinates")
{
	// Dirac masses realized as width-eps constant pulses, exactly; the
	// first- and second-kind coordinates converge to the impulse values
	// as eps -> 0, which pins the limit convention at jump times.
	DiracControl c = scheme_to_control(exact_quad());
	const HallBasis &basis = bstar_basis(5);
	int n = 3;
	auto zeta = zeta_coordinates(c, basis, n);
	auto xi = zeta_to_xi(zeta);

	auto coords_at = [&](const Rat &eps) {
		Polynomial<GaussRat> p = regularized_series(c, eps, n);
		auto z = lie_coordinates(log_truncated(p), basis);
		CoordinateVector v{&basis, n, CoordinateKind::FirstKind, z.values};
		return v;
	};

	auto max_defect = [&](const CoordinateVector &a, const CoordinateVector &b) {
		Rat worst(0);
		for (size_t i = 0; i < a.values.size(); ++i)
		{
			GaussRat d = a.values[i] - b.values[i];
			Rat m = abs(d.re) + abs(d.im);
			if (m > worst)
				worst = m;
		}
		return worst;
	};

	CoordinateVector coarse = coords_at(rat_make(1, 8));
	CoordinateVector fine = coords_at(rat_make(1, 32));
	Rat d_coarse = max_defect(coarse, zeta);
	Rat d_fine = max_defect(fine, zeta);
	CHECK(sgn(d_coarse) > 0); // the pulse widths genuinely perturb
	CHECK(d_fine * 2 < d_coarse); // and the perturbation vanishes with eps

	// second kind through the same triangular solve
	Rat x_coarse = max_defect(zeta_to_xi(coarse), xi);
	Rat x_fine = max_defect(zeta_to_xi(fine), xi);
	CHECK(x_fine * 2 < x_coarse);

	CHECK_THROWS_AS(regularized_series(c, rat_make(1, 2), n), std::domain_error);
	CHECK_THROWS_AS(regularized_series(c, Rat(0), n), std::domain_error);
}

TEST_CASE("group-like property of formal series")
{
	std::mt19937 rng(53);
	const HallBasis &basis = bstar_basis(5);
	for (int trial = 0; trial < 3; ++trial)
	{
		DiracControl c = random_control(rng, 3, true);
		auto d = lie_decompose(log_truncated(formal_series(c, 5)), basis);
		CHECK(d.is_lie());
	}
}
