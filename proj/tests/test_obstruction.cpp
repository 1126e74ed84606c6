#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "liesplit/obstruction.hpp"

using namespace liesplit;

namespace {

Bracket X1() { return Bracket::leaf(1); }

DiracControl exact_quad_control()
{
	DiracControl c;
	c.horizon = 1;
	c.impulses = {{Rat(0), X1(), GaussRat(rat_make(1, 3))},
	              {rat_make(3, 4), X1(), GaussRat(rat_make(2, 3))}};
	return c;
}

// Random X1-channel control on [0,1] whose last two amplitudes are solved
// so that U(1) = 1 and int U = 1/2 (the W1 matching hypotheses).
DiracControl random_w1_matching(std::mt19937 &rng, int extra)
{
	std::uniform_int_distribution<int> num(-2, 2), den(1, 3), tnum(1, 10);
	std::vector<Rat> times;
	while (static_cast<int>(times.size()) < extra + 2)
	{
		Rat t = rat_make(tnum(rng), 11 + static_cast<int>(times.size()));
		bool dup = false;
		for (auto &u : times)
			dup = dup || u == t;
		if (!dup && t < Rat(1))
			times.push_back(t);
	}
	std::sort(times.begin(), times.end());

	std::vector<Rat> amps(times.size(), Rat(0));
	Rat sum_a(0), sum_m(0); // known contributions to U(1), int U
	for (size_t i = 0; i + 2 < times.size(); ++i)
	{
		amps[i] = rat_make(num(rng), den(rng));
		sum_a += amps[i];
		sum_m += amps[i] * (1 - times[i]);
	}
	// a_p + a_q = 1 - sum_a;  a_p (1-t_p) + a_q (1-t_q) = 1/2 - sum_m
	size_t p = times.size() - 2, q = times.size() - 1;
	Rat rhs1 = Rat(1) - sum_a, rhs2 = rat_make(1, 2) - sum_m;
	Rat det = times[q] - times[p];
	amps[p] = (rhs2 - rhs1 * (1 - times[q])) / det;
	amps[q] = rhs1 - amps[p];

	DiracControl c;
	c.horizon = 1;
	for (size_t i = 0; i < times.size(); ++i)
		if (sgn(amps[i]) != 0)
			c.impulses.push_back({times[i], X1(), GaussRat(amps[i])});
	return c;
}

// Additionally matches int int U = 1/6 and int int int U = 1/24 (the W2
// hypotheses), solving four amplitudes; W1-channel impulses may be thrown
// in freely.
DiracControl random_w2_matching(std::mt19937 &rng, int extra, bool with_w1)
{
	std::uniform_int_distribution<int> num(-2, 2), den(1, 3), tnum(1, 12), coin(0, 1);
	std::vector<Rat> times;
	while (static_cast<int>(times.size()) < extra + 4)
	{
		Rat t = rat_make(tnum(rng), 13 + static_cast<int>(times.size()));
		bool dup = false;
		for (auto &u : times)
			dup = dup || u == t;
		if (!dup && t < Rat(1))
			times.push_back(t);
	}
	std::sort(times.begin(), times.end());

	// moment of delta_t against the k-th primitive evaluated at 1:
	// int...int delta_t = (1-t)^k / k!
	auto moment = [](const Rat &t, int k) {
		Rat m(1);
		for (int i = 1; i <= k; ++i)
			m *= (Rat(1) - t) / i;
		return m;
	};
	std::vector<Rat> target = {Rat(1), rat_make(1, 2), rat_make(1, 6), rat_make(1, 24)};

	size_t n = times.size();
	std::vector<Rat> amps(n, Rat(0));
	for (size_t i = 0; i + 4 < n; ++i)
		amps[i] = rat_make(num(rng), den(rng));

	// 4x4 exact solve for the last four amplitudes
	std::vector<std::vector<Rat>> a(4, std::vector<Rat>(5, Rat(0)));
	for (int k = 0; k < 4; ++k)
	{
		a[k][4] = target[static_cast<size_t>(k)];
		for (size_t i = 0; i + 4 < n; ++i)
			a[k][4] -= amps[i] * moment(times[i], k);
		for (size_t j = 0; j < 4; ++j)
			a[k][j] = moment(times[n - 4 + j], k);
	}
	for (int c = 0; c < 4; ++c)
	{
		int pr = c;
		while (sgn(a[pr][c]) == 0)
			++pr;
		std::swap(a[c], a[pr]);
		for (int r = 0; r < 4; ++r)
		{
			if (r == c || sgn(a[r][c]) == 0)
				continue;
			Rat f = a[r][c] / a[c][c];
			for (int j = c; j < 5; ++j)
				a[r][j] -= f * a[c][j];
		}
	}
	for (int j = 0; j < 4; ++j)
		amps[n - 4 + static_cast<size_t>(j)] = a[j][4] / a[j][j];

	DiracControl c;
	c.horizon = 1;
	for (size_t i = 0; i < n; ++i)
		if (sgn(amps[i]) != 0)
			c.impulses.push_back({times[i], X1(), GaussRat(amps[i])});
	if (with_w1)
	{
		Rat t = rat_make(1, 101), amp = rat_make(num(rng) == 0 ? 1 : num(rng), den(rng));
		DiracControl d;
		d.horizon = 1;
		bool placed = false;
		for (auto &im : c.impulses)
		{
			if (!placed && t < im.time)
			{
				d.impulses.push_back({t, Bracket::W(1), GaussRat(amp)});
				placed = true;
			}
			d.impulses.push_back(im);
		}
		if (!placed)
			d.impulses.push_back({t, Bracket::W(1), GaussRat(amp)});
		return d;
	}
	return c;
}

} // namespace

TEST_CASE("w1 obstruction on the worked example")
{
	ObstructionReport rep = w1_obstruction(exact_quad_control());
	CHECK(rep.hypotheses_met());
	// 1/2 int (U - t)^2 with U the 1/3 // 1 staircase
	CHECK(rep.functional_value == rat_make(1, 48));
	CHECK(rep.identity_value == rat_make(1, 48));
	CHECK(sgn(rep.functional_value) > 0);
	CHECK(rep.bracket == Bracket::W(1));
}

TEST_CASE("w1 hypotheses guard")
{
	DiracControl c;
	c.horizon = 1;
	c.impulses = {{rat_make(1, 2), X1(), GaussRat(rat_make(1, 2))}}; // U(1) = 1/2
	ObstructionReport rep = w1_obstruction(c);
	CHECK(!rep.hypotheses_met());
	CHECK(rep.verdict == ObstructionReport::Verdict::HypothesesNotMet);

	DiracControl w1ch;
	w1ch.horizon = 1;
	w1ch.impulses = {{rat_make(1, 2), Bracket::W(1), GaussRat(1)}};
	CHECK_THROWS_AS(w1_obstruction(w1ch), std::domain_error);
}

TEST_CASE("w1 identity holds exactly on random matching controls")
{
	std::mt19937 rng(71);
	for (int trial = 0; trial < 40; ++trial)
	{
		DiracControl c = random_w1_matching(rng, trial % 3);
		ObstructionReport rep = w1_obstruction(c);
		REQUIRE(rep.hypotheses_met());
		CHECK(rep.functional_value == rep.identity_value);
		CHECK(sgn(rep.functional_value) > 0);
	}
}

TEST_CASE("w2 reference chain values")
{
	// xi_{M1}(t, u-bar) = t^2/2 and xi_{W2}(t, u-bar) = t^5/40:
	// feed the exact U(t) = t through the same machinery
	PiecewisePoly u_bar = PiecewisePoly::monomial(1, Rat(1));
	PiecewisePoly m1 = u_bar.primitive();
	CHECK(m1(rat_make(1, 2)) == rat_make(1, 8));
	PiecewisePoly w2 = (m1 * m1).primitive();
	// xi_{W2} = 1/2 int xi_{M1}^2
	CHECK(w2(Rat(1)) / 2 == rat_make(1, 40));
	CHECK((m1 * m1).integral() / 2 == rat_make(1, 40));
}

TEST_CASE("w2 identity holds exactly on random matching controls")
{
	std::mt19937 rng(73);
	for (int trial = 0; trial < 25; ++trial)
	{
		DiracControl c = random_w2_matching(rng, trial % 3, trial % 2 == 1);
		ObstructionReport rep = w2_obstruction(c);
		REQUIRE(rep.hypotheses_met());
		CHECK(rep.functional_value == rep.identity_value);
		CHECK(sgn(rep.functional_value) > 0);
	}
}

TEST_CASE("wN consistency with w1 and w2")
{
	std::mt19937 rng(79);
	DiracControl c1 = random_w1_matching(rng, 1);
	ObstructionReport a = w1_obstruction(c1);
	ObstructionReport b = wN_obstruction(c1, 1, {X1()});
	CHECK(a.functional_value == b.functional_value);
	CHECK(a.identity_value == b.identity_value);

	DiracControl c2 = random_w2_matching(rng, 1, true);
	ObstructionReport d = w2_obstruction(c2);
	ObstructionReport e = wN_obstruction(c2, 2, {X1(), Bracket::W(1)});
	CHECK(d.functional_value == e.functional_value);
	CHECK(d.identity_value == e.identity_value);

	// gamma values: the reference chain is t, t^2/2 (gamma_1 = 1, gamma_2 = 1/2)
	PiecewisePoly u_bar = PiecewisePoly::monomial(1, Rat(1));
	CHECK(u_bar(Rat(1)) == Rat(1));
	CHECK(u_bar.primitive()(Rat(1)) == rat_make(1, 2));

	// hypothesis violations are named
	CHECK_THROWS_WITH_AS(wN_obstruction(c1, 1, {X1(), Bracket::W(1)}),
	                     "flow set contains the bad bracket [X1,[X1,X0]]",
	                     std::domain_error);
	CHECK_THROWS_AS(wN_obstruction(c1, 2, {X1(), Bracket::M(2)}), std::domain_error);
}

TEST_CASE("w3 identity on refined controls")
{
	// flows {X1, W1, W2} leave W3 uncompensated; hypotheses need the chain
	// matched through M5, which we realize with six solved amplitudes.
	std::mt19937 rng(83);
	std::uniform_int_distribution<int> tnum(1, 16);
	for (int trial = 0; trial < 3; ++trial)
	{
		std::vector<Rat> times;
		while (times.size() < 6)
		{
			Rat t = rat_make(tnum(rng), 17 + static_cast<int>(times.size()));
			bool dup = false;
			for (auto &u : times)
				dup = dup || u == t;
			if (!dup && t < Rat(1))
				times.push_back(t);
		}
		std::sort(times.begin(), times.end());
		auto moment = [](const Rat &t, int k) {
			Rat m(1);
			for (int i = 1; i <= k; ++i)
				m *= (Rat(1) - t) / i;
			return m;
		};
		std::vector<std::vector<Rat>> a(6, std::vector<Rat>(7, Rat(0)));
		for (int k = 0; k < 6; ++k)
		{
			Rat f(1);
			for (int i = 1; i <= k + 1; ++i)
				f /= i;
			a[k][6] = f; // xi_{M_k}(1, u-bar) = 1/(k+1)!
			for (int j = 0; j < 6; ++j)
				a[k][static_cast<size_t>(j)] = moment(times[static_cast<size_t>(j)], k);
		}
		for (int c = 0; c < 6; ++c)
		{
			int pr = c;
			while (sgn(a[pr][c]) == 0)
				++pr;
			std::swap(a[c], a[pr]);
			for (int r = 0; r < 6; ++r)
			{
				if (r == c || sgn(a[r][c]) == 0)
					continue;
				Rat f = a[r][c] / a[c][c];
				for (int j = c; j < 7; ++j)
					a[r][j] -= f * a[c][j];
			}
		}
		DiracControl c;
		c.horizon = 1;
		for (int j = 0; j < 6; ++j)
		{
			Rat amp = a[j][6] / a[j][j];
			if (sgn(amp) != 0)
				c.impulses.push_back({times[static_cast<size_t>(j)], X1(), GaussRat(amp)});
		}
		ObstructionReport rep =
		    wN_obstruction(c, 3, {X1(), Bracket::W(1), Bracket::W(2)});
		REQUIRE(rep.hypotheses_met());
		CHECK(rep.functional_value == rep.identity_value);
		CHECK(sgn(rep.functional_value) > 0);
	}
}

TEST_CASE("functional shrinks along refining pulse trains")
{
	// equal-amplitude staircases approaching u == 1
	Rat prev(-1);
	for (int k : {2, 4, 8, 16})
	{
		DiracControl c;
		c.horizon = 1;
		for (int i = 0; i < k; ++i)
			c.impulses.push_back({rat_make(2 * i, 2 * k), X1(), GaussRat(rat_make(1, k))});
		// staircase U matches U(1)=1 automatically; adjust to int U = 1/2:
		// jumps at i/k with amplitude 1/k give int U = (k+1)/(2k) - off by
		// 1/(2k); shift times by 1/(2k) to center the steps
		DiracControl centered;
		centered.horizon = 1;
		for (int i = 0; i < k; ++i)
			centered.impulses.push_back(
			    {rat_make(2 * i + 1, 2 * k), X1(), GaussRat(rat_make(1, k))});
		ObstructionReport rep = w1_obstruction(centered);
		REQUIRE(rep.hypotheses_met());
		if (sgn(prev) >= 0)
			CHECK(rep.functional_value < prev);
		prev = rep.functional_value;
	}
	// 1/2 int (U-t)^2 for the centered k-staircase is 1/(24 k^2)
	CHECK(prev == rat_make(1, 24 * 16 * 16));
}

TEST_CASE("w2 functional shrinks along refining pulse trains")
{
	// centered staircases approach the constant reference control; the
	// squared H^{-2} defect decreases toward zero whether or not the
	// matching hypotheses hold along the way
	Rat prev(-1);
	for (int k : {2, 4, 8, 16, 32})
	{
		DiracControl c;
		c.horizon = 1;
		for (int i = 0; i < k; ++i)
			c.impulses.push_back(
			    {rat_make(2 * i + 1, 2 * k), X1(), GaussRat(rat_make(1, k))});
		ObstructionReport rep = w2_obstruction(c);
		if (sgn(prev) >= 0)
			CHECK(rep.functional_value < prev);
		prev = rep.functional_value;
	}
	CHECK(rat_to_double(prev) < 1e-5);
}

TEST_CASE("max order bound")
{
	CHECK(max_order_bound({X1()}).bound == 2);
	CHECK(max_order_bound({X1(), Bracket::W(1)}).bound == 4);
	CHECK(max_order_bound({X1(), Bracket::W(1), Bracket::W(2)}).bound == 6);
	CHECK(max_order_bound({X1(), Bracket::W(1), Bracket::W(2), Bracket::W(3),
	                       Bracket::Q1_flat()})
	          .bound == 8);

	// every W_j present up to the limit: no bound from this criterion
	MaxOrderBound open = max_order_bound(
	    {X1(), Bracket::W(1), Bracket::W(2), Bracket::W(3), Bracket::W(4), Bracket::W(5),
	     Bracket::W(6), Bracket::W(7), Bracket::W(8)},
	    8);
	CHECK(!open.bounded);

	CHECK_THROWS_AS(max_order_bound({X1(), Bracket::leaf(0)}), std::invalid_argument);
	CHECK_THROWS_AS(max_order_bound({Bracket::W(1)}), std::invalid_argument);
}

TEST_CASE("degeneracy witness")
{
	const HallBasis &basis = bstar_basis(5);
	auto z3 = zeta_coordinates(exact_quad_control(), basis, 3);
	DegeneracyWitness w = degeneracy_witness(z3, 3);
	CHECK(w.m_bracket == Bracket::M(2));
	CHECK(w.w_bracket == Bracket::W(1));
	// zeta_{M2} + zeta_{W1} > 0 (here = 1/48 + 0)
	CHECK(w.m_coeff + w.w_coeff == GaussRat(rat_make(1, 48)));

	// degree-5 route: any W2-matching control
	std::mt19937 rng(97);
	DiracControl c5 = random_w2_matching(rng, 0, false);
	auto z5 = zeta_coordinates(c5, basis, 5);
	DegeneracyWitness w5 = degeneracy_witness(z5, 5);
	CHECK(w5.m_bracket == Bracket::M(4));
	CHECK(w5.w_bracket == Bracket::W(2));
	bool both_zero = is_zero(w5.m_coeff) && is_zero(w5.w_coeff);
	CHECK(!both_zero);

	// unmet matching conditions are an error
	DiracControl unmatched;
	unmatched.horizon = 1;
	unmatched.impulses = {{rat_make(1, 2), X1(), GaussRat(2)}};
	auto zu = zeta_coordinates(unmatched, basis, 3);
	CHECK_THROWS_AS(degeneracy_witness(zu, 3), std::domain_error);
}

TEST_CASE("order checker never exceeds the flow-set bound")
{
	std::mt19937 rng(101);
	std::uniform_int_distribution<int> num(-3, 3), den(1, 4);
	auto rand_scalar = [&]() {
		int n = num(rng);
		return rat_make(n == 0 ? 1 : n, den(rng));
	};

	// flows {X1}: bound 2
	for (int trial = 0; trial < 12; ++trial)
	{
		Scheme s;
		s.alpha_domain = AlphaDomain::Positive;
		for (int i = 0; i < 4; ++i)
			s.stages.push_back({rat_make(den(rng), 7), X1(), GaussRat(rand_scalar())});
		OrderResult r = order_of_scheme(s, 4);
		CHECK(!r.at_least);
		CHECK(r.order <= max_order_bound({X1()}).bound);
	}

	// flows {X1, W1}: bound 4
	for (int trial = 0; trial < 8; ++trial)
	{
		Scheme s;
		s.alpha_domain = AlphaDomain::Positive;
		for (int i = 0; i < 5; ++i)
			s.stages.push_back({rat_make(den(rng), 9),
			                    i % 2 ? Bracket::W(1) : X1(), GaussRat(rand_scalar())});
		OrderResult r = order_of_scheme(s, 5);
		CHECK(!r.at_least);
		CHECK(r.order <= max_order_bound({X1(), Bracket::W(1)}).bound);
	}
}

TEST_CASE("jacobi reduction of W2")
{
	// W2 = [[W1,X0],X0] - [X1,M3] as polynomials
	int n = 5;
	Polynomial<Rat> lhs = evaluate(Bracket::W(2), n);
	Polynomial<Rat> rhs =
	    evaluate(Bracket::pair(Bracket::pair(Bracket::W(1), Bracket::leaf(0)),
	                           Bracket::leaf(0)),
	             n) -
	    evaluate(Bracket::pair(X1(), Bracket::M(3)), n);
	CHECK(lhs == rhs);
}

TEST_CASE("report rendering")
{
	ObstructionReport rep = w1_obstruction(exact_quad_control());
	std::string text = rep.to_text();
	CHECK(text.find("obstructed") != std::string::npos);
	CHECK(text.find("1/48") != std::string::npos);
}
