#include "liesplit/obstruction.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace liesplit {

// --- PiecewisePoly ---------------------------------------------------------

PiecewisePoly::PiecewisePoly() : breaks_{Rat(0), Rat(1)}, pieces_{{}} {}

PiecewisePoly::PiecewisePoly(std::vector<Rat> breaks, std::vector<std::vector<Rat>> pieces)
    : breaks_(std::move(breaks)), pieces_(std::move(pieces))
{
	if (breaks_.size() < 2 || pieces_.size() + 1 != breaks_.size())
		throw std::invalid_argument("piecewise: breaks/pieces size mismatch");
	if (!(breaks_.front() == Rat(0)) || !(breaks_.back() == Rat(1)))
		throw std::invalid_argument("piecewise: domain must be [0,1]");
	for (size_t i = 0; i + 1 < breaks_.size(); ++i)
		if (!(breaks_[i] < breaks_[i + 1]))
			throw std::invalid_argument("piecewise: breaks not increasing");
}

PiecewisePoly PiecewisePoly::step(std::vector<Rat> breaks, std::vector<Rat> steps)
{
	std::vector<std::vector<Rat>> pieces;
	for (auto &v : steps)
		pieces.push_back(sgn(v) == 0 ? std::vector<Rat>{} : std::vector<Rat>{v});
	return PiecewisePoly(std::move(breaks), std::move(pieces));
}

PiecewisePoly PiecewisePoly::global(std::vector<Rat> coeffs)
{
	return PiecewisePoly({Rat(0), Rat(1)}, {std::move(coeffs)});
}

PiecewisePoly PiecewisePoly::monomial(int degree, const Rat &coeff)
{
	std::vector<Rat> c(static_cast<size_t>(degree) + 1, Rat(0));
	c.back() = coeff;
	return global(std::move(c));
}

namespace {

std::vector<Rat> merge_breaks(const std::vector<Rat> &a, const std::vector<Rat> &b)
{
	std::vector<Rat> out;
	std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
	out.erase(std::unique(out.begin(), out.end()), out.end());
	return out;
}

size_t piece_index(const std::vector<Rat> &breaks, const Rat &t)
{
	for (size_t i = 0; i + 2 < breaks.size(); ++i)
		if (t < breaks[i + 1])
			return i;
	return breaks.size() - 2;
}

std::vector<Rat> poly_add(const std::vector<Rat> &a, const std::vector<Rat> &b, int sign)
{
	std::vector<Rat> out(std::max(a.size(), b.size()), Rat(0));
	for (size_t i = 0; i < a.size(); ++i)
		out[i] += a[i];
	for (size_t i = 0; i < b.size(); ++i)
		out[i] += sign * b[i];
	while (!out.empty() && sgn(out.back()) == 0)
		out.pop_back();
	return out;
}

std::vector<Rat> poly_mul(const std::vector<Rat> &a, const std::vector<Rat> &b)
{
	if (a.empty() || b.empty())
		return {};
	std::vector<Rat> out(a.size() + b.size() - 1, Rat(0));
	for (size_t i = 0; i < a.size(); ++i)
		for (size_t j = 0; j < b.size(); ++j)
			out[i + j] += a[i] * b[j];
	while (!out.empty() && sgn(out.back()) == 0)
		out.pop_back();
	return out;
}

Rat poly_eval(const std::vector<Rat> &a, const Rat &t)
{
	Rat v(0);
	for (size_t i = a.size(); i-- > 0;)
		v = v * t + a[i];
	return v;
}

} // namespace

PiecewisePoly PiecewisePoly::operator+(const PiecewisePoly &o) const
{
	auto breaks = merge_breaks(breaks_, o.breaks_);
	std::vector<std::vector<Rat>> pieces;
	for (size_t i = 0; i + 1 < breaks.size(); ++i)
	{
		const Rat &t = breaks[i];
		pieces.push_back(poly_add(pieces_[piece_index(breaks_, t)],
		                          o.pieces_[piece_index(o.breaks_, t)], +1));
	}
	return PiecewisePoly(std::move(breaks), std::move(pieces));
}

PiecewisePoly PiecewisePoly::operator-(const PiecewisePoly &o) const
{
	auto breaks = merge_breaks(breaks_, o.breaks_);
	std::vector<std::vector<Rat>> pieces;
	for (size_t i = 0; i + 1 < breaks.size(); ++i)
	{
		const Rat &t = breaks[i];
		pieces.push_back(poly_add(pieces_[piece_index(breaks_, t)],
		                          o.pieces_[piece_index(o.breaks_, t)], -1));
	}
	return PiecewisePoly(std::move(breaks), std::move(pieces));
}

PiecewisePoly PiecewisePoly::operator*(const PiecewisePoly &o) const
{
	auto breaks = merge_breaks(breaks_, o.breaks_);
	std::vector<std::vector<Rat>> pieces;
	for (size_t i = 0; i + 1 < breaks.size(); ++i)
	{
		const Rat &t = breaks[i];
		pieces.push_back(poly_mul(pieces_[piece_index(breaks_, t)],
		                          o.pieces_[piece_index(o.breaks_, t)]));
	}
	return PiecewisePoly(std::move(breaks), std::move(pieces));
}

PiecewisePoly PiecewisePoly::primitive() const
{
	std::vector<std::vector<Rat>> pieces;
	Rat running(0);
	for (size_t i = 0; i + 1 < breaks_.size(); ++i)
	{
		const auto &p = pieces_[i];
		std::vector<Rat> q(p.size() + 1, Rat(0));
		for (size_t j = 0; j < p.size(); ++j)
			q[j + 1] = p[j] / Rat(static_cast<long>(j) + 1);
		// continuity: primitive(b_i) must equal the running integral
		q[0] = running - poly_eval(q, breaks_[i]);
		running = poly_eval(q, breaks_[i + 1]);
		while (!q.empty() && sgn(q.back()) == 0)
			q.pop_back();
		pieces.push_back(std::move(q));
	}
	return PiecewisePoly(breaks_, std::move(pieces));
}

Rat PiecewisePoly::integral() const
{
	Rat acc(0);
	for (size_t i = 0; i + 1 < breaks_.size(); ++i)
	{
		const auto &p = pieces_[i];
		std::vector<Rat> q(p.size() + 1, Rat(0));
		for (size_t j = 0; j < p.size(); ++j)
			q[j + 1] = p[j] / Rat(static_cast<long>(j) + 1);
		acc += poly_eval(q, breaks_[i + 1]) - poly_eval(q, breaks_[i]);
	}
	return acc;
}

Rat PiecewisePoly::operator()(const Rat &t) const
{
	if (t < Rat(0) || t > Rat(1))
		throw std::domain_error("piecewise eval outside [0,1]");
	return poly_eval(pieces_[piece_index(breaks_, t)], t);
}

// --- Obstruction functionals -----------------------------------------------

namespace {

Rat factorial(int n)
{
	Rat f(1);
	for (int i = 2; i <= n; ++i)
		f *= i;
	return f;
}

Rat require_real(const GaussRat &z, const char *what)
{
	if (!z.is_real())
		throw std::domain_error(std::string(what) + " must be real");
	return z.re;
}

// Primitive U of the X1-channel impulses of the *time-reversed* control
// (tau -> 1 - tau). The reversal matches the composition-order series the
// zeta side is computed from; under the matching hypotheses the functional
// value is reversal-invariant.
PiecewisePoly reversed_primitive(const DiracControl &c)
{
	std::vector<std::pair<Rat, Rat>> jumps; // (time, amplitude), reversed
	for (auto it = c.impulses.rbegin(); it != c.impulses.rend(); ++it)
		if (it->channel.length() == 1)
			jumps.emplace_back(Rat(1 - it->time), require_real(it->amplitude, "amplitude"));

	std::vector<Rat> breaks{Rat(0)};
	std::vector<Rat> steps;
	Rat level(0);
	for (auto &[t, a] : jumps)
	{
		if (!(breaks.back() == t))
		{
			steps.push_back(level);
			breaks.push_back(t);
		}
		level += a;
	}
	if (!(breaks.back() == Rat(1)))
	{
		steps.push_back(level);
		breaks.push_back(Rat(1));
	}
	return PiecewisePoly::step(std::move(breaks), std::move(steps));
}

ObstructionReport wN_engine(const DiracControl &raw, int n)
{
	DiracControl c = normalize_horizon(raw);
	int degree = 2 * n + 1;
	const HallBasis &basis = bstar_basis(std::max(degree, 5));
	CoordinateVector zeta = zeta_coordinates(c, basis, degree);

	ObstructionReport rep;
	rep.bracket = Bracket::W(n);
	rep.order_degree = degree;

	// Hypotheses: zeta_b matches the exp(X0+X1) reference for the chain
	// M_0 .. M_{2n-1}.
	bool met = true;
	for (int nu = 0; nu <= 2 * n - 1; ++nu)
	{
		Bracket b = Bracket::M(nu);
		GaussRat want = nu == 0 ? GaussRat(1) : GaussRat(0);
		GaussRat got = zeta.at(b);
		rep.constraint_residuals.emplace_back(b, got - want);
		met = met && is_zero(got - want);
	}

	// 1/2 * int_0^1 (xi_{M_{n-1}}(t) - t^n/n!)^2 dt, exactly.
	PiecewisePoly chain = reversed_primitive(c);
	for (int k = 1; k <= n - 1; ++k)
		chain = chain.primitive();
	PiecewisePoly defect = chain - PiecewisePoly::monomial(n, 1 / factorial(n));
	rep.functional_value = (defect * defect).integral() / 2;

	// Repeated integration by parts leaves the boundary term
	// (-1)^n xi~_{M_2n}(1), so the coercive combination alternates:
	// zeta_{W_n} + (-1)^{n+1} zeta_{M_2n} equals the functional.
	Rat m_sign = n % 2 ? Rat(1) : Rat(-1);
	rep.identity_value = require_real(zeta.at(Bracket::W(n)), "zeta_W") +
	                     m_sign * require_real(zeta.at(Bracket::M(2 * n)), "zeta_M");
	rep.verdict = met ? ObstructionReport::Verdict::Obstructed
	                  : ObstructionReport::Verdict::HypothesesNotMet;
	if (met && !(rep.functional_value == rep.identity_value))
		throw std::logic_error("coercivity identity violated; implementation bug");
	if (met && sgn(rep.functional_value) <= 0)
		throw std::logic_error("coercive functional not positive; implementation bug");
	return rep;
}

void check_channels(const DiracControl &c, const std::vector<Bracket> &allowed,
                    const char *who)
{
	for (auto &im : c.impulses)
	{
		bool ok = false;
		for (auto &b : allowed)
			ok = ok || b == im.channel;
		if (!ok)
			throw std::domain_error(std::string(who) + ": unsupported channel " +
			                        im.channel.str());
	}
}

} // namespace

bool ObstructionReport::hypotheses_met() const
{
	return verdict == Verdict::Obstructed;
}

std::string ObstructionReport::to_text() const
{
	std::ostringstream os;
	os << "obstruction " << bracket.str() << "\n";
	os << "verdict: "
	   << (verdict == Verdict::Obstructed ? "obstructed" : "hypotheses-not-met") << "\n";
	os << "functional: " << rat_str(functional_value) << " (~"
	   << rat_to_double(functional_value) << ")\n";
	if (verdict == Verdict::Obstructed)
		os << "identity zeta_W " << (bracket.length() / 2 % 2 ? "+" : "-")
		   << " zeta_M: " << rat_str(identity_value) << "\n";
	for (auto &[b, r] : constraint_residuals)
		os << "hypothesis defect " << b.str() << ": " << gauss_str(r) << "\n";
	return os.str();
}

ObstructionReport w1_obstruction(const DiracControl &c)
{
	check_channels(c, {Bracket::leaf(1)}, "w1 obstruction");
	return wN_engine(c, 1);
}

ObstructionReport w2_obstruction(const DiracControl &c)
{
	check_channels(c, {Bracket::leaf(1), Bracket::W(1)}, "w2 obstruction");
	return wN_engine(c, 2);
}

ObstructionReport wN_obstruction(const DiracControl &c, int n,
                                 const std::vector<Bracket> &flows)
{
	if (n < 1)
		throw std::invalid_argument("wN obstruction needs N >= 1");
	// Theorem hypothesis: flows avoid {M_N..M_2N, W_N}; we also reject the
	// lower M_nu channels, which the xi_{W_N} closed form cannot absorb.
	for (auto &b : flows)
	{
		if (b == Bracket::W(n))
			throw std::domain_error("flow set contains the bad bracket " + b.str());
		for (int nu = 1; nu <= 2 * n; ++nu)
			if (b == Bracket::M(nu))
				throw std::domain_error("flow set contains " + b.str() +
				                        " (M-chain channel breaks the W_N identity)");
	}
	check_channels(c, flows, "wN obstruction");
	return wN_engine(c, n);
}

MaxOrderBound max_order_bound(const std::vector<Bracket> &flows, int search_limit)
{
	bool has_x1 = false;
	for (auto &b : flows)
	{
		if (b.is_leaf() && b.letter() == 0)
			throw std::invalid_argument("X0 is the drift; it cannot be a controlled flow");
		has_x1 = has_x1 || (b.is_leaf() && b.letter() == 1);
	}
	if (!has_x1)
		throw std::invalid_argument("flow set must contain X1");

	for (int n = 1; n <= search_limit; ++n)
	{
		bool hit = false;
		for (auto &b : flows)
		{
			if (b == Bracket::W(n))
				hit = true;
			for (int nu = n; nu <= 2 * n && !hit; ++nu)
				hit = b == Bracket::M(nu);
		}
		if (!hit)
			return {true, 2 * n, n};
	}
	return {false, 0, 0};
}

DegeneracyWitness degeneracy_witness(const CoordinateVector &zeta, int degree)
{
	if (degree != 3 && degree != 5)
		throw std::invalid_argument("degeneracy witness exists at degrees 3 and 5");
	if (zeta.degree < degree)
		throw std::invalid_argument("coordinate vector degree too small");

	int upto = degree == 3 ? 1 : 3;
	for (int nu = 0; nu <= upto; ++nu)
	{
		GaussRat want = nu == 0 ? GaussRat(1) : GaussRat(0);
		if (!is_zero(zeta.at(Bracket::M(nu)) - want))
			throw std::domain_error("matching conditions unmet at " + Bracket::M(nu).str());
	}
	if (degree == 3)
		return {Bracket::M(2), Bracket::W(1), zeta.at(Bracket::M(2)), zeta.at(Bracket::W(1))};
	return {Bracket::M(4), Bracket::W(2), zeta.at(Bracket::M(4)), zeta.at(Bracket::W(2))};
}

} // namespace liesplit
