#include "liesplit/scheme.hpp"

#include <sstream>
#include <stdexcept>

namespace liesplit {

namespace {

Rat rat_pow(const Rat &q, int e)
{
	Rat r(1);
	for (int i = 0; i < e; ++i)
		r *= q;
	return r;
}

} // namespace

AlphaDomain alpha_domain_from_name(const std::string &s)
{
	if (s == "R")
		return AlphaDomain::Real;
	if (s == "R+")
		return AlphaDomain::Positive;
	if (s == "R*")
		return AlphaDomain::NonZero;
	throw std::invalid_argument("unknown alpha domain: " + s);
}

BetaDomain beta_domain_from_name(const std::string &s)
{
	if (s == "R")
		return BetaDomain::Real;
	if (s == "R+")
		return BetaDomain::Positive;
	if (s == "C")
		return BetaDomain::Complex;
	if (s == "C+")
		return BetaDomain::ComplexRight;
	throw std::invalid_argument("unknown beta domain: " + s);
}

std::string alpha_domain_name(AlphaDomain d)
{
	switch (d)
	{
	case AlphaDomain::Real:
		return "R";
	case AlphaDomain::Positive:
		return "R+";
	default:
		return "R*";
	}
}

std::string beta_domain_name(BetaDomain d)
{
	switch (d)
	{
	case BetaDomain::Real:
		return "R";
	case BetaDomain::Positive:
		return "R+";
	case BetaDomain::Complex:
		return "C";
	default:
		return "C+";
	}
}

Rat Scheme::total_time() const
{
	Rat t(0);
	for (auto &st : stages)
		t += st.alpha;
	return t;
}

bool Scheme::is_real() const
{
	for (auto &st : stages)
		if (!st.beta.is_real())
			return false;
	return true;
}

void Scheme::check_domains() const
{
	for (auto &st : stages)
	{
		switch (alpha_domain)
		{
		case AlphaDomain::Positive:
			if (sgn(st.alpha) < 0)
				throw std::domain_error("alpha outside R+");
			break;
		case AlphaDomain::NonZero:
			if (sgn(st.alpha) == 0)
				throw std::domain_error("alpha outside R*");
			break;
		case AlphaDomain::Real:
			break;
		}
		switch (beta_domain)
		{
		case BetaDomain::Real:
			if (!st.beta.is_real())
				throw std::domain_error("beta outside R");
			break;
		case BetaDomain::Positive:
			if (!st.beta.is_real() || sgn(st.beta.re) < 0)
				throw std::domain_error("beta outside R+");
			break;
		case BetaDomain::ComplexRight:
			if (sgn(st.beta.re) < 0)
				throw std::domain_error("beta outside C+");
			break;
		case BetaDomain::Complex:
			break;
		}
	}
	// Distinct controlled flows must be separated by positive drift.
	for (size_t i = 0; i + 1 < stages.size(); ++i)
	{
		const Stage &a = stages[i], &b = stages[i + 1];
		if (is_zero(a.beta) || is_zero(b.beta))
			continue;
		if (sgn(b.alpha) == 0 && !(a.channel == b.channel))
			throw std::domain_error("distinct flows without drift between them");
	}
}

void DiracControl::check() const
{
	if (sgn(horizon) <= 0)
		throw std::domain_error("control horizon must be positive");
	for (size_t i = 0; i < impulses.size(); ++i)
	{
		const Impulse &im = impulses[i];
		if (sgn(im.time) < 0 || im.time > horizon)
			throw std::domain_error("impulse time outside [0, horizon]");
		if (i && !(impulses[i - 1].time < im.time))
			throw std::domain_error("impulse times not strictly increasing");
		if (im.channel.is_leaf() && im.channel.letter() == 0)
			throw std::domain_error("X0 is the drift, not an impulse channel");
	}
}

double DiracControl::amplitude_norm() const
{
	double s = 0;
	for (auto &im : impulses)
		s += std::abs(im.amplitude.to_complex());
	return s;
}

DiracControl scheme_to_control(const Scheme &s)
{
	DiracControl c;
	c.horizon = s.total_time();
	if (sgn(c.horizon) <= 0)
		throw std::domain_error("scheme has nonpositive total time");
	Rat t(0);
	for (auto it = s.stages.rbegin(); it != s.stages.rend(); ++it)
	{
		if (sgn(it->alpha) < 0)
			throw std::domain_error("negative drift duration; not a forward-time control");
		if (!is_zero(it->beta))
		{
			if (!c.impulses.empty() && c.impulses.back().time == t)
			{
				Impulse &prev = c.impulses.back();
				if (!(prev.channel == it->channel))
					throw std::domain_error("zero-duration stage between distinct channels");
				prev.amplitude += it->beta;
				if (is_zero(prev.amplitude))
					c.impulses.pop_back();
			}
			else
				c.impulses.push_back({t, it->channel, it->beta});
		}
		t += it->alpha;
	}
	c.check();
	return c;
}

Scheme control_to_scheme(const DiracControl &c, AlphaDomain ad, BetaDomain bd)
{
	c.check();
	Scheme s;
	s.alpha_domain = ad;
	s.beta_domain = bd;
	Rat prev = c.horizon;
	for (auto it = c.impulses.rbegin(); it != c.impulses.rend(); ++it)
	{
		s.stages.push_back({Rat(prev - it->time), it->channel, it->amplitude});
		prev = it->time;
	}
	if (sgn(prev) > 0) // leading drift needs a trailing zero-amplitude stage
		s.stages.push_back({prev, Bracket::leaf(1), GaussRat(0)});
	return s;
}

DiracControl compose(const DiracControl &later, const DiracControl &earlier)
{
	earlier.check();
	later.check();
	DiracControl out;
	out.horizon = earlier.horizon + later.horizon;
	out.impulses = earlier.impulses;
	for (auto im : later.impulses)
	{
		im.time += earlier.horizon;
		if (!out.impulses.empty() && out.impulses.back().time == im.time)
		{
			// boundary collision: merge same-channel impulses
			if (!(out.impulses.back().channel == im.channel))
				throw std::domain_error("coinciding impulses on distinct channels");
			out.impulses.back().amplitude += im.amplitude;
			if (is_zero(out.impulses.back().amplitude))
				out.impulses.pop_back();
		}
		else
			out.impulses.push_back(im);
	}
	return out;
}

DiracControl normalize_horizon(const DiracControl &c)
{
	c.check();
	DiracControl out;
	out.horizon = 1;
	for (auto &im : c.impulses)
		out.impulses.push_back({Rat(im.time / c.horizon), im.channel,
		                        im.amplitude / GaussRat(rat_pow(c.horizon, im.channel.length()))});
	return out;
}

Polynomial<GaussRat> formal_series(const DiracControl &c, int degree)
{
	c.check();
	for (auto &im : c.impulses)
		if (im.channel.length() > degree)
			throw std::domain_error("impulse channel degree exceeds truncation");

	auto drift = [&](const Rat &d) {
		Polynomial<GaussRat> x0 = Polynomial<GaussRat>::generator(degree, 0);
		x0.scale(GaussRat(d));
		return exp_truncated(x0);
	};

	size_t k = c.impulses.size();
	Rat last = k ? c.impulses.back().time : Rat(0);
	Polynomial<GaussRat> p = drift(k ? Rat(c.horizon - last) : c.horizon);
	for (size_t i = k; i-- > 0;)
	{
		const Impulse &im = c.impulses[i];
		Polynomial<GaussRat> jump = evaluate_as<GaussRat>(im.channel, degree);
		jump.scale(im.amplitude);
		p = mul_truncated(p, exp_truncated(jump));
		Rat d = i ? Rat(im.time - c.impulses[i - 1].time) : im.time;
		if (sgn(d) != 0)
			p = mul_truncated(p, drift(d));
	}
	return p;
}

Polynomial<GaussRat> regularized_series(const DiracControl &c, const Rat &eps, int degree)
{
	c.check();
	if (sgn(eps) <= 0)
		throw std::domain_error("regularization width must be positive");
	size_t k = c.impulses.size();
	for (size_t i = 0; i < k; ++i)
	{
		Rat gap = (i + 1 < k ? c.impulses[i + 1].time : c.horizon) - c.impulses[i].time;
		if (eps > gap)
			throw std::domain_error("regularization width exceeds an impulse gap");
	}

	auto drift = [&](const Rat &d) {
		Polynomial<GaussRat> x0 = Polynomial<GaussRat>::generator(degree, 0);
		x0.scale(GaussRat(d));
		return exp_truncated(x0);
	};

	Rat last = k ? c.impulses.back().time : Rat(0);
	Polynomial<GaussRat> p = drift(k ? Rat(c.horizon - last - eps) : c.horizon);
	for (size_t i = k; i-- > 0;)
	{
		const Impulse &im = c.impulses[i];
		Polynomial<GaussRat> gen = evaluate_as<GaussRat>(im.channel, degree);
		gen.scale(im.amplitude);
		gen.add_term(Word::single(0), GaussRat(eps));
		p = mul_truncated(p, exp_truncated(gen));
		Rat d = (i ? Rat(im.time - c.impulses[i - 1].time) : im.time) - (i ? eps : Rat(0));
		if (sgn(d) != 0)
			p = mul_truncated(p, drift(d));
	}
	return p;
}

Polynomial<GaussRat> scheme_series(const Scheme &s, int degree)
{
	Polynomial<GaussRat> p = Polynomial<GaussRat>::unit(degree);
	for (auto &st : s.stages)
	{
		if (sgn(st.alpha) != 0)
		{
			Polynomial<GaussRat> x0 = Polynomial<GaussRat>::generator(degree, 0);
			x0.scale(GaussRat(st.alpha));
			p = mul_truncated(p, exp_truncated(x0));
		}
		if (!is_zero(st.beta))
		{
			if (st.channel.length() > degree)
				throw std::domain_error("stage channel degree exceeds truncation");
			Polynomial<GaussRat> jump = evaluate_as<GaussRat>(st.channel, degree);
			jump.scale(st.beta);
			p = mul_truncated(p, exp_truncated(jump));
		}
	}
	return p;
}

namespace {

void require_basis(const HallBasis &basis, int degree)
{
	if (basis.max_degree() < degree)
		throw std::invalid_argument("basis degree too small for requested degree");
	if (basis.letters() != 2)
		throw std::invalid_argument("scheme coordinates need a 2-generator basis");
}

CoordinateVector from_lie(const LieCoordinates<GaussRat> &lc, int degree,
                          CoordinateKind kind)
{
	CoordinateVector v;
	v.basis = lc.basis;
	v.degree = degree;
	v.kind = kind;
	v.values = lc.values;
	return v;
}

// Solves prod_desc exp(xi_b b) = exp(sum zeta_b b) for xi given zeta.
// The BCH corrections to a degree-n coordinate only involve lower-degree
// xi values, so one pass per degree suffices.
CoordinateVector triangular_xi_solve(const CoordinateVector &zeta)
{
	CoordinateVector xi = zeta;
	xi.kind = CoordinateKind::SecondKind;
	for (auto &v : xi.values)
		v = GaussRat(0);
	for (int n = 1; n <= xi.degree; ++n)
	{
		Polynomial<GaussRat> p = descending_product(xi);
		auto g = lie_coordinates(log_truncated(p), *xi.basis);
		for (int idx : xi.basis->degree_elements(n))
		{
			auto i = static_cast<size_t>(idx);
			xi.values[i] = zeta.values[i] - g.values[i];
		}
	}
	return xi;
}

} // namespace

CoordinateVector zeta_coordinates(const DiracControl &c, const HallBasis &basis, int degree)
{
	require_basis(basis, degree);
	auto series = formal_series(c, degree);
	return from_lie(lie_coordinates(log_truncated(series), basis), degree,
	                CoordinateKind::FirstKind);
}

CoordinateVector xi_coordinates(const DiracControl &c, const HallBasis &basis, int degree)
{
	return zeta_to_xi(zeta_coordinates(c, basis, degree));
}

Polynomial<GaussRat> descending_product(const CoordinateVector &v)
{
	Polynomial<GaussRat> p = Polynomial<GaussRat>::unit(v.degree);
	const auto &elems = v.basis->elements();
	bool first = true;
	for (size_t i = elems.size(); i-- > 0;)
	{
		if (elems[i].length() > v.degree || is_zero(v.values[i]))
			continue;
		Polynomial<GaussRat> e = evaluate_as<GaussRat>(elems[i], v.degree);
		e.scale(v.values[i]);
		if (first)
		{
			p = exp_truncated(e);
			first = false;
		}
		else
			p = mul_truncated(p, exp_truncated(e));
	}
	return p;
}

CoordinateVector xi_to_zeta(const CoordinateVector &xi)
{
	if (xi.kind != CoordinateKind::SecondKind)
		throw std::domain_error("xi_to_zeta expects second-kind coordinates");
	require_basis(*xi.basis, xi.degree);
	Polynomial<GaussRat> p = descending_product(xi);
	return from_lie(lie_coordinates(log_truncated(p), *xi.basis), xi.degree,
	                CoordinateKind::FirstKind);
}

CoordinateVector zeta_to_xi(const CoordinateVector &zeta)
{
	if (zeta.kind != CoordinateKind::FirstKind)
		throw std::domain_error("zeta_to_xi expects first-kind coordinates");
	require_basis(*zeta.basis, zeta.degree);
	return triangular_xi_solve(zeta);
}

CoordinateVector reference_zeta(const HallBasis &basis, int degree)
{
	require_basis(basis, degree);
	Polynomial<GaussRat> target(degree);
	target.add_term(Word::single(0), GaussRat(1));
	target.add_term(Word::single(1), GaussRat(1));
	return from_lie(lie_coordinates(target, basis), degree, CoordinateKind::FirstKind);
}

std::string OrderResult::summary() const
{
	std::ostringstream os;
	if (at_least)
	{
		os << "order: >= " << probed_max + 1;
		return os.str();
	}
	os << "order: " << order;
	if (defect_degree)
	{
		os << "; first defect at degree " << defect_degree << ":";
		for (auto &[b, z] : defect)
			os << " " << b.str() << "=" << gauss_str(z);
	}
	return os.str();
}

OrderResult order_of_scheme(const Scheme &s, int n_max)
{
	if (!s.exact)
		throw std::domain_error(
		    "order check needs exact coefficients; float schemes go through search");
	if (n_max < 0)
		throw std::invalid_argument("n_max must be >= 0");
	Rat lambda = s.total_time();
	if (sgn(lambda) <= 0)
		throw std::domain_error("scheme total time must be positive");

	Scheme norm = s;
	for (auto &st : norm.stages)
	{
		st.alpha /= lambda;
		st.beta = st.beta / GaussRat(rat_pow(lambda, st.channel.length()));
	}

	int probe = n_max + 1;
	Polynomial<GaussRat> l = log_truncated(scheme_series(norm, probe));
	l.add_term(Word::single(0), GaussRat(-1));
	l.add_term(Word::single(1), GaussRat(-1));

	OrderResult r;
	r.probed_max = n_max;
	for (int n = 1; n <= probe; ++n)
	{
		Polynomial<GaussRat> defect = grade(l, n);
		if (defect.is_zero())
			continue;
		r.order = n - 1;
		r.defect_degree = n;
		const HallBasis &basis = bstar_basis(std::max(n, 5));
		auto lc = lie_coordinates(truncate(defect, n), basis);
		for (int idx : basis.degree_elements(n))
			if (!is_zero(lc.values[static_cast<size_t>(idx)]))
				r.defect.emplace_back(basis.elements()[static_cast<size_t>(idx)],
				                      lc.values[static_cast<size_t>(idx)]);
		return r;
	}
	r.at_least = true;
	r.order = n_max + 1;
	return r;
}

bool homogeneity_check(const DiracControl &c, const Rat &eps,
                       const std::vector<Rat> &lambda, const HallBasis &basis, int degree)
{
	if (sgn(eps) <= 0)
		throw std::domain_error("homogeneity scaling needs eps > 0");
	require_basis(basis, degree);
	CoordinateVector base = zeta_coordinates(c, basis, degree);

	// Time scaling: tau -> eps tau, amplitude -> eps^{|ch|} a, T -> eps T.
	DiracControl scaled;
	scaled.horizon = eps * c.horizon;
	for (auto &im : c.impulses)
		scaled.impulses.push_back({Rat(eps * im.time), im.channel,
		                           im.amplitude * GaussRat(rat_pow(eps, im.channel.length()))});
	CoordinateVector zt = zeta_coordinates(scaled, basis, degree);
	for (size_t i = 0; i < base.values.size(); ++i)
	{
		const Bracket &b = basis.elements()[i];
		if (b.length() > degree)
			continue;
		if (!(zt.values[i] == base.values[i] * GaussRat(rat_pow(eps, b.length()))))
			return false;
	}

	// Per-letter amplitude scaling: the drift picks up lambda_0, a channel c
	// picks up prod_j lambda_j^{n_j(c)}. Realized directly on the series.
	if (static_cast<int>(lambda.size()) < 2)
		throw std::invalid_argument("need a lambda per generator");
	auto scale_channel = [&](const Bracket &ch) {
		Rat f(1);
		for (int j = 0; j < 2; ++j)
			f *= rat_pow(lambda[static_cast<size_t>(j)], ch.count(j));
		return f;
	};
	auto drift = [&](const Rat &d) {
		Polynomial<GaussRat> x0 = Polynomial<GaussRat>::generator(degree, 0);
		x0.scale(GaussRat(Rat(d * lambda[0])));
		return exp_truncated(x0);
	};
	size_t k = c.impulses.size();
	Rat last = k ? c.impulses.back().time : Rat(0);
	Polynomial<GaussRat> p = drift(k ? Rat(c.horizon - last) : c.horizon);
	for (size_t i = k; i-- > 0;)
	{
		const Impulse &im = c.impulses[i];
		Polynomial<GaussRat> jump = evaluate_as<GaussRat>(im.channel, degree);
		jump.scale(im.amplitude * GaussRat(scale_channel(im.channel)));
		p = mul_truncated(p, exp_truncated(jump));
		Rat d = i ? Rat(im.time - c.impulses[i - 1].time) : im.time;
		if (sgn(d) != 0)
			p = mul_truncated(p, drift(d));
	}
	auto zl = lie_coordinates(log_truncated(p), basis);
	for (size_t i = 0; i < base.values.size(); ++i)
	{
		const Bracket &b = basis.elements()[i];
		if (b.length() > degree)
			continue;
		Rat f(1);
		for (int j = 0; j < 2; ++j)
			f *= rat_pow(lambda[static_cast<size_t>(j)], b.count(j));
		if (!(zl.values[i] == base.values[i] * GaussRat(f)))
			return false;
	}
	return true;
}

const HallBasis &bstar_basis(int max_degree)
{
	static std::mutex mu;
	static std::vector<std::unique_ptr<HallBasis>> cache;
	std::lock_guard<std::mutex> lock(mu);
	if (static_cast<size_t>(max_degree) >= cache.size())
		cache.resize(static_cast<size_t>(max_degree) + 1);
	auto &slot = cache[static_cast<size_t>(max_degree)];
	if (!slot)
		slot = std::make_unique<HallBasis>(
		    HallBasis::generate(2, max_degree, HallPolicy::BStar));
	return *slot;
}

} // namespace liesplit
