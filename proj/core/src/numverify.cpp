#include "liesplit/numverify.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace liesplit {

VecC TestSystem::flow_complex(const Bracket &, std::complex<double>, const VecC &) const
{
	throw std::domain_error(name() + " does not support complex coefficients");
}

VecC TestSystem::reference_complex(double, const VecC &) const
{
	throw std::domain_error(name() + " does not support complex coefficients");
}

namespace {

using Mat = Eigen::Matrix4d;
using MatC = Eigen::Matrix4cd;

// Lie bracket of linear vector fields x -> Mx is [f,g] = (NM - MN)x for
// f = Mx, g = Nx (note the reversal relative to the matrix commutator).
Mat field_matrix(const Bracket &b, const Mat &a0, const Mat &a1)
{
	if (b.is_leaf())
		return b.letter() == 0 ? a0 : a1;
	Mat l = field_matrix(b.left(), a0, a1);
	Mat r = field_matrix(b.right(), a0, a1);
	return r * l - l * r;
}

class LinearPair final : public TestSystem {
public:
	LinearPair(std::string name, Mat a, Mat b)
	    : name_(std::move(name)), a0_(a), a1_(b)
	{}

	std::string name() const override { return name_; }
	int dim() const override { return 4; }

	bool supports(const Bracket &) const override { return true; }

	Vec flow(const Bracket &ch, double s, const Vec &x) const override
	{
		Mat m = field_matrix(ch, a0_, a1_);
		return (s * m).exp() * x;
	}

	Vec reference(double t, const Vec &x) const override
	{
		return (t * (a0_ + a1_)).exp() * x;
	}

	Vec field(const Bracket &ch, const Vec &x) const override
	{
		return field_matrix(ch, a0_, a1_) * x;
	}

	Vec default_state() const override
	{
		Vec x(4);
		x << 1.0, 0.5, -1.0 / 3, 0.25;
		return x;
	}

	bool supports_complex() const override { return true; }

	VecC flow_complex(const Bracket &ch, std::complex<double> s, const VecC &x) const override
	{
		MatC m = field_matrix(ch, a0_, a1_).cast<std::complex<double>>();
		return (s * m).exp() * x;
	}

	VecC reference_complex(double t, const VecC &x) const override
	{
		MatC m = (a0_ + a1_).cast<std::complex<double>>();
		return (t * m).exp() * x;
	}

private:
	std::string name_;
	Mat a0_, a1_;
};

// The planar system with one quadratic drift component: f0 = (0, x1^2),
// f1 = (1, 0). Commutator fields, hand-derived:
//   f_{M1} = (0, 2 x1),  f_{W1} = (0, 2),  f_{M2} = f_{W2} = ... = 0.
class Quadratic final : public TestSystem {
public:
	std::string name() const override { return "quadratic"; }
	int dim() const override { return 2; }

	bool supports(const Bracket &ch) const override { return kind(ch) != Kind::Unknown; }

	Vec flow(const Bracket &ch, double s, const Vec &x) const override
	{
		Vec y = x;
		switch (kind(ch))
		{
		case Kind::Drift:
			y[1] += s * x[0] * x[0];
			break;
		case Kind::X1:
			y[0] += s;
			break;
		case Kind::M1:
			y[1] += 2 * s * x[0];
			break;
		case Kind::W1:
			y[1] += 2 * s;
			break;
		case Kind::Zero:
			break;
		case Kind::Unknown:
			throw std::domain_error("quadratic: unsupported channel " + ch.str());
		}
		return y;
	}

	Vec reference(double t, const Vec &x) const override
	{
		Vec y(2);
		y[0] = x[0] + t;
		y[1] = x[1] + (std::pow(x[0] + t, 3) - std::pow(x[0], 3)) / 3;
		return y;
	}

	Vec field(const Bracket &ch, const Vec &x) const override
	{
		Vec v = Vec::Zero(2);
		switch (kind(ch))
		{
		case Kind::Drift:
			v[1] = x[0] * x[0];
			break;
		case Kind::X1:
			v[0] = 1;
			break;
		case Kind::M1:
			v[1] = 2 * x[0];
			break;
		case Kind::W1:
			v[1] = 2;
			break;
		case Kind::Zero:
			break;
		case Kind::Unknown:
			throw std::domain_error("quadratic: unsupported channel " + ch.str());
		}
		return v;
	}

	Vec default_state() const override
	{
		Vec x(2);
		x << 0.7, 0.3;
		return x;
	}

private:
	enum class Kind { Drift, X1, M1, W1, Zero, Unknown };

	static Kind kind(const Bracket &ch)
	{
		if (ch.is_leaf())
			return ch.letter() == 0 ? Kind::Drift : Kind::X1;
		if (ch == Bracket::M(1))
			return Kind::M1;
		if (ch == Bracket::W(1))
			return Kind::W1;
		// all other table entries vanish identically
		for (int nu = 2; nu <= 6; ++nu)
			if (ch == Bracket::M(nu))
				return Kind::Zero;
		for (int j = 2; j <= 3; ++j)
			if (ch == Bracket::W(j))
				return Kind::Zero;
		if (ch == Bracket::pair(Bracket::W(1), Bracket::leaf(0)) ||
		    ch == Bracket::pair(Bracket::leaf(1), Bracket::W(1)) || ch == Bracket::Q1() ||
		    ch == Bracket::Q1_flat())
			return Kind::Zero;
		return Kind::Unknown;
	}
};

// 3d polynomial cascade f0 = (0, x1^2, x2), f1 = (1, 0, 0); here
//   f_{M1} = (0, 2 x1, 0), f_{W1} = (0, 2, 0), f_{M2} = (0, 0, 2 x1),
// so f_{W1} and f_{M2} are pointwise independent away from x1 = 0; the
// chain dies afterwards (f_{M3} = f_{W2} = 0).
class QuadraticFull final : public TestSystem {
public:
	std::string name() const override { return "quadraticfull"; }
	int dim() const override { return 3; }

	bool supports(const Bracket &ch) const override { return kind(ch) != Kind::Unknown; }

	Vec flow(const Bracket &ch, double s, const Vec &x) const override
	{
		Vec y = x;
		switch (kind(ch))
		{
		case Kind::Drift:
			y[1] += s * x[0] * x[0];
			y[2] += s * x[1] + 0.5 * s * s * x[0] * x[0];
			break;
		case Kind::X1:
			y[0] += s;
			break;
		case Kind::M1:
			y[1] += 2 * s * x[0];
			break;
		case Kind::W1:
			y[1] += 2 * s;
			break;
		case Kind::M2:
			y[2] += 2 * s * x[0];
			break;
		case Kind::Zero:
			break;
		case Kind::Unknown:
			throw std::domain_error("quadraticfull: unsupported channel " + ch.str());
		}
		return y;
	}

	Vec reference(double t, const Vec &x) const override
	{
		double a = x[0];
		Vec y(3);
		y[0] = a + t;
		y[1] = x[1] + (std::pow(a + t, 3) - a * a * a) / 3;
		y[2] = x[2] + t * x[1] +
		       ((std::pow(a + t, 4) - std::pow(a, 4)) / 4 - a * a * a * t) / 3;
		return y;
	}

	Vec field(const Bracket &ch, const Vec &x) const override
	{
		Vec v = Vec::Zero(3);
		switch (kind(ch))
		{
		case Kind::Drift:
			v[1] = x[0] * x[0];
			v[2] = x[1];
			break;
		case Kind::X1:
			v[0] = 1;
			break;
		case Kind::M1:
			v[1] = 2 * x[0];
			break;
		case Kind::W1:
			v[1] = 2;
			break;
		case Kind::M2:
			v[2] = 2 * x[0];
			break;
		case Kind::Zero:
			break;
		case Kind::Unknown:
			throw std::domain_error("quadraticfull: unsupported channel " + ch.str());
		}
		return v;
	}

	Vec default_state() const override
	{
		Vec x(3);
		x << 0.6, -0.2, 0.1;
		return x;
	}

private:
	enum class Kind { Drift, X1, M1, W1, M2, Zero, Unknown };

	static Kind kind(const Bracket &ch)
	{
		if (ch.is_leaf())
			return ch.letter() == 0 ? Kind::Drift : Kind::X1;
		if (ch == Bracket::M(1))
			return Kind::M1;
		if (ch == Bracket::W(1))
			return Kind::W1;
		if (ch == Bracket::M(2))
			return Kind::M2;
		for (int nu = 3; nu <= 6; ++nu)
			if (ch == Bracket::M(nu))
				return Kind::Zero;
		for (int j = 2; j <= 3; ++j)
			if (ch == Bracket::W(j))
				return Kind::Zero;
		if (ch == Bracket::pair(Bracket::leaf(1), Bracket::W(1)) || ch == Bracket::Q1())
			return Kind::Zero;
		return Kind::Unknown;
	}
};

Mat linear_a0()
{
	Mat a;
	a << 0, 1, 0, 0, //
	    -1, 0, 1, 0, //
	    0, -1, 0, 1, //
	    0, 0, -1, 0;
	return a;
}

Mat linear_a1()
{
	Mat b;
	b << 0, 0, 0, 0, //
	    1, 0, 0, 0, //
	    0, 1, 0, 0, //
	    0, 0, 1, 0;
	return b;
}

Mat linear_b0()
{
	Mat a;
	a << 0, 1, 0, 0, //
	    0, 0, 1, 0, //
	    0, 0, 0, 1, //
	    -1, 0, 0, 0;
	return a;
}

Mat linear_b1()
{
	Mat b;
	b << 1, 0, 0, 0, //
	    0, -1, 1, 0, //
	    0, 0, 1, 0, //
	    1, 0, 0, -1;
	return b;
}

} // namespace

std::vector<std::shared_ptr<const TestSystem>> builtin_systems()
{
	static const std::vector<std::shared_ptr<const TestSystem>> all = {
	    std::make_shared<LinearPair>("linearpair", linear_a0(), linear_a1()),
	    std::make_shared<LinearPair>("linearpairb", linear_b0(), linear_b1()),
	    std::make_shared<Quadratic>(),
	    std::make_shared<QuadraticFull>(),
	};
	return all;
}

std::shared_ptr<const TestSystem> find_system(const std::string &name)
{
	for (auto &s : builtin_systems())
		if (s->name() == name)
			return s;
	throw std::invalid_argument("unknown test system: " + name);
}

std::vector<double> default_grid()
{
	std::vector<double> g;
	for (int k = 3; k <= 12; ++k)
		g.push_back(std::ldexp(1.0, -k));
	return g;
}

namespace {

// One scheme step of size t: stages act rightmost-first (the last stage is
// the earliest in time), each stage is jump-then-drift.
Vec apply_scheme(const Scheme &s, const TestSystem &sys, double t, Vec x)
{
	for (auto it = s.stages.rbegin(); it != s.stages.rend(); ++it)
	{
		if (!is_zero(it->beta))
		{
			if (!sys.supports(it->channel))
				throw std::domain_error(sys.name() + ": unsupported channel " +
				                        it->channel.str());
			double amp = rat_to_double(it->beta.re) *
			             std::pow(t, it->channel.length());
			x = sys.flow(it->channel, amp, x);
		}
		if (sgn(it->alpha) != 0)
			x = sys.flow(Bracket::leaf(0), rat_to_double(it->alpha) * t, x);
	}
	return x;
}

VecC apply_scheme_complex(const Scheme &s, const TestSystem &sys, double t, VecC x)
{
	for (auto it = s.stages.rbegin(); it != s.stages.rend(); ++it)
	{
		if (!is_zero(it->beta))
		{
			std::complex<double> amp =
			    it->beta.to_complex() * std::pow(t, it->channel.length());
			x = sys.flow_complex(it->channel, amp, x);
		}
		if (sgn(it->alpha) != 0)
			x = sys.flow_complex(Bracket::leaf(0), rat_to_double(it->alpha) * t, x);
	}
	return x;
}

void fit_loglog(ConvergenceReport &rep)
{
	// Points below the precision floor (or exactly zero) carry no slope
	// information; pre-asymptotic points at the large-T end are dropped
	// until the log-log fit is close to linear.
	std::vector<std::pair<double, double>> pts;
	for (auto &[t, e] : rep.samples)
		if (e > rep.error_floor)
			pts.emplace_back(std::log(t), std::log(e));

	rep.exact = true;
	for (auto &[t, e] : rep.samples)
		rep.exact = rep.exact && e <= 1e-12;
	if (rep.exact || pts.size() < 2)
	{
		rep.points_used = 0;
		return;
	}

	auto fit = [&](size_t lo) {
		size_t n = pts.size() - lo;
		double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
		for (size_t i = lo; i < pts.size(); ++i)
		{
			sx += pts[i].first;
			sy += pts[i].second;
			sxx += pts[i].first * pts[i].first;
			sxy += pts[i].first * pts[i].second;
			syy += pts[i].second * pts[i].second;
		}
		double nn = static_cast<double>(n);
		double det = nn * sxx - sx * sx;
		double slope = (nn * sxy - sx * sy) / det;
		double icept = (sy - slope * sx) / nn;
		double sse = 0, stot = 0;
		for (size_t i = lo; i < pts.size(); ++i)
		{
			double r = pts[i].second - (icept + slope * pts[i].first);
			sse += r * r;
			double d = pts[i].second - sy / nn;
			stot += d * d;
		}
		double r2 = stot > 0 ? 1 - sse / stot : 1;
		return std::tuple(slope, icept, r2);
	};

	// samples are ordered largest T first; drop from the front
	std::sort(pts.begin(), pts.end(),
	          [](auto &a, auto &b) { return a.first > b.first; });
	size_t lo = 0;
	auto [slope, icept, r2] = fit(lo);
	while (pts.size() - lo > 3 && r2 < 0.995)
	{
		++lo;
		std::tie(slope, icept, r2) = fit(lo);
	}
	rep.slope = slope;
	rep.intercept = icept;
	rep.r2 = r2;
	rep.points_used = static_cast<int>(pts.size() - lo);
}

} // namespace

std::string ConvergenceReport::csv() const
{
	std::ostringstream os;
	os << "T,error\n";
	os.precision(17);
	for (auto &[t, e] : samples)
		os << t << "," << e << "\n";
	return os.str();
}

std::string ConvergenceReport::summary() const
{
	std::ostringstream os;
	os.precision(6);
	if (exact)
	{
		os << "exact (error at reference precision)";
		return os.str();
	}
	os << "slope " << slope << " (order ~" << estimated_order() << "), r2 " << r2
	   << ", points " << points_used;
	return os.str();
}

ConvergenceReport empirical_order(const Scheme &s, const TestSystem &sys,
                                  const std::vector<double> &grid, const Vec &x0)
{
	bool complex_path = !s.is_real();
	if (complex_path && !sys.supports_complex())
		throw std::domain_error(sys.name() + " cannot verify complex coefficients");

	ConvergenceReport rep;
	for (double t : grid)
	{
		double err;
		if (complex_path)
		{
			VecC z = apply_scheme_complex(s, sys, t, x0.cast<std::complex<double>>());
			err = (z - sys.reference_complex(t, x0.cast<std::complex<double>>())).norm();
		}
		else
		{
			Vec y = apply_scheme(s, sys, t, x0);
			err = (y - sys.reference(t, x0)).norm();
		}
		rep.samples.emplace_back(t, err);
	}
	fit_loglog(rep);
	return rep;
}

ConvergenceReport empirical_order_multistep(const Scheme &s, const TestSystem &sys,
                                            double t_final,
                                            const std::vector<int> &step_counts,
                                            const Vec &x0)
{
	ConvergenceReport rep;
	for (int n : step_counts)
	{
		double h = t_final / n;
		Vec y = x0;
		for (int i = 0; i < n; ++i)
			y = apply_scheme(s, sys, h, y);
		rep.samples.emplace_back(h, (y - sys.reference(t_final, x0)).norm());
	}
	fit_loglog(rep);
	return rep;
}

DependenceVerdict dependence_test(const TestSystem &sys, int degree)
{
	if (degree != 3 && degree != 5)
		throw std::invalid_argument("dependence test exists at degrees 3 and 5");
	DependenceVerdict v;
	v.first = degree == 3 ? Bracket::M(2) : Bracket::M(4);
	v.second = degree == 3 ? Bracket::W(1) : Bracket::W(2);

	Vec base = sys.default_state();
	v.dependent = true;
	for (int k = 0; k < 5; ++k)
	{
		Vec x = base * (0.5 + 0.25 * k);
		x[0] += 0.1 * (k + 1);
		Eigen::MatrixXd m(2, sys.dim());
		m.row(0) = sys.field(v.first, x).transpose();
		m.row(1) = sys.field(v.second, x).transpose();
		Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
		double s0 = svd.singularValues()(0);
		double s1 = svd.singularValues()(1);
		double ratio = s0 > 1e-14 ? s1 / s0 : 0.0;
		v.max_rank_ratio = std::max(v.max_rank_ratio, ratio);
		if (ratio > 1e-10)
			v.dependent = false;
	}
	return v;
}

} // namespace liesplit
