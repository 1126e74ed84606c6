#pragma once

#include <cassert>
#include <complex>
#include <vector>

#include "liesplit/polynomial.hpp"

namespace liesplit {

// First-order dual over complex doubles: forward-mode derivative along a
// single search parameter.
struct CDual {
	std::complex<double> v{0.0}, d{0.0};

	CDual() = default;
	CDual(double x) : v(x) {}
	CDual(std::complex<double> x) : v(x) {}
	CDual(std::complex<double> x, std::complex<double> dx) : v(x), d(dx) {}

	CDual &operator+=(const CDual &o)
	{
		v += o.v;
		d += o.d;
		return *this;
	}
	CDual &operator-=(const CDual &o)
	{
		v -= o.v;
		d -= o.d;
		return *this;
	}
	CDual &operator*=(const CDual &o)
	{
		d = d * o.v + v * o.d;
		v *= o.v;
		return *this;
	}
	friend CDual operator+(CDual a, const CDual &b) { return a += b; }
	friend CDual operator-(CDual a, const CDual &b) { return a -= b; }
	friend CDual operator*(CDual a, const CDual &b) { return a *= b; }
	friend CDual operator*(double s, CDual a)
	{
		a.v *= s;
		a.d *= s;
		return a;
	}
	friend CDual operator/(CDual a, const CDual &b)
	{
		CDual r;
		r.v = a.v / b.v;
		r.d = (a.d - r.v * b.d) / b.v;
		return r;
	}
	friend CDual operator-(CDual a)
	{
		a.v = -a.v;
		a.d = -a.d;
		return a;
	}
};

inline CDual dual_exp(const CDual &x)
{
	std::complex<double> e = std::exp(x.v);
	return {e, e * x.d};
}

// Dense series over the two-letter truncated algebra. The word of length L
// with bits b (first letter = most significant bit) sits at index
// (1<<L) - 1 + b.
template <class S> struct DenseSeries {
	int trunc = 0;
	std::vector<S> c;

	explicit DenseSeries(int n) : trunc(n), c((size_t(2) << n) - 1) {}

	static size_t index(int len, unsigned bits)
	{
		return (size_t(1) << len) - 1 + bits;
	}

	S &at(int len, unsigned bits) { return c[index(len, bits)]; }
	const S &at(int len, unsigned bits) const { return c[index(len, bits)]; }

	static DenseSeries unit(int n)
	{
		DenseSeries s(n);
		s.c[0] = S(1.0);
		return s;
	}

	DenseSeries &operator+=(const DenseSeries &o)
	{
		for (size_t i = 0; i < c.size(); ++i)
			c[i] += o.c[i];
		return *this;
	}

	DenseSeries &scale(const S &f)
	{
		for (auto &x : c)
			x *= f;
		return *this;
	}
};

template <class S>
DenseSeries<S> dense_mul(const DenseSeries<S> &a, const DenseSeries<S> &b)
{
	int n = a.trunc;
	DenseSeries<S> out(n);
	for (int la = 0; la <= n; ++la)
		for (int lb = 0; lb + la <= n; ++lb)
		{
			size_t oa = DenseSeries<S>::index(la, 0);
			size_t ob = DenseSeries<S>::index(lb, 0);
			size_t oo = DenseSeries<S>::index(la + lb, 0);
			for (unsigned wa = 0; wa < (1u << la); ++wa)
				for (unsigned wb = 0; wb < (1u << lb); ++wb)
					out.c[oo + ((wa << lb) | wb)] += a.c[oa + wa] * b.c[ob + wb];
		}
	return out;
}

// exp of a series with zero constant term.
template <class S> DenseSeries<S> dense_exp(const DenseSeries<S> &a)
{
	int n = a.trunc;
	DenseSeries<S> out = DenseSeries<S>::unit(n);
	DenseSeries<S> term = DenseSeries<S>::unit(n);
	for (int k = 1; k <= n; ++k)
	{
		term = dense_mul(term, a);
		term.scale(S(1.0 / k));
		out += term;
	}
	return out;
}

// log of a series with constant term 1.
template <class S> DenseSeries<S> dense_log(const DenseSeries<S> &p)
{
	int n = p.trunc;
	DenseSeries<S> s = p;
	s.c[0] -= S(1.0);
	DenseSeries<S> out(n);
	DenseSeries<S> pw = DenseSeries<S>::unit(n);
	for (int k = 1; k <= n; ++k)
	{
		pw = dense_mul(pw, s);
		DenseSeries<S> term = pw;
		term.scale(S((k % 2 ? 1.0 : -1.0) / k));
		out += term;
	}
	return out;
}

// Exact two-letter polynomial -> dense floats.
template <class S> DenseSeries<S> dense_from_exact(const Polynomial<Rat> &p, int n)
{
	DenseSeries<S> out(n);
	for (int k = 0; k <= std::min(n, p.truncation_degree()); ++k)
		for (auto &[w, q] : p.terms_of_degree(k))
		{
			unsigned bits = 0;
			for (int i = 0; i < w.degree(); ++i)
			{
				assert(w.letter(i) < 2);
				bits = (bits << 1) | static_cast<unsigned>(w.letter(i));
			}
			out.at(k, bits) = S(rat_to_double(q));
		}
	return out;
}

} // namespace liesplit
