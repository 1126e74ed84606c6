#pragma once

#include <complex>
#include <string>

#include <gmpxx.h>

namespace liesplit {

// Exact rational scalar, always kept in lowest terms with positive
// denominator (mpq_class maintains canonical form through arithmetic).
using Rat = mpq_class;

Rat rat_make(long num, long den);
Rat rat_parse(const std::string &text); // "3/4", "-2"; throws std::invalid_argument
std::string rat_str(const Rat &q);
Rat rat_from_double(double x); // exact dyadic embedding
double rat_to_double(const Rat &q);

inline bool is_zero(const Rat &q) { return sgn(q) == 0; }

// Gaussian rational: a + b*i with exact rational parts. Closed under
// +,-,*,/ like the rationals; used wherever scheme coefficients may be
// complex.
struct GaussRat {
	Rat re, im;

	GaussRat() : re(0), im(0) {}
	GaussRat(int n) : re(n), im(0) {}
	GaussRat(long n) : re(n), im(0) {}
	GaussRat(const Rat &r) : re(r), im(0) {}
	GaussRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

	bool is_real() const { return sgn(im) == 0; }

	GaussRat &operator+=(const GaussRat &o)
	{
		re += o.re;
		im += o.im;
		return *this;
	}
	GaussRat &operator-=(const GaussRat &o)
	{
		re -= o.re;
		im -= o.im;
		return *this;
	}
	GaussRat &operator*=(const GaussRat &o)
	{
		Rat r = re * o.re - im * o.im;
		im = re * o.im + im * o.re;
		re = r;
		return *this;
	}
	GaussRat &operator/=(const GaussRat &o);

	friend GaussRat operator+(GaussRat a, const GaussRat &b) { return a += b; }
	friend GaussRat operator-(GaussRat a, const GaussRat &b) { return a -= b; }
	friend GaussRat operator*(GaussRat a, const GaussRat &b) { return a *= b; }
	friend GaussRat operator/(GaussRat a, const GaussRat &b) { return a /= b; }
	friend GaussRat operator-(const GaussRat &a) { return GaussRat(-a.re, -a.im); }
	friend bool operator==(const GaussRat &a, const GaussRat &b)
	{
		return a.re == b.re && a.im == b.im;
	}

	std::complex<double> to_complex() const
	{
		return {rat_to_double(re), rat_to_double(im)};
	}
};

inline bool is_zero(const GaussRat &z) { return sgn(z.re) == 0 && sgn(z.im) == 0; }

GaussRat gauss_parse(const std::string &text); // "1/2+1/6i", "-i", "3/4"
std::string gauss_str(const GaussRat &z);

inline std::string scalar_str(const Rat &q) { return rat_str(q); }
inline std::string scalar_str(const GaussRat &z) { return gauss_str(z); }

// Embedding of exact rationals into the scalar types used by the
// templated algebra.
template <class S> S scalar_cast(const Rat &q);
template <> inline Rat scalar_cast<Rat>(const Rat &q) { return q; }
template <> inline GaussRat scalar_cast<GaussRat>(const Rat &q) { return GaussRat(q); }

} // namespace liesplit
