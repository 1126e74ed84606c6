#include "liesplit/scalar.hpp"

#include <cctype>
#include <stdexcept>

namespace liesplit {

Rat rat_make(long num, long den)
{
	if (den == 0)
		throw std::invalid_argument("rational with zero denominator");
	Rat q(num, den);
	q.canonicalize();
	return q;
}

Rat rat_parse(const std::string &text)
{
	std::string s;
	for (char c : text)
		if (!std::isspace(static_cast<unsigned char>(c)))
			s.push_back(c);
	if (!s.empty() && s.front() == '+')
		s.erase(s.begin());
	if (s.empty())
		throw std::invalid_argument("empty rational literal");
	for (char c : s)
		if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-'))
			throw std::invalid_argument("bad rational literal: " + text);
	Rat q;
	if (q.set_str(s, 10) != 0)
		throw std::invalid_argument("bad rational literal: " + text);
	if (sgn(q.get_den()) == 0)
		throw std::invalid_argument("rational with zero denominator: " + text);
	q.canonicalize();
	return q;
}

std::string rat_str(const Rat &q) { return q.get_str(); }

Rat rat_from_double(double x)
{
	Rat q(x); // exact: doubles are dyadic rationals
	q.canonicalize();
	return q;
}

double rat_to_double(const Rat &q) { return q.get_d(); }

GaussRat &GaussRat::operator/=(const GaussRat &o)
{
	Rat n = o.re * o.re + o.im * o.im;
	if (sgn(n) == 0)
		throw std::domain_error("division by zero Gaussian rational");
	Rat r = (re * o.re + im * o.im) / n;
	im = (im * o.re - re * o.im) / n;
	re = r;
	return *this;
}

GaussRat gauss_parse(const std::string &text)
{
	std::string s;
	for (char c : text)
		if (!std::isspace(static_cast<unsigned char>(c)))
			s.push_back(c);
	if (s.empty())
		throw std::invalid_argument("empty scalar literal");

	// Split "a+bi" / "a-bi" at the last sign that is not a leading sign
	// and not part of "/": rational literals contain no inner signs, so
	// any '+'/'-' past position 0 separates the parts.
	size_t split = std::string::npos;
	for (size_t i = 1; i < s.size(); ++i)
		if (s[i] == '+' || s[i] == '-')
			split = i;

	auto parse_imag = [](std::string t) -> Rat {
		// trailing 'i' with optional coefficient
		if (t.empty() || t.back() != 'i')
			throw std::invalid_argument("bad imaginary part");
		t.pop_back();
		if (t.empty() || t == "+")
			return Rat(1);
		if (t == "-")
			return Rat(-1);
		return rat_parse(t);
	};

	if (s.back() == 'i')
	{
		if (split == std::string::npos)
			return GaussRat(Rat(0), parse_imag(s));
		return GaussRat(rat_parse(s.substr(0, split)), parse_imag(s.substr(split)));
	}
	if (split != std::string::npos && s.find('i') != std::string::npos)
		throw std::invalid_argument("bad scalar literal: " + text);
	return GaussRat(rat_parse(s));
}

std::string gauss_str(const GaussRat &z)
{
	if (sgn(z.im) == 0)
		return rat_str(z.re);
	std::string im = rat_str(abs(z.im));
	std::string tail = (im == "1" ? "" : im) + "i";
	if (sgn(z.re) == 0)
		return (sgn(z.im) < 0 ? "-" : "") + tail;
	return rat_str(z.re) + (sgn(z.im) < 0 ? "-" : "+") + tail;
}

} // namespace liesplit
