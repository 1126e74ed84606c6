#include "liesplit/scheme_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "liesplit/errors.hpp"

namespace liesplit {

namespace {

bool looks_decimal(const std::string &s)
{
	for (size_t i = 0; i < s.size(); ++i)
	{
		char c = s[i];
		if (c == '.')
			return true;
		if ((c == 'e' || c == 'E') && i > 0 &&
		    std::isdigit(static_cast<unsigned char>(s[i - 1])))
			return true;
	}
	return false;
}

std::pair<Rat, bool> parse_real_literal(const std::string &s)
{
	if (looks_decimal(s))
	{
		size_t pos = 0;
		double v = std::stod(s, &pos);
		if (pos != s.size())
			throw std::invalid_argument("bad numeric literal: " + s);
		return {rat_from_double(v), false};
	}
	return {rat_parse(s), true};
}

std::string format_real(const Rat &q, bool exact)
{
	if (exact)
		return rat_str(q);
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.17g", rat_to_double(q));
	std::string s = buf;
	if (!looks_decimal(s) && s.find("inf") == std::string::npos &&
	    s.find("nan") == std::string::npos)
		s += ".0";
	return s;
}

[[noreturn]] void fail(const DirectiveLine &line, const std::string &msg)
{
	throw ParseError(msg + " (line " + std::to_string(line.number) + ")", line.number, 0);
}

} // namespace

std::vector<DirectiveLine> tokenize_directives(std::istream &in)
{
	std::vector<DirectiveLine> lines;
	std::string raw;
	int num = 0;
	while (std::getline(in, raw))
	{
		++num;
		if (auto h = raw.find('#'); h != std::string::npos)
			raw.erase(h);
		std::istringstream ls(raw);
		DirectiveLine line{num, {}};
		std::string tok;
		while (ls >> tok)
			line.tokens.push_back(tok);
		if (!line.tokens.empty())
			lines.push_back(std::move(line));
	}
	return lines;
}

std::pair<GaussRat, bool> parse_coefficient(const std::string &text)
{
	std::string s = text;
	if (s.empty())
		throw std::invalid_argument("empty coefficient");

	if (s.back() == 'i')
	{
		// split real and imaginary parts at the last +/- that is not a
		// leading sign and not an exponent sign
		size_t split = std::string::npos;
		for (size_t i = 1; i < s.size(); ++i)
		{
			if (s[i] != '+' && s[i] != '-')
				continue;
			if (s[i - 1] == 'e' || s[i - 1] == 'E')
				continue;
			split = i;
		}
		auto imag_of = [&](std::string t) -> std::pair<Rat, bool> {
			t.pop_back(); // 'i'
			if (t.empty() || t == "+")
				return {Rat(1), true};
			if (t == "-")
				return {Rat(-1), true};
			return parse_real_literal(t);
		};
		if (split == std::string::npos)
		{
			auto [im, ok] = imag_of(s);
			return {GaussRat(Rat(0), im), ok};
		}
		auto [re, ok1] = parse_real_literal(s.substr(0, split));
		auto [im, ok2] = imag_of(s.substr(split));
		return {GaussRat(re, im), ok1 && ok2};
	}
	auto [re, ok] = parse_real_literal(s);
	return {GaussRat(re), ok};
}

std::string format_coefficient(const GaussRat &value, bool exact)
{
	if (exact)
		return gauss_str(value);
	if (value.is_real())
		return format_real(value.re, false);
	std::string im = format_real(abs(value.im), false);
	return format_real(value.re, false) + (sgn(value.im) < 0 ? "-" : "+") + im + "i";
}

Scheme parse_scheme(std::istream &in)
{
	auto lines = tokenize_directives(in);
	if (lines.empty() || lines[0].tokens[0] != "scheme")
		throw ParseError("expected 'scheme' header", lines.empty() ? 1 : lines[0].number, 0);

	Scheme s;
	bool exact = true;
	for (size_t i = 1; i < lines.size(); ++i)
	{
		const DirectiveLine &line = lines[i];
		const auto &t = line.tokens;
		try
		{
			if (t[0] == "alpha-domain" && t.size() == 2)
				s.alpha_domain = alpha_domain_from_name(t[1]);
			else if (t[0] == "beta-domain" && t.size() == 2)
				s.beta_domain = beta_domain_from_name(t[1]);
			else if (t[0] == "stage" && t.size() == 4)
			{
				auto [alpha, ea] = parse_coefficient(t[1]);
				if (!alpha.is_real())
					fail(line, "alpha must be real");
				Bracket ch = Bracket::parse(t[2]);
				auto [beta, eb] = parse_coefficient(t[3]);
				exact = exact && ea && eb;
				s.stages.push_back({alpha.re, ch, beta});
			}
			else
				fail(line, "unrecognized scheme directive '" + t[0] + "'");
		}
		catch (const std::exception &e)
		{
			fail(line, e.what());
		}
	}
	if (s.stages.empty())
		throw ParseError("scheme has no stages", lines[0].number, 0);
	s.exact = exact;
	s.check_domains();
	return s;
}

std::string format_scheme(const Scheme &s)
{
	std::ostringstream os;
	os << "scheme\n";
	os << "alpha-domain " << alpha_domain_name(s.alpha_domain) << "\n";
	os << "beta-domain " << beta_domain_name(s.beta_domain) << "\n";
	for (auto &st : s.stages)
		os << "stage " << format_coefficient(GaussRat(st.alpha), s.exact) << " "
		   << st.channel.str() << " " << format_coefficient(st.beta, s.exact) << "\n";
	return os.str();
}

DiracControl parse_control(std::istream &in)
{
	auto lines = tokenize_directives(in);
	if (lines.empty() || lines[0].tokens[0] != "control")
		throw ParseError("expected 'control' header", lines.empty() ? 1 : lines[0].number, 0);

	DiracControl c;
	bool have_horizon = false;
	for (size_t i = 1; i < lines.size(); ++i)
	{
		const DirectiveLine &line = lines[i];
		const auto &t = line.tokens;
		try
		{
			if (t[0] == "horizon" && t.size() == 2)
			{
				c.horizon = rat_parse(t[1]);
				have_horizon = true;
			}
			else if (t[0] == "impulse" && t.size() == 4)
				c.impulses.push_back(
				    {rat_parse(t[1]), Bracket::parse(t[2]), parse_coefficient(t[3]).first});
			else
				fail(line, "unrecognized control directive '" + t[0] + "'");
		}
		catch (const std::exception &e)
		{
			fail(line, e.what());
		}
	}
	if (!have_horizon)
		throw ParseError("control file missing horizon", lines[0].number, 0);
	c.check();
	return c;
}

std::string format_control(const DiracControl &c)
{
	std::ostringstream os;
	os << "control\n";
	os << "horizon " << rat_str(c.horizon) << "\n";
	for (auto &im : c.impulses)
		os << "impulse " << rat_str(im.time) << " " << im.channel.str() << " "
		   << gauss_str(im.amplitude) << "\n";
	return os.str();
}

DiracControl parse_control_or_scheme(std::istream &in)
{
	std::stringstream buf;
	buf << in.rdbuf();
	std::string text = buf.str();
	std::istringstream probe(text);
	std::string first;
	probe >> first;
	std::istringstream again(text);
	if (first == "control")
		return parse_control(again);
	Scheme s = parse_scheme(again);
	if (!s.exact)
		throw std::domain_error("obstruction functionals need exact coefficients");
	return scheme_to_control(s);
}

namespace {

std::ifstream open_or_throw(const std::string &path)
{
	std::ifstream in(path);
	if (!in)
		throw ParseError("cannot open " + path, 0, 0);
	return in;
}

} // namespace

Scheme load_scheme_file(const std::string &path)
{
	auto in = open_or_throw(path);
	return parse_scheme(in);
}

DiracControl load_control_or_scheme_file(const std::string &path)
{
	auto in = open_or_throw(path);
	return parse_control_or_scheme(in);
}

void save_scheme_file(const std::string &path, const Scheme &s)
{
	std::ofstream out(path);
	if (!out)
		throw std::runtime_error("cannot write " + path);
	out << format_scheme(s);
}

} // namespace liesplit
