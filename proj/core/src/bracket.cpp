#include "liesplit/bracket.hpp"

#include <cctype>
#include <stdexcept>

#include "liesplit/errors.hpp"

namespace liesplit {

Bracket Bracket::leaf(int letter)
{
	if (letter < 0 || letter >= kMaxLetters)
		throw std::invalid_argument("generator index out of range");
	auto n = std::make_shared<Node>();
	n->letter = static_cast<int8_t>(letter);
	n->length = 1;
	n->counts[static_cast<size_t>(letter)] = 1;
	n->hash = 0x9e3779b97f4a7c15ull + static_cast<size_t>(letter);
	Bracket b;
	b.n_ = std::move(n);
	return b;
}

Bracket Bracket::pair(const Bracket &left, const Bracket &right)
{
	if (!left.valid() || !right.valid())
		throw std::invalid_argument("bracket of empty handle");
	auto n = std::make_shared<Node>();
	n->left = left.n_;
	n->right = right.n_;
	n->length = left.length() + right.length();
	for (int j = 0; j < kMaxLetters; ++j)
		n->counts[static_cast<size_t>(j)] =
		    static_cast<uint16_t>(left.count(j) + right.count(j));
	size_t h = left.hash();
	h ^= right.hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
	n->hash = h;
	Bracket b;
	b.n_ = std::move(n);
	return b;
}

bool Bracket::operator==(const Bracket &o) const
{
	if (n_ == o.n_)
		return true;
	if (!n_ || !o.n_)
		return false;
	if (n_->hash != o.n_->hash || n_->letter != o.n_->letter ||
	    n_->length != o.n_->length)
		return false;
	if (is_leaf())
		return true;
	return left() == o.left() && right() == o.right();
}

std::string Bracket::str() const
{
	if (is_leaf())
		return "X" + std::to_string(letter());
	return "[" + left().str() + "," + right().str() + "]";
}

namespace {

Bracket parse_at(std::string_view s, size_t &i)
{
	auto fail = [&](const std::string &msg) -> Bracket {
		throw ParseError(msg, 0, static_cast<int>(i) + 1);
	};
	while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
		++i;
	if (i >= s.size())
		return fail("unexpected end of bracket expression");
	if (s[i] == '[')
	{
		++i;
		Bracket l = parse_at(s, i);
		while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
			++i;
		if (i >= s.size() || s[i] != ',')
			return fail("expected ',' in bracket expression");
		++i;
		Bracket r = parse_at(s, i);
		while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
			++i;
		if (i >= s.size() || s[i] != ']')
			return fail("expected ']' in bracket expression");
		++i;
		return Bracket::pair(l, r);
	}
	if (s[i] == 'X' || s[i] == 'x')
	{
		++i;
		if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
			return fail("expected generator index after 'X'");
		int v = 0;
		while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
			v = v * 10 + (s[i++] - '0');
		if (v >= kMaxLetters)
			return fail("generator index out of range");
		return Bracket::leaf(v);
	}
	return fail("expected 'X<j>' or '[' in bracket expression");
}

} // namespace

Bracket Bracket::parse(std::string_view text)
{
	size_t i = 0;
	Bracket b = parse_at(text, i);
	while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
		++i;
	if (i != text.size())
		throw ParseError("trailing characters in bracket expression", 0,
		                 static_cast<int>(i) + 1);
	return b;
}

Bracket Bracket::ad(const Bracket &a, int n, const Bracket &b)
{
	Bracket out = b;
	for (int k = 0; k < n; ++k)
		out = pair(a, out);
	return out;
}

Bracket Bracket::M(int nu)
{
	if (nu < 0)
		throw std::invalid_argument("M index must be >= 0");
	Bracket out = leaf(1);
	for (int k = 0; k < nu; ++k)
		out = pair(out, leaf(0));
	return out;
}

Bracket Bracket::W(int j)
{
	if (j < 1)
		throw std::invalid_argument("W index must be >= 1");
	return ad(M(j - 1), 2, leaf(0));
}

Bracket Bracket::Q1() { return ad(leaf(1), 4, leaf(0)); }

Bracket Bracket::Q1_flat() { return ad(W(1), 2, leaf(0)); }

Polynomial<Rat> evaluate(const Bracket &b, int truncation_degree)
{
	if (b.length() > truncation_degree)
		throw std::domain_error("bracket length exceeds truncation degree");
	if (b.is_leaf())
		return Polynomial<Rat>::generator(truncation_degree, b.letter());
	return bracket(evaluate(b.left(), truncation_degree),
	               evaluate(b.right(), truncation_degree));
}

} // namespace liesplit
