#pragma once

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "liesplit/scalar.hpp"

namespace liesplit {

// Monomial of the free associative algebra: a finite sequence of generator
// indices. The empty word is the unit. Letters are stored one per byte.
class Word {
public:
	Word() = default;

	static Word single(int letter)
	{
		Word w;
		w.letters_.push_back(static_cast<char>(letter));
		return w;
	}

	// Convenience: "01" -> word X0 X1 (single-digit generator indices).
	static Word from_digits(const std::string &digits)
	{
		Word w;
		for (char c : digits)
		{
			if (c < '0' || c > '9')
				throw std::invalid_argument("bad word digits: " + digits);
			w.letters_.push_back(static_cast<char>(c - '0'));
		}
		return w;
	}

	int degree() const { return static_cast<int>(letters_.size()); }
	int letter(int i) const { return letters_[static_cast<size_t>(i)]; }

	Word concat(const Word &o) const
	{
		Word w;
		w.letters_ = letters_ + o.letters_;
		return w;
	}

	bool operator==(const Word &) const = default;
	auto operator<=>(const Word &) const = default;

	const std::string &bytes() const { return letters_; }

	std::string str() const
	{
		if (letters_.empty())
			return "1";
		std::string s;
		for (char c : letters_)
			s += "X" + std::to_string(static_cast<int>(c));
		return s;
	}

private:
	std::string letters_;
};

struct WordHash {
	size_t operator()(const Word &w) const { return std::hash<std::string>{}(w.bytes()); }
};

// Element of the truncated free associative algebra A^N(X): a finite map
// word -> scalar with no zero values and no word of degree > N. Values are
// immutable from a caller's point of view once built; all operations return
// fresh polynomials, so sharing across threads is safe. Nothing limits the
// truncation degree, but exact arithmetic stays comfortable only up to
// about N = 10 over two generators (2^11 - 1 monomials).
template <class S> class Polynomial {
public:
	using TermMap = std::unordered_map<Word, S, WordHash>;

	explicit Polynomial(int truncation_degree) : trunc_(truncation_degree)
	{
		if (truncation_degree < 0)
			throw std::invalid_argument("negative truncation degree");
		buckets_.resize(static_cast<size_t>(truncation_degree) + 1);
	}

	static Polynomial zero(int n) { return Polynomial(n); }

	static Polynomial unit(int n) { return constant(n, S(1)); }

	static Polynomial constant(int n, const S &c)
	{
		Polynomial p(n);
		p.add_term(Word(), c);
		return p;
	}

	static Polynomial monomial(int n, const Word &w, const S &c)
	{
		Polynomial p(n);
		p.add_term(w, c);
		return p;
	}

	static Polynomial generator(int n, int letter)
	{
		return monomial(n, Word::single(letter), S(1));
	}

	int truncation_degree() const { return trunc_; }

	bool is_zero() const
	{
		for (auto &b : buckets_)
			if (!b.empty())
				return false;
		return true;
	}

	S coeff(const Word &w) const
	{
		if (w.degree() > trunc_)
			return S(0);
		auto &b = buckets_[static_cast<size_t>(w.degree())];
		auto it = b.find(w);
		return it == b.end() ? S(0) : it->second;
	}

	S constant_term() const { return coeff(Word()); }

	// Accumulates c onto the coefficient of w, discarding words beyond the
	// truncation degree and purging zero results.
	void add_term(const Word &w, const S &c)
	{
		if (w.degree() > trunc_ || liesplit::is_zero(c))
			return;
		auto &b = buckets_[static_cast<size_t>(w.degree())];
		auto [it, fresh] = b.try_emplace(w, c);
		if (!fresh)
		{
			it->second += c;
			if (liesplit::is_zero(it->second))
				b.erase(it);
		}
	}

	Polynomial &operator+=(const Polynomial &o)
	{
		check_same(o);
		for (auto &b : o.buckets_)
			for (auto &[w, c] : b)
				add_term(w, c);
		return *this;
	}

	Polynomial &operator-=(const Polynomial &o)
	{
		check_same(o);
		for (auto &b : o.buckets_)
			for (auto &[w, c] : b)
				add_term(w, S(-c));
		return *this;
	}

	Polynomial &scale(const S &c)
	{
		if (liesplit::is_zero(c))
		{
			for (auto &b : buckets_)
				b.clear();
			return *this;
		}
		for (auto &b : buckets_)
			for (auto &[w, v] : b)
				v *= c;
		return *this;
	}

	friend Polynomial operator+(Polynomial a, const Polynomial &b) { return a += b; }
	friend Polynomial operator-(Polynomial a, const Polynomial &b) { return a -= b; }
	friend Polynomial operator*(const S &c, Polynomial p) { return p.scale(c); }

	bool operator==(const Polynomial &o) const
	{
		if (trunc_ != o.trunc_)
			return false;
		for (int n = 0; n <= trunc_; ++n)
		{
			auto &a = buckets_[static_cast<size_t>(n)];
			auto &b = o.buckets_[static_cast<size_t>(n)];
			if (a.size() != b.size())
				return false;
			for (auto &[w, c] : a)
			{
				auto it = b.find(w);
				if (it == b.end() || !(it->second == c))
					return false;
			}
		}
		return true;
	}

	const TermMap &terms_of_degree(int n) const
	{
		return buckets_[static_cast<size_t>(n)];
	}

	size_t term_count() const
	{
		size_t k = 0;
		for (auto &b : buckets_)
			k += b.size();
		return k;
	}

	std::vector<std::pair<Word, S>> sorted_terms() const
	{
		std::vector<std::pair<Word, S>> out;
		out.reserve(term_count());
		for (auto &b : buckets_)
			for (auto &[w, c] : b)
				out.emplace_back(w, c);
		std::sort(out.begin(), out.end(), [](auto &a, auto &b) {
			return std::pair(a.first.degree(), a.first.bytes()) <
			       std::pair(b.first.degree(), b.first.bytes());
		});
		return out;
	}

	std::string str() const
	{
		auto ts = sorted_terms();
		if (ts.empty())
			return "0";
		std::string s;
		for (auto &[w, c] : ts)
		{
			if (!s.empty())
				s += " + ";
			std::string cs = scalar_str(c);
			if (w.degree() == 0)
				s += cs;
			else if (cs == "1")
				s += w.str();
			else
				s += "(" + cs + ")*" + w.str();
		}
		return s;
	}

private:
	void check_same(const Polynomial &o) const
	{
		if (trunc_ != o.trunc_)
			throw std::invalid_argument("truncation degree mismatch");
	}

	int trunc_;
	std::vector<TermMap> buckets_;
};

// pi_N(a*b): words concatenate, products beyond the truncation degree are
// discarded. Iterates degree pairs (i, j <= N-i) so discarded terms are
// never formed.
template <class S>
Polynomial<S> mul_truncated(const Polynomial<S> &a, const Polynomial<S> &b)
{
	if (a.truncation_degree() != b.truncation_degree())
		throw std::invalid_argument("truncation degree mismatch");
	int n = a.truncation_degree();
	Polynomial<S> out(n);
	for (int i = 0; i <= n; ++i)
	{
		auto &ai = a.terms_of_degree(i);
		if (ai.empty())
			continue;
		for (int j = 0; j + i <= n; ++j)
		{
			auto &bj = b.terms_of_degree(j);
			if (bj.empty())
				continue;
			for (auto &[wa, ca] : ai)
				for (auto &[wb, cb] : bj)
					out.add_term(wa.concat(wb), S(ca * cb));
		}
	}
	return out;
}

// [a,b] = ab - ba.
template <class S>
Polynomial<S> bracket(const Polynomial<S> &a, const Polynomial<S> &b)
{
	return mul_truncated(a, b) - mul_truncated(b, a);
}

// Degree-n homogeneous component (kept at the same truncation degree).
template <class S> Polynomial<S> grade(const Polynomial<S> &p, int n)
{
	if (n < 0 || n > p.truncation_degree())
		throw std::domain_error("grade out of range");
	Polynomial<S> out(p.truncation_degree());
	for (auto &[w, c] : p.terms_of_degree(n))
		out.add_term(w, c);
	return out;
}

// exp_N(s) = sum_{k<=N} pi_N(s^k)/k!; requires zero constant term.
template <class S> Polynomial<S> exp_truncated(const Polynomial<S> &s)
{
	if (!liesplit::is_zero(s.constant_term()))
		throw std::domain_error("exp of series with nonzero constant term");
	int n = s.truncation_degree();
	Polynomial<S> out = Polynomial<S>::unit(n);
	Polynomial<S> term = Polynomial<S>::unit(n);
	for (int k = 1; k <= n; ++k)
	{
		term = mul_truncated(term, s);
		term.scale(scalar_cast<S>(rat_make(1, k)));
		if (term.is_zero())
			break;
		out += term;
	}
	return out;
}

// log_N(p) = sum_{k<=N} (-1)^{k+1} pi_N((p-1)^k)/k; requires constant term 1.
template <class S> Polynomial<S> log_truncated(const Polynomial<S> &p)
{
	if (!(p.constant_term() == S(1)))
		throw std::domain_error("log of series with constant term != 1");
	int n = p.truncation_degree();
	Polynomial<S> s = p - Polynomial<S>::unit(n);
	Polynomial<S> out(n);
	Polynomial<S> pw = Polynomial<S>::unit(n);
	for (int k = 1; k <= n; ++k)
	{
		pw = mul_truncated(pw, s);
		if (pw.is_zero())
			break;
		Polynomial<S> term = pw;
		term.scale(scalar_cast<S>(rat_make(k % 2 ? 1 : -1, k)));
		out += term;
	}
	return out;
}

// Re-truncation to a lower degree.
template <class S> Polynomial<S> truncate(const Polynomial<S> &p, int n)
{
	Polynomial<S> out(n);
	for (int k = 0; k <= std::min(n, p.truncation_degree()); ++k)
		for (auto &[w, c] : p.terms_of_degree(k))
			out.add_term(w, c);
	return out;
}

template <class To, class From>
Polynomial<To> convert_poly(const Polynomial<From> &p)
{
	Polynomial<To> out(p.truncation_degree());
	for (int k = 0; k <= p.truncation_degree(); ++k)
		for (auto &[w, c] : p.terms_of_degree(k))
			out.add_term(w, To(c));
	return out;
}

} // namespace liesplit
