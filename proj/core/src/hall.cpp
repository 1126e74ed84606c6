#include "liesplit/hall.hpp"

#include <algorithm>
#include <stdexcept>

namespace liesplit {

namespace {

int moebius(int n)
{
	int mu = 1;
	for (int p = 2; p * p <= n; ++p)
	{
		if (n % p)
			continue;
		n /= p;
		if (n % p == 0)
			return 0;
		mu = -mu;
	}
	if (n > 1)
		mu = -mu;
	return mu;
}

long long ipow(long long b, int e)
{
	long long r = 1;
	while (e--)
		r *= b;
	return r;
}

} // namespace

long long witt_dimension(int letters, int degree)
{
	if (degree < 1)
		throw std::invalid_argument("witt dimension needs degree >= 1");
	long long acc = 0;
	for (int d = 1; d <= degree; ++d)
		if (degree % d == 0)
			acc += moebius(d) * ipow(letters, degree / d);
	return acc / degree;
}

const std::vector<Bracket> &bstar_prefix()
{
	static const std::vector<Bracket> prefix = [] {
		Bracket x0 = Bracket::leaf(0);
		Bracket x1 = Bracket::leaf(1);
		Bracket m1 = Bracket::M(1), m2 = Bracket::M(2), m3 = Bracket::M(3), m4 = Bracket::M(4);
		Bracket w1 = Bracket::W(1), w2 = Bracket::W(2);
		Bracket w1x0 = Bracket::pair(w1, x0);
		Bracket x1w1 = Bracket::pair(x1, w1);
		return std::vector<Bracket>{
		    x1,
		    m1,
		    m2,
		    m3,
		    m4,
		    w1,
		    w1x0,
		    Bracket::pair(w1x0, x0),
		    w2,
		    x1w1,
		    Bracket::pair(x1w1, x0),
		    Bracket::pair(m1, w1),
		    Bracket::Q1(),
		    x0,
		};
	}();
	return prefix;
}

int bstar_cmp(const Bracket &a, const Bracket &b)
{
	if (a == b)
		return 0;
	bool ax0 = a.is_leaf() && a.letter() == 0;
	bool bx0 = b.is_leaf() && b.letter() == 0;
	if (ax0 != bx0)
		return ax0 ? 1 : -1;
	if (a.count(1) != b.count(1))
		return a.count(1) < b.count(1) ? -1 : 1;
	if (a.length() != b.length())
		return a.length() < b.length() ? -1 : 1;
	if (a.is_leaf() && b.is_leaf())
		return a.letter() < b.letter() ? -1 : (a.letter() == b.letter() ? 0 : 1);
	if (a.is_leaf() != b.is_leaf())
		return a.is_leaf() ? -1 : 1;
	// larger subtrees first
	if (int c = bstar_cmp(b.left(), a.left()))
		return c;
	return bstar_cmp(b.right(), a.right());
}

HallPolicy hall_policy_from_name(const std::string &name)
{
	if (name == "bstar")
		return HallPolicy::BStar;
	if (name == "lyndon")
		return HallPolicy::Lyndon;
	throw std::invalid_argument("unsupported hall policy: " + name);
}

std::string hall_policy_name(HallPolicy policy)
{
	switch (policy)
	{
	case HallPolicy::BStar:
		return "bstar";
	case HallPolicy::Lyndon:
		return "lyndon";
	default:
		return "custom";
	}
}

namespace {

std::vector<Bracket> generate_bstar(int letters, int max_degree)
{
	if (letters != 2)
		throw std::invalid_argument("bstar policy is defined over exactly 2 generators");
	std::vector<std::vector<Bracket>> by_deg(static_cast<size_t>(max_degree) + 1);
	by_deg[1] = {Bracket::leaf(0), Bracket::leaf(1)};
	for (int n = 2; n <= max_degree; ++n)
		for (int i = 1; i < n; ++i)
			for (const Bracket &a : by_deg[static_cast<size_t>(i)])
				for (const Bracket &b : by_deg[static_cast<size_t>(n - i)])
				{
					if (bstar_cmp(a, b) >= 0)
						continue;
					if (!b.is_leaf() && bstar_cmp(b.left(), a) > 0)
						continue;
					by_deg[static_cast<size_t>(n)].push_back(Bracket::pair(a, b));
				}
	std::vector<Bracket> all;
	for (auto &v : by_deg)
		for (auto &b : v)
			all.push_back(b);
	std::sort(all.begin(), all.end(), bstar_less);
	return all;
}

// Mirrored standard bracketing of a Lyndon word: for the standard
// factorization w = uv (v the least proper suffix), emit (m(v), m(u)).
// The mirror matches this module's Hall-axiom orientation, in which the
// *left* factor of a pair lies below the pair and X0 is maximal; the
// standard-factorization property u = u1 u2 => u2 >= v becomes exactly the
// right-factor condition of the second axiom.
Bracket mirror_lyndon_bracketing(const std::string &w)
{
	if (w.size() == 1)
		return Bracket::leaf(w[0]);
	size_t best = 1;
	for (size_t i = 2; i < w.size(); ++i)
		if (w.compare(i, std::string::npos, w, best, std::string::npos) < 0)
			best = i;
	return Bracket::pair(mirror_lyndon_bracketing(w.substr(best)),
	                     mirror_lyndon_bracketing(w.substr(0, best)));
}

std::vector<Bracket> generate_lyndon(int letters, int max_degree)
{
	// Duval's algorithm emits Lyndon words in lexicographic order; the
	// realized Hall order is reverse-lexicographic (X1 first, X0 last).
	std::vector<std::string> words;
	std::string w(1, '\0');
	while (true)
	{
		if (static_cast<int>(w.size()) <= max_degree)
			words.push_back(w);
		std::string t = w;
		while (static_cast<int>(w.size()) < max_degree)
			w.push_back(t[w.size() % t.size()]);
		while (!w.empty() && w.back() == static_cast<char>(letters - 1))
			w.pop_back();
		if (w.empty())
			break;
		++w.back();
	}
	std::vector<Bracket> out;
	for (auto it = words.rbegin(); it != words.rend(); ++it)
		out.push_back(mirror_lyndon_bracketing(*it));
	return out;
}

} // namespace

HallBasis HallBasis::generate(int letters, int max_degree, HallPolicy policy)
{
	if (letters < 2 || letters > 6)
		throw std::invalid_argument("supported generator counts: 2..6");
	if (max_degree < 1)
		throw std::invalid_argument("max degree must be >= 1");
	switch (policy)
	{
	case HallPolicy::BStar:
		return HallBasis(letters, max_degree, generate_bstar(letters, max_degree), policy);
	case HallPolicy::Lyndon:
		return HallBasis(letters, max_degree, generate_lyndon(letters, max_degree), policy);
	default:
		throw std::invalid_argument("generate requires a named policy");
	}
}

HallBasis::HallBasis(int letters, int max_degree, std::vector<Bracket> elements,
                     HallPolicy policy)
    : letters_(letters), max_degree_(max_degree), policy_(policy),
      elements_(std::move(elements))
{
	by_degree_.resize(static_cast<size_t>(max_degree_) + 1);
	for (int i = 0; i < size(); ++i)
	{
		const Bracket &b = elements_[static_cast<size_t>(i)];
		if (b.length() > max_degree_)
			throw std::invalid_argument("basis element exceeds max degree");
		index_.emplace(b, i);
		by_degree_[static_cast<size_t>(b.length())].push_back(i);
	}
}

int HallBasis::index_of(const Bracket &b) const
{
	auto it = index_.find(b);
	return it == index_.end() ? -1 : it->second;
}

const std::vector<int> &HallBasis::degree_elements(int degree) const
{
	return by_degree_.at(static_cast<size_t>(degree));
}

int HallBasis::count_through_degree(int degree) const
{
	int k = 0;
	for (int n = 1; n <= degree; ++n)
		k += static_cast<int>(degree_elements(n).size());
	return k;
}

std::vector<HallViolation> HallBasis::validate() const
{
	std::vector<HallViolation> v;
	auto pos = [&](const Bracket &b) { return index_of(b); };

	for (int j = 0; j < letters_; ++j)
		if (pos(Bracket::leaf(j)) < 0)
			v.push_back({HallViolation::Kind::MissingGenerator,
			             "missing generator X" + std::to_string(j)});

	std::unordered_map<Bracket, int, BracketHash> seen;
	for (auto &b : elements_)
		if (++seen[b] == 2)
			v.push_back({HallViolation::Kind::DuplicateElement,
			             "duplicate element " + b.str()});

	for (auto &b : elements_)
	{
		if (b.is_leaf())
			continue;
		int pl = pos(b.left()), pr = pos(b.right());
		if (pl < 0 || pr < 0)
		{
			v.push_back({HallViolation::Kind::SubtreeNotMember,
			             "factors of " + b.str() + " not both in the basis"});
			continue;
		}
		if (pl >= pr)
			v.push_back({HallViolation::Kind::OrderViolation,
			             "in " + b.str() + ": " + b.left().str() +
			                 " not below " + b.right().str()});
		if (!b.right().is_leaf() && pos(b.right().left()) > pl)
			v.push_back({HallViolation::Kind::RightFactorViolation,
			             "in " + b.str() + ": left factor of " + b.right().str() +
			                 " exceeds " + b.left().str()});
		if (pos(b) >= 0 && pos(b) <= pl)
			v.push_back({HallViolation::Kind::SelfOrderViolation,
			             b.left().str() + " not below " + b.str()});
	}

	// Completeness: every admissible pair of total degree <= N must appear.
	for (auto &a : elements_)
		for (auto &b : elements_)
		{
			if (a.length() + b.length() > max_degree_)
				continue;
			if (pos(a) >= pos(b))
				continue;
			if (!b.is_leaf() && pos(b.left()) > pos(a))
				continue;
			if (pos(Bracket::pair(a, b)) < 0)
				v.push_back({HallViolation::Kind::MissingPair,
				             "admissible pair missing: (" + a.str() + "," + b.str() + ")"});
		}

	for (int n = 1; n <= max_degree_; ++n)
	{
		long long want = witt_dimension(letters_, n);
		long long got = static_cast<long long>(degree_elements(n).size());
		if (want != got)
			v.push_back({HallViolation::Kind::WittCountMismatch,
			             "degree " + std::to_string(n) + ": " + std::to_string(got) +
			                 " elements, Witt dimension " + std::to_string(want)});
	}
	return v;
}

std::string HallBasis::to_text() const
{
	std::string s = "hall-basis letters=" + std::to_string(letters_) +
	                " degree=" + std::to_string(max_degree_) +
	                " policy=" + hall_policy_name(policy_) + "\n";
	for (auto &b : elements_)
		s += b.str() + "\n";
	return s;
}

void HallBasis::build_solve() const
{
	solve_->degrees.resize(static_cast<size_t>(max_degree_) + 1);
	for (int n = 1; n <= max_degree_; ++n)
	{
		DegreeSolve &sd = solve_->degrees[static_cast<size_t>(n)];
		sd.elems = degree_elements(n);
		if (sd.elems.empty())
			continue;
		size_t k = sd.elems.size();
		for (int idx : sd.elems)
			sd.evals.push_back(evaluate(elements_[static_cast<size_t>(idx)], n));

		// Collect candidate rows (all words appearing in the evaluations).
		std::vector<Word> words;
		{
			std::unordered_map<Word, int, WordHash> word_ix;
			for (auto &e : sd.evals)
				for (auto &[w, c] : e.terms_of_degree(n))
					if (word_ix.emplace(w, 0).second)
						words.push_back(w);
			std::sort(words.begin(), words.end());
		}
		size_t rows = words.size();
		std::vector<std::vector<Rat>> m(rows, std::vector<Rat>(k, Rat(0)));
		{
			std::unordered_map<Word, size_t, WordHash> word_ix;
			for (size_t r = 0; r < rows; ++r)
				word_ix[words[r]] = r;
			for (size_t c = 0; c < k; ++c)
				for (auto &[w, q] : sd.evals[c].terms_of_degree(n))
					m[word_ix[w]][c] = q;
		}

		// Greedy pivot-row selection by column elimination.
		std::vector<std::vector<Rat>> red = m;
		std::vector<size_t> pivot_rows;
		std::vector<bool> used(rows, false);
		for (size_t c = 0; c < k; ++c)
		{
			size_t pr = rows;
			for (size_t r = 0; r < rows; ++r)
				if (!used[r] && sgn(red[r][c]) != 0)
				{
					pr = r;
					break;
				}
			if (pr == rows)
				throw std::logic_error("basis evaluations linearly dependent at degree " +
				                       std::to_string(n));
			used[pr] = true;
			pivot_rows.push_back(pr);
			for (size_t c2 = c + 1; c2 < k; ++c2)
			{
				if (sgn(red[pr][c2]) == 0)
					continue;
				Rat f = red[pr][c2] / red[pr][c];
				for (size_t r = 0; r < rows; ++r)
					if (sgn(red[r][c]) != 0)
						red[r][c2] -= f * red[r][c];
			}
		}

		// Invert the k x k pivot submatrix by Gauss-Jordan.
		std::vector<std::vector<Rat>> a(k, std::vector<Rat>(2 * k, Rat(0)));
		for (size_t r = 0; r < k; ++r)
		{
			for (size_t c = 0; c < k; ++c)
				a[r][c] = m[pivot_rows[r]][c];
			a[r][k + r] = 1;
		}
		for (size_t c = 0; c < k; ++c)
		{
			size_t pr = c;
			while (pr < k && sgn(a[pr][c]) == 0)
				++pr;
			if (pr == k)
				throw std::logic_error("pivot submatrix singular");
			std::swap(a[c], a[pr]);
			Rat inv = 1 / a[c][c];
			for (size_t j = 0; j < 2 * k; ++j)
				a[c][j] *= inv;
			for (size_t r = 0; r < k; ++r)
			{
				if (r == c || sgn(a[r][c]) == 0)
					continue;
				Rat f = a[r][c];
				for (size_t j = 0; j < 2 * k; ++j)
					a[r][j] -= f * a[c][j];
			}
		}

		sd.pivots.reserve(k);
		for (size_t r = 0; r < k; ++r)
			sd.pivots.push_back(words[pivot_rows[r]]);
		sd.ainv.assign(k, std::vector<Rat>(k, Rat(0)));
		for (size_t r = 0; r < k; ++r)
			for (size_t c = 0; c < k; ++c)
				sd.ainv[r][c] = a[r][k + c];
	}
}

const HallBasis::DegreeSolve &HallBasis::solve_data(int degree) const
{
	std::call_once(solve_->once, [this] { build_solve(); });
	return solve_->degrees.at(static_cast<size_t>(degree));
}

} // namespace liesplit
