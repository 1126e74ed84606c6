#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "liesplit/polynomial.hpp"

namespace liesplit {

inline constexpr int kMaxLetters = 8;

// Element of the free magma Br(X): a leaf X_j or an ordered pair of
// brackets. Nodes are immutable and shared; length and per-letter counts
// are cached at construction.
class Bracket {
public:
	Bracket() = default; // empty handle; only valid() brackets may be used

	static Bracket leaf(int letter);
	static Bracket pair(const Bracket &left, const Bracket &right);

	bool valid() const { return static_cast<bool>(n_); }
	bool is_leaf() const { return n_->letter >= 0; }
	int letter() const { return n_->letter; }
	Bracket left() const { return Bracket(n_->left); }
	Bracket right() const { return Bracket(n_->right); }

	// |b|: total number of letters.
	int length() const { return n_->length; }
	// n_j(b): occurrences of X_j.
	int count(int letter) const { return n_->counts[static_cast<size_t>(letter)]; }

	size_t hash() const { return n_->hash; }
	bool operator==(const Bracket &o) const;

	std::string str() const; // "X0" or "[a,b]"
	static Bracket parse(std::string_view text);

	// ad_a^n(b) = (a, (a, ... (a, b))).
	static Bracket ad(const Bracket &a, int n, const Bracket &b);

	// Named elements: M_0 = X1, M_{nu+1} = (M_nu, X0); W_j = ad^2_{M_{j-1}}(X0);
	// Q1 = ad^4_{X1}(X0); Q1_flat = ad^2_{W1}(X0).
	static Bracket M(int nu);
	static Bracket W(int j);
	static Bracket Q1();
	static Bracket Q1_flat();

private:
	struct Node {
		int8_t letter = -1; // >= 0 for leaves
		std::shared_ptr<const Node> left, right;
		int length = 0;
		std::array<uint16_t, kMaxLetters> counts{};
		size_t hash = 0;
	};

	explicit Bracket(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

	std::shared_ptr<const Node> n_;
};

struct BracketHash {
	size_t operator()(const Bracket &b) const { return b.hash(); }
};

// Evaluation map e: Br(X) -> L(X): leaves to generator monomials, pairs to
// commutators. The result is homogeneous of degree |b|.
Polynomial<Rat> evaluate(const Bracket &b, int truncation_degree);

template <class S> Polynomial<S> evaluate_as(const Bracket &b, int n)
{
	return convert_poly<S>(evaluate(b, n));
}

} // namespace liesplit
