#pragma once

#include <iosfwd>
#include <string>

#include "liesplit/scheme.hpp"

namespace liesplit {

// Scheme file: line-oriented text, '#' comments.
//   scheme
//   alpha-domain R+
//   beta-domain R
//   stage <alpha> <channel> <beta>
// Coefficients are exact rational / Gaussian-rational literals ("3/4",
// "1/2+1/6i"); decimal literals are accepted but mark the scheme as
// float-derived (and round-trip losslessly through %.17g).
Scheme parse_scheme(std::istream &);
std::string format_scheme(const Scheme &);

// Control file:
//   control
//   horizon <T>
//   impulse <time> <channel> <amplitude>
DiracControl parse_control(std::istream &);
std::string format_control(const DiracControl &);

// Dispatches on the leading keyword ("scheme" or "control"); schemes are
// converted through scheme_to_control.
DiracControl parse_control_or_scheme(std::istream &);

Scheme load_scheme_file(const std::string &path);
DiracControl load_control_or_scheme_file(const std::string &path);
void save_scheme_file(const std::string &path, const Scheme &);

// Scalar literal used by the formats above: returns the value and whether
// the text was exact (no decimal/exponent notation).
std::pair<GaussRat, bool> parse_coefficient(const std::string &text);
std::string format_coefficient(const GaussRat &value, bool exact);

// Shared line tokenizer for the directive-style formats: strips '#'
// comments, skips blank lines, returns (line number, tokens).
struct DirectiveLine {
	int number;
	std::vector<std::string> tokens;
};
std::vector<DirectiveLine> tokenize_directives(std::istream &);

} // namespace liesplit
