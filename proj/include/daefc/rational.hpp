#pragma once

#include <gmpxx.h>

#include <string>

namespace daefc {

// Exact rational scalar. GMP keeps values canonical (reduced, positive
// denominator), which is what the "p/q" wire format requires.
using Rat = mpq_class;

// Parses "p", "p/q" or a plain integer literal; throws on malformed input.
Rat parse_rational(const std::string& text);

// Canonical "p" or "p/q" with q > 1.
std::string to_string(const Rat& value);

double to_double(const Rat& value);

} // namespace daefc
