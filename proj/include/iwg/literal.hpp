/* Text form of series for the command line and config files.
 *
 *   literal := [ "p^" INT "^-1" "*" ] ( "(" poly ")" | poly )
 *   poly    := [sign] term { sign term }
 *   term    := factor { "*" factor }
 *   factor  := INT | "p" [ "^" INT ] | var [ "^" INT ]
 *   var     := "X" | "pi"
 *
 * Examples: "X^2 + p", "p^2 * (1 - 3*X + X^4)", "p^3^-1 * (p*X + 2)".
 * Whitespace is ignored.  The prefix p^B^-1 sets the denominator p^-B.
 */
#pragma once

#include "iwg/series.hpp"

#include <string>

namespace iwg {

/// throws DomainError naming the offending position
TruncatedSeries parse_series_literal(const std::string& text, unsigned long p, size_t M, long N);

/// inverse of parse_series_literal for series without denominator tricks
std::string format_series_literal(const TruncatedSeries& f);

}  // namespace iwg
