#pragma once

#include <iosfwd>
#include <string>

#include "tailasym/paired_sample.hpp"

namespace tailasym {

/// Reads two numeric columns separated by a comma. A first line that does not
/// parse as numbers is taken as a header; LF and CRLF line endings and blank
/// trailing lines are accepted. Throws DataError naming the offending line.
PairedSample read_pair_csv(std::istream& is, Scale scale);
PairedSample read_pair_csv(const std::string& path, Scale scale);

/// Writes `u1,u2` (uniform/pseudo) or `x1,x2` (raw) followed by the rows,
/// each number in shortest round-trip form.
void write_pair_csv(std::ostream& os, const PairedSample& sample);

/// Shortest round-trip decimal representation of a finite double.
std::string format_double(double v);

} // namespace tailasym
