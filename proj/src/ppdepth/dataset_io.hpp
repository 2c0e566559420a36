#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "ppdepth/types.hpp"

namespace ppdepth {

// Line-oriented plain text, one realization per line:
//   [label:] t1 t2 t3 ...
// '#' starts a comment. A line that is blank before comment stripping is an
// empty realization; a line that is blank only after stripping a comment is
// skipped. Labeled and unlabeled lines cannot be mixed.
Dataset parse_dataset(std::istream& in, const TimeDomain& domain);
Dataset parse_dataset(std::string_view text, const TimeDomain& domain);

std::string render_dataset(const Dataset& d);

Dataset read_dataset_file(const std::string& path, const TimeDomain& domain);
void write_dataset_file(const std::string& path, const Dataset& d);

}  // namespace ppdepth
