#pragma once

#include <string>

#include "tcrrgu/model.hpp"

namespace tcrrgu {

// Parses an instance document:
//
//   {
//     "nodes":     [{"id", "name", "demand": [{"price", "quantity"}, ...]}],
//     "edges":     [{"id", "from", "to", "cap_neg", "cap_pos"}],
//     "scenarios": [{"id", "probability", "resources", "cap_neg", "cap_pos"}],
//     "alpha":     0.25
//   }
//
// Ids are 1-based and must match array order.  Structural problems (missing
// keys, wrong types) throw ParseError naming the JSON path; the parsed
// instance is NOT semantically validated here.
Instance parse_instance(const std::string& text);

// Reads, parses and fully validates an instance file.  Throws IoError when
// the file cannot be read, ParseError for structural problems, and
// ValidationError (with every violated invariant) for semantic ones.
Instance load_instance(const std::string& path);

}  // namespace tcrrgu
