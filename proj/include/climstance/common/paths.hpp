#pragma once

#include <string>

namespace climstance {

// Directory holding the bundled lexicons and corpora. Resolution order:
// CLIMSTANCE_DATA environment variable, then the compiled-in default
// (the repository's data/ directory).
std::string default_data_dir();

}  // namespace climstance
