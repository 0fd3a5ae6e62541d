#include "climstance/common/paths.hpp"

#include <cstdlib>

#ifndef CLIMSTANCE_DEFAULT_DATA_DIR
#define CLIMSTANCE_DEFAULT_DATA_DIR "data"
#endif

namespace climstance {

std::string default_data_dir() {
    if (const char* env = std::getenv("CLIMSTANCE_DATA"); env && *env) return env;
    return CLIMSTANCE_DEFAULT_DATA_DIR;
}

}  // namespace climstance
