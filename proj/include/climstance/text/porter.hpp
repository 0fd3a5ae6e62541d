#pragma once

#include <string>
#include <string_view>

namespace climstance::text {

// One pass of the classic Porter suffix-stripping algorithm over a
// lowercase ASCII word. Words of length <= 2 are returned unchanged.
std::string porter_stem(std::string_view word);

// porter_stem iterated to a fixed point. A single pass is not always
// stable under re-application ("agreed" -> "agre" -> "agr"); the pipeline
// needs stable tokens so that re-tokenizing its own output is a no-op.
std::string porter_stem_fixed(std::string_view word);

}  // namespace climstance::text
