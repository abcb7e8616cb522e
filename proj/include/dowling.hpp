#pragma once

// Core library. The JSON layer (dowling/serialize.hpp) and the command line
// driver (dowling/cli.hpp) are separate because they pull in nlohmann_json and CLI11.
#include "dowling/rational.hpp"
#include "dowling/series.hpp"
#include "dowling/poset.hpp"
#include "dowling/structures.hpp"
#include "dowling/identities.hpp"
#include "dowling/perm_stats.hpp"
#include "dowling/el_shelling.hpp"
