#pragma once

#include <ostream>

namespace boxlab {

/// Subcommands partition, expansion, cluster, separation, cossum,
/// multiplicity, constancy, rankcheck, gapgrowth. Each writes
/// <out>/<subcommand>.csv and <out>/<subcommand>.json.
/// Returns 0 when every assertion passes, 1 on assertion failure, 2 on a
/// configuration error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace boxlab
