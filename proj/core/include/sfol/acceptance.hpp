#pragma once

#include <ostream>
#include <string>

namespace sfol::acceptance {

/// Runs every acceptance criterion at full scale, printing one pass/fail
/// line per criterion. Scenario artifacts (CSV/JSON) are written under
/// artifacts_dir. Returns the number of failed criteria.
int run_all(const std::string& artifacts_dir, std::ostream& out);

}  // namespace sfol::acceptance
