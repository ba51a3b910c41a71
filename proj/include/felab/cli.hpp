#pragma once

#include <string>
#include <vector>

namespace felab {

// Exit codes: 0 success, 1 domain or threshold error, 2 non-convergence, 3 usage error.
int dispatch(const std::vector<std::string>& argv);

}  // namespace felab
