#include "vfw/cli.hpp"

namespace vfw {
int cli_main(int, char**) { return 3; }
}  // namespace vfw
