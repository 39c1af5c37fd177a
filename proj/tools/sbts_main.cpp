#include "sbts/cli_config.hpp"

int main(int argc, char** argv) { return sbts::tool_main(argc, argv); }
