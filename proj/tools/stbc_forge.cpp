// SPDX-License-Identifier: Apache-2.0

#include "stbc/cli.hpp"

int main(int argc, char** argv) { return stbc::run_cli(argc, argv); }
