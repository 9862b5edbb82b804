// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "vqebench/cli.hpp"

int main(int argc, char** argv) { return vqebench::run_cli(argc, argv, std::cout, std::cerr); }
