// SPDX-FileCopyrightText: 2026 the nhsp authors
// SPDX-License-Identifier: MIT
//
// Compiles the amalgamated Catch2 implementation (with its default main)
// once; every test target links against this object library.

#include <catch2/catch_amalgamated.cpp>
