#pragma once

/**
 * @file cli.hpp
 * @brief Command-line front end: simulate / analyze / roots / envelope /
 *        sweep / conjecture, emitting CSV and JSON artifacts.
 *
 * Exit codes: 0 success, 1 invalid arguments, 2 numerical failure (guard
 * trip or root-finder non-convergence), 3 theorem-invariant violation found
 * during analysis.
 */

namespace qrd {

int run_cli(int argc, const char* const* argv);

}  // namespace qrd
