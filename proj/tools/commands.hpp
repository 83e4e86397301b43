#pragma once

#include "CLI11.hpp"
#include "cli_common.hpp"

namespace cli {

void add_pressure(CLI::App& app, Context& ctx);
void add_dimension(CLI::App& app, Context& ctx);
void add_holes(CLI::App& app, Context& ctx);
void add_construct(CLI::App& app, Context& ctx);
void add_recurrence(CLI::App& app, Context& ctx);
void add_spectrum(CLI::App& app, Context& ctx);
void add_verify(CLI::App& app, Context& ctx);

}  // namespace cli
