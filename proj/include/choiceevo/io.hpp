#ifndef CHOICEEVO_IO_HPP
#define CHOICEEVO_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "choiceevo/dynamics.hpp"
#include "choiceevo/metagame.hpp"

namespace choiceevo {

// CSV layout: a header "type,<label>,..." followed by one row per type,
// "<label>,<value>,...", values fixed with 6 decimals.
void write_metagame_csv(std::ostream& os, const MetaGame& m);
MetaGame read_metagame_csv(std::istream& is);

/// Reads a meta-game saved as JSON or CSV; the format is detected from the
/// first non-blank character ('{' means JSON).
MetaGame read_metagame_file(const std::filesystem::path& path);

// One row per recorded state: "start,iteration,<label>,...".
void write_trajectory_csv_header(std::ostream& os, std::span<const std::string> labels);
void write_trajectory_csv_rows(std::ostream& os, int start, const Trajectory& t);

std::string format_fixed6(double v);

}  // namespace choiceevo

#endif  // CHOICEEVO_IO_HPP
