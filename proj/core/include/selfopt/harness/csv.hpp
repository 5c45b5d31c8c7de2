#pragma once

#include <ostream>
#include <string>

#include "selfopt/harness/experiment.hpp"

namespace selfopt::harness {

// Pinned deterministic formatting (snprintf-based): identical inputs always
// serialize to identical bytes.
std::string format_double(double value);

void write_trajectory_header(std::ostream& out);
void write_trajectory_row(std::ostream& out, const StepRow& row, const Alphabet& actions);

void write_index_header(std::ostream& out);
void write_index_row(std::ostream& out, const RunSummary& summary);

}  // namespace selfopt::harness
