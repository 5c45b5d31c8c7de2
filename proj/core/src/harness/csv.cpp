#include <cstdio>

#include "selfopt/harness/csv.hpp"
#include "selfopt/rational.hpp"

namespace selfopt::harness {

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

void write_trajectory_header(std::ostream& out) {
    out << "step,phase,nu_t,nu_e,s,action,reward,running_avg\n";
}

void write_trajectory_row(std::ostream& out, const StepRow& row, const Alphabet& actions) {
    out << row.step << ',' << agent::phase_name(row.phase) << ',' << row.nu_t << ','
        << row.nu_e << ',' << row.s << ','
        << actions.labels.at(static_cast<std::size_t>(row.action.id)) << ','
        << decimal_string(row.reward) << ',' << format_double(row.running_avg) << '\n';
}

void write_index_header(std::ostream& out) {
    out << "seed,horizon,final_running_avg,true_optimal_value,abs_error,final_s,"
           "final_nu_t,idle_steps,exploit_steps,explore_steps,prepare_count\n";
}

void write_index_row(std::ostream& out, const RunSummary& summary) {
    out << summary.seed << ',' << summary.horizon << ','
        << format_double(summary.final_running_avg) << ','
        << format_double(summary.true_optimal_value) << ','
        << format_double(summary.abs_error) << ',' << summary.final_s << ','
        << summary.final_nu_t << ',' << summary.phases.idle << ','
        << summary.phases.exploit << ',' << summary.phases.explore << ','
        << summary.prepare_count << '\n';
}

}  // namespace selfopt::harness
