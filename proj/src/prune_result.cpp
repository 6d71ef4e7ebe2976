#include "pocket/prune_result.hpp"

#include <iomanip>
#include <limits>
#include <ostream>

namespace pocket {

void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace) {
  out << "iter,norm_gap,relative_threshold,reciprocal_relative_threshold,inv_threshold\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& e : trace)
    out << e.iter << ',' << e.norm_gap << ',' << e.relative_threshold << ','
        << e.reciprocal_relative_threshold << ',' << e.threshold << '\n';
}

} // namespace pocket
