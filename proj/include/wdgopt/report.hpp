#pragma once

#include "wdgopt/verify.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>

namespace wdg {

// %.17g: round-trips every double
std::string fmt17(double v);

// k, t, f_gap, bound, lyapunov, inner_iters
void write_trace_csv(std::ostream& out, const Trace& tr, const RateCertificate* cert = nullptr,
                     const LyapunovSeries* lyap = nullptr);
// k, f_gap, x1, x2, ...
void write_trajectory_csv(std::ostream& out, const Trace& tr);

nlohmann::json to_json(const Params& p);
nlohmann::json to_json(const VerificationReport& r);
nlohmann::json to_json(const RateCertificate& c);
nlohmann::json to_json(const MonotonicityReport& m);
nlohmann::json trace_summary(const Trace& tr);

}  // namespace wdg
