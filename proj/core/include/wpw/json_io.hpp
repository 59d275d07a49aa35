#pragma once

#include "wpw/bounds.hpp"
#include "wpw/eigen1d.hpp"
#include "wpw/slicing.hpp"
#include "wpw/weights.hpp"

#include <string>
#include <vector>

namespace wpw {

/// {family, params, L} with exact (shortest round-trip) doubles.
std::string weight_to_json(const WeightFunction& w);
WeightFunction weight_from_json(const std::string& text);

/// {lambda, x_zero, bracket, residual, trace: {x: [...], u: [...]}}.
std::string eigen_result_to_json(const EigenResult& r);

/// Two-column x,u CSV at 1e-9 precision.
std::string trace_to_csv(const EigenResult& r);

std::string certificate_to_json(const BoundCertificate& c);
BoundCertificate certificate_from_json(const std::string& text);

/// One JSON object per line.
std::string certificates_to_jsonl(const std::vector<BoundCertificate>& cs);

/// kind,p,scale,lambda,bound,margin,pass rows with a header.
std::string certificates_to_csv(const std::vector<BoundCertificate>& cs);

/// Slices as vertex lists with frames, widths and moments.
std::string decomposition_to_json(const Decomposition& d);

/// Standalone SVG with per-slice fill colored by d_i.
std::string decomposition_to_svg(const Decomposition& d);

} // namespace wpw
