#pragma once

#include <json.hpp>
#include <string>

#include "plap/energy.hpp"
#include "plap/solver.hpp"
#include "plap/space.hpp"
#include "plap/verify.hpp"

namespace plap {

using json = nlohmann::ordered_json;

/// Space file: {"vertices": [{id, mu, role, perimeter?, f?}],
///              "edges": [{a, b, length}]}. Unknown fields are rejected.
SpaceSpec parse_space_spec(const json& j);
MetricMeasureSpace load_space(const std::string& path);
json space_to_json(const SpaceSpec& spec);

/// Problem file: {p, c, gamma, q, f: {vertex_id: value}}. A missing f
/// falls back to the boundary data carried by the space file.
ProblemSpec load_problem(const std::string& path,
                         const MetricMeasureSpace& space);
ProblemSpec problem_from_json(const json& j, const MetricMeasureSpace& space);

json hypothesis_to_json(const HypothesisReport& report,
                        const EmbeddingConstants& embedding);
json minimizer_to_json(const MetricMeasureSpace& space,
                       const MinimizerResult& result);
std::string degiorgi_csv(const MetricMeasureSpace& space,
                         const std::vector<DeGiorgiSample>& samples);

void write_text(const std::string& path, const std::string& content);
json read_json(const std::string& path);

}  // namespace plap
