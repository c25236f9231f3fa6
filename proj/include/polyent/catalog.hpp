#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "polyent/hyperspace.hpp"
#include "polyent/metric_system.hpp"
#include "polyent/pl_map.hpp"
#include "polyent/systems.hpp"

namespace polyent::catalog {

// Shared catalog graphs (unit edges).
std::shared_ptr<const MetricGraph> unit_interval();
std::shared_ptr<const MetricGraph> unit_circle();
// Centre "c" with legs to "a", "b", "d"; edges 0,1,2 run from the centre.
std::shared_ptr<const MetricGraph> tripod();
// Loop of length 1 at "j" (edge 0) and a stick from "j" to "e" (edge 1).
std::shared_ptr<const MetricGraph> lollipop();

PLMap identity();                 // on [0,1]
PLMap tent();                     // 1 - |2t - 1|
PLMap pl_contract();              // breakpoints (0,0), (1/2,1/4), (1,1)
PLMap flip();                     // t -> 1 - t on [0,1]
PLMap rotation(const Rational& angle);  // by angle mod 1 on the unit circle
PLMap tripod_rotate();            // leg i -> leg i+1, isometrically
PLMap tripod_contract();          // pl_contract profile on each leg, from the centre
PLMap lollipop_contract();        // pl_contract profile on the loop and the stick
// Per-edge homeomorphism with breakpoint (1/2, 3/4); fixes every vertex.
PLMap bend(std::shared_ptr<const MetricGraph> graph);

// "phi" / "golden" give (sqrt 5 - 1)/2 rounded to a double (then exact);
// otherwise p/q or a decimal.
Rational parse_angle(std::string_view text);

// Names: identity, tent, pl_contract, flip, rotation(a), tripod_rotate,
// tripod_contract, lollipop_contract, bend.
PLMap map_by_name(std::string_view name);
bool is_map_name(std::string_view name);
std::vector<std::string> map_names();

// System expressions:
//   map-name | prod(S,S) | pow(S,k) | conj(S,h) | F1(S) | F2(S) | F3(S)
// where h is bend or a catalog homeomorphism of the same graph.
SystemPtr system_by_name(std::string_view expression);

}  // namespace polyent::catalog
