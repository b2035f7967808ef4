/*
 Copyright 2026 The flipopt Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <cmath>
#include <string>

#include "flipopt/aero.hpp"
#include "flipopt/error.hpp"

namespace flipopt {

VehicleState initial_state(const NondimScenario& scn) {
    VehicleState s;
    s.x() = scn.r0[0];
    s.y() = scn.r0[1];
    s.theta() = scn.theta0;
    s.u() = scn.v0[0];
    s.v() = scn.v0[1];
    s.omega() = scn.omega0;
    s.m() = scn.wet_mass;
    s.delta_d() = 0.0;
    return s;
}

VehicleState rk4_step(const VehicleState& s, const ControlInput& c, const AeroModel& model,
                      double dt, const NondimScenario& scn, int step_index) {
    auto aero = [&](const VehicleState& y) { return aero_forces(y, model, scn); };
    auto check = [step_index](int stage, const StateDerivative& k) {
        for (int i = 0; i < kStateDim; ++i) {
            if (!std::isfinite(k[i]))
                throw NumericalError("non-finite derivative of " + std::string(kStateNames[i]) +
                                         " at step " + std::to_string(step_index) + ", stage " +
                                         std::to_string(stage),
                                     step_index, "stage " + std::to_string(stage));
        }
    };
    return rk4_step_with(s, c, aero, dt, scn, check);
}

}  // namespace flipopt
