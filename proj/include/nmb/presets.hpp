#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nmb/experiment.hpp"

namespace nmb {

// fig2: Gaussian context-switching bandit with the three Doya-DaYu variants
//       and the tuned Boltzmann / D-UCB baselines.
// gridD: baseline grids evaluated at total_steps = 4 * block_length.
// appendixF: Bernoulli reversal bandit with a temperature stimulation schedule.
ExperimentConfig preset(std::string_view name);

std::vector<std::string> preset_names();

}  // namespace nmb
