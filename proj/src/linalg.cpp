#include "relpur/linalg.hpp"

namespace relpur {

Bipartition::Bipartition(int sites, int system_sites) : sites_(sites), system_sites_(system_sites) {
  if (system_sites < 1 || system_sites >= sites) {
    throw std::invalid_argument("Bipartition: need 1 <= system_sites < sites, got system_sites=" +
                                std::to_string(system_sites) + ", sites=" + std::to_string(sites));
  }
  if (sites > 24) {
    throw std::invalid_argument("Bipartition: dense representation limited to 24 sites");
  }
}

}  // namespace relpur
